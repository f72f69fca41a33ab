#pragma once

#include <stdexcept>
#include <string>

namespace schottky {

// Error kinds surfaced to callers and mapped to CLI diagnostics. Precondition
// violations on well-formed inputs throw Error; structurally malformed input
// (bad JSON, unknown field kind, ...) throws ParseError.
enum class ErrorKind {
  TooFewResidues,
  HenselFails,
  DegenerateTriple,
  DegeneratePair,
  PoleInput,
  IdentityInput,
  NotNilpotentDistance,
  EmptyWord,
  DuplicatePoint,
  TooFewPoints,
  UnknownVertex,
  NotNested,
  NoNilpotentEdgeInCycle,
  NotStabilized,
  UnsupportedFormat,
  UnsupportedWeight,
  InvalidArgument,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::TooFewResidues: return "TooFewResidues";
    case ErrorKind::HenselFails: return "HenselFails";
    case ErrorKind::DegenerateTriple: return "DegenerateTriple";
    case ErrorKind::DegeneratePair: return "DegeneratePair";
    case ErrorKind::PoleInput: return "PoleInput";
    case ErrorKind::IdentityInput: return "IdentityInput";
    case ErrorKind::NotNilpotentDistance: return "NotNilpotentDistance";
    case ErrorKind::EmptyWord: return "EmptyWord";
    case ErrorKind::DuplicatePoint: return "DuplicatePoint";
    case ErrorKind::TooFewPoints: return "TooFewPoints";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::NotNested: return "NotNested";
    case ErrorKind::NoNilpotentEdgeInCycle: return "NoNilpotentEdgeInCycle";
    case ErrorKind::NotStabilized: return "NotStabilized";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::UnsupportedWeight: return "UnsupportedWeight";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace schottky

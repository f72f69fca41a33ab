#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "schottky/polynomial.hpp"
#include "schottky/value_element.hpp"

namespace schottky {

class Field;
using FieldPtr = std::shared_ptr<const Field>;

enum class FieldKind {
  RationalPadic,   // Q with the p-adic valuation, rank 1
  FuncfieldTadic,  // Q(t) or F_p(t) with the t-adic valuation, rank 1
  Rank2Composite,  // Q(t), t-adic order refined by v_p on the trailing coefficient
  QuadExt,         // base(sqrt(pi)) for a ramifier pi of odd leading valuation
};

using BasePayload = std::variant<Rational, RatFuncQ, RatFuncP>;

// a + b*sqrt(pi) over the base field of a QuadExt.
struct QuadValue {
  BasePayload re, im;
};

using Payload = std::variant<Rational, RatFuncQ, RatFuncP, QuadValue>;

class FieldElement;

/**
 * Immutable descriptor of a concrete valued field. These are dense exact
 * subfields standing in for complete fields: all arithmetic, valuations and
 * truncations are exact, and completeness only enters through explicitly
 * approximate results (Hensel roots carry their achieved precision).
 */
class Field : public std::enable_shared_from_this<Field> {
 public:
  static FieldPtr rational_padic(long p);
  static FieldPtr funcfield_tadic_q();
  static FieldPtr funcfield_tadic_fp(long p);
  static FieldPtr rank2_composite(long p);
  static FieldPtr quad_ext(FieldPtr base, const FieldElement& ramifier);

  FieldKind kind() const { return kind_; }
  long p() const { return p_; }
  int rank() const { return rank_; }
  // Characteristic of the field itself (p only for F_p(t) and its extension).
  long characteristic() const;
  // Number of residue classes; nullopt for the infinite residue field Q.
  std::optional<long> residue_size() const;

  const FieldPtr& base() const { return base_; }
  const FieldElement& ramifier() const;
  const ValueElement& ramifier_valuation_half() const { return ram_val_half_; }

  bool same(const Field& o) const;

  // Does lambda lie in the value lattice realized by actual elements
  // (Z^r, extended by Z^r + v(pi)/2 for a quadratic ramified extension)?
  bool lattice_contains(const ValueElement& lambda) const;
  // Smallest strictly positive element of the value lattice.
  ValueElement lattice_step() const;

  FieldElement zero() const;
  FieldElement one() const;
  FieldElement from_long(long n) const;
  FieldElement from_rational(const Rational& q) const;
  // Variable t of the function-field instances.
  FieldElement t_element() const;
  // sqrt(pi) in a quadratic extension.
  FieldElement sqrt_ramifier() const;
  // Inject a base-field element into a quadratic extension.
  FieldElement coerce(const FieldElement& base_elem) const;

  // An element of valuation lambda, built from uniformizer powers;
  // lambda must lie in the value lattice.
  FieldElement uniformizer_power(const ValueElement& lambda) const;

  // Parse the canonical string form of an element ("-3/4", "2+t^1+t^3",
  // "(1+t^1)/(t^2)"; for quadratic extensions a base-field string).
  FieldElement parse(const std::string& s) const;

  std::string spec_string() const;  // e.g. "rational-padic(3)"

 private:
  Field() = default;
  FieldKind kind_ = FieldKind::RationalPadic;
  long p_ = 0;  // prime for RationalPadic/Rank2Composite, coefficient prime for F_p(t), else 0
  int rank_ = 1;
  FieldPtr base_;  // QuadExt only
  std::shared_ptr<FieldElement> ramifier_;
  ValueElement ram_val_half_;
};

/**
 * Element of a concrete valued field. Values are kept canonical (reduced
 * fractions, reduced rational functions with monic denominator), so
 * structural equality is field equality.
 */
class FieldElement {
 public:
  FieldElement() = default;
  FieldElement(FieldPtr field, Payload v) : field_(std::move(field)), v_(std::move(v)) {}

  const FieldPtr& field() const { return field_; }
  const Payload& payload() const { return v_; }
  bool is_zero() const;

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement operator/(const FieldElement& o) const;
  FieldElement inverse() const;
  bool operator==(const FieldElement& o) const;

  ValueElement valuation() const;

  std::string to_string() const;

 private:
  FieldPtr field_;
  Payload v_;
};

// Deterministic total order used for canonical sorting (not the field order).
int compare_elements(const FieldElement& a, const FieldElement& b);

/**
 * Canonical representative of x modulo the ball {z : v(z) >= rho}: the
 * truncation of the uniformizer expansion of x keeping exactly the digits of
 * valuation < rho. Independent of the representative, idempotent, and exact.
 */
FieldElement canonical_center(const FieldElement& x, const ValueElement& rho);

/**
 * n pairwise-inequivalent residue representatives (pairwise differences of
 * valuation exactly zero). Errors with TooFewResidues when the residue field
 * has fewer than n elements.
 */
std::vector<FieldElement> residue_representatives(const FieldPtr& field, long n);

struct HenselResult {
  FieldElement root;      // root inside the basin (the one of larger valuation)
  FieldElement cofactor;  // the other root of x^2 + b1*x + b0
  bool exact = false;
  ValueElement achieved;  // v(f(root)); bottom when the root is exact
};

/**
 * Root of the monic quadratic f(x) = x^2 + b1*x + b0 by Hensel/Newton
 * iteration. Precondition (or HenselFails): v(b0) - 2*v(b1) is topologically
 * nilpotent, which separates the two roots by valuation. When the
 * discriminant is a perfect square the exact root is returned; otherwise the
 * iteration runs until v(f(x)) >= precision, truncating intermediate values
 * to keep representations small.
 */
HenselResult hensel_fixed_root(const FieldElement& b1, const FieldElement& b0,
                               const ValueElement& precision);

// Exact square root, if one exists in the field.
std::optional<FieldElement> try_sqrt(const FieldElement& x);

}  // namespace schottky

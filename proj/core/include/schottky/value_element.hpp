#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <vector>

namespace schottky {

using Rational = mpq_class;

/**
 * Element of the value group of a valued field, stored additively.
 *
 * The value group is Q^r with the lexicographic order; an element is kept as
 * a vector of exact rationals plus a "bottom" flag for the valuation of 0.
 * The additive order here is the reverse of the multiplicative order on
 * absolute values: |x| <= |y| iff v(x) >= v(y). In particular bottom (= v(0),
 * additively +infinity) is the largest element additively, which matches
 * |0| <= everything multiplicatively.
 *
 * The same type carries ball radii (valuation of a difference from the
 * center) and path lengths / edge weights (additive distance, >= 0, with
 * larger meaning farther apart).
 */
class ValueElement {
 public:
  ValueElement() : bottom_(false) {}
  ValueElement(int rank, bool bottom) : coords_(rank, Rational(0)), bottom_(bottom) {}
  explicit ValueElement(std::vector<Rational> coords)
      : coords_(std::move(coords)), bottom_(false) {}

  static ValueElement zero(int rank) { return ValueElement(rank, false); }
  static ValueElement bottom(int rank) { return ValueElement(rank, true); }
  // Convenience for rank-aware integer vectors, e.g. make({2,-1}).
  static ValueElement make(std::vector<long> coords);

  int rank() const { return static_cast<int>(coords_.size()); }
  bool is_bottom() const { return bottom_; }
  bool is_zero() const;
  const std::vector<Rational>& coords() const { return coords_; }

  // Additive group operations; bottom is absorbing.
  ValueElement operator+(const ValueElement& o) const;
  ValueElement operator-(const ValueElement& o) const;
  ValueElement operator-() const;
  ValueElement scaled(long n) const;
  // Exact halving in Q^r (lattice membership is a separate question).
  ValueElement halved() const;

  // Lexicographic comparison in the additive convention; bottom is maximal.
  std::strong_ordering operator<=>(const ValueElement& o) const;
  bool operator==(const ValueElement& o) const;

  /**
   * True iff n*lambda eventually exceeds every element of the value group,
   * which for lexicographic Q^r means the leading coordinate is strictly
   * positive. Multiplicative reading: |q| is topologically nilpotent (q^n -> 0)
   * iff v(q) has positive leading coordinate.
   */
  bool is_top_nilpotent() const;

  bool all_integral() const;

  std::string to_string() const;  // e.g. "[2]" or "[2,-1]" or "[1/2]"

 private:
  std::vector<Rational> coords_;
  bool bottom_;
};

// min/max in the additive lexicographic order (bottom maximal).
const ValueElement& min_add(const ValueElement& a, const ValueElement& b);
const ValueElement& max_add(const ValueElement& a, const ValueElement& b);

}  // namespace schottky

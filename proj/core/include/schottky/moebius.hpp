#pragma once

#include <optional>
#include <string>
#include <vector>

#include "schottky/ball.hpp"
#include "schottky/field.hpp"

namespace schottky {

/** Invertible 2x2 matrix over a concrete valued field, acting on P^1. */
class Moebius {
 public:
  Moebius(FieldElement a, FieldElement b, FieldElement c, FieldElement d);
  static Moebius identity(const FieldPtr& field);

  const FieldElement& a() const { return a_; }
  const FieldElement& b() const { return b_; }
  const FieldElement& c() const { return c_; }
  const FieldElement& d() const { return d_; }
  const FieldPtr& field() const { return a_.field(); }

  FieldElement det() const { return a_ * d_ - b_ * c_; }
  FieldElement trace() const { return a_ + d_; }

  Moebius operator*(const Moebius& o) const;
  Moebius inverse() const;  // the adjugate (projectively the inverse)
  bool is_identity_projective() const;
  bool proportional_to(const Moebius& o) const;

  ProjPoint apply(const ProjPoint& p) const;

  /**
   * Valuation of the derivative at p (in the chart w = 1/z when p is
   * infinity): v(det) - 2 v(c p + d), respectively v(det) - 2 v(c) at
   * infinity (v(d) - v(a) when c = 0).
   */
  ValueElement derivative_valuation(const ProjPoint& p) const;

  std::string to_string() const;  // [[a,b],[c,d]]

 private:
  FieldElement a_, b_, c_, d_;
};

/**
 * Image of a closed ball as a subset of P^1: a closed ball when the pole is
 * outside, the complement region around gamma(infinity) when the pole lies
 * in the ball.
 */
Region act_on_region(const Moebius& g, const Ball& ball);

/**
 * Induced isometry of the Lambda-tree of balls: the vertex gamma . B. Equals
 * the region image for pole-free balls, and B(gamma(inf), v(det) - 2 v(c) - a)
 * when the pole lies in the ball. (On the boundary sphere both formulas give
 * the same vertex.)
 */
Ball act_on_tree(const Moebius& g, const Ball& ball);

/** Does g fix the standard vertex B(0, 0)? */
bool stabilizes_standard_ball(const Moebius& g);

/**
 * The conjugation invariant trace^2 / det. Projectively well defined; zero
 * exactly for elements of order two. Its inverse has a strictly positive
 * leading valuation coordinate iff g is hyperbolic.
 */
FieldElement varpi(const Moebius& g);

enum class MoebiusClass {
  Hyperbolic,             // |trace^2/det| "large": two fixed points, translation
  FiniteOrderCandidate,   // exact finite projective order, or parabolic in char p
  NonHyperbolicInfinite,  // infinite order, fixes a vertex or an end
};

struct Classification {
  MoebiusClass cls;

  // Hyperbolic data (only meaningful when cls == Hyperbolic):
  ValueElement multiplier;  // v(det) - 2 v(trace) > 0, the translation length
  std::optional<ProjPoint> attracting, repelling;
  bool fixed_exact = false;     // fixed points exact (else Hensel approximations)
  ValueElement fixed_achieved;  // v of the char. polynomial at the approximate root

  // Finite-order data:
  std::optional<int> order;  // projective order when found by the power test
};

/**
 * Classify the action on the tree. Hyperbolic iff trace != 0 and
 * v(det) - 2 v(trace) has strictly positive leading coordinate; then the
 * fixed points are computed exactly when the characteristic polynomial
 * splits, else Hensel-approximated to the given precision. Non-hyperbolic
 * elements are tested for projective order <= max_order exactly; parabolic
 * elements in characteristic p are finite-order candidates as well.
 * Throws IdentityInput on the identity.
 */
Classification classify(const Moebius& g, const ValueElement& precision,
                        int max_order = 12);

/**
 * Sample orbit g^k(p) for k = -n..n with pairwise-valuation statistics.
 * `uniform_separation` holds when all pairwise differences of finite orbit
 * points share one valuation (the non-compactness witness for unit
 * multipliers over an infinite residue field); for hyperbolic g the report
 * carries the fixed points and the valuations toward the attracting one,
 * which increase along the orbit.
 */
struct OrbitReport {
  std::vector<ProjPoint> points;  // exponents -n .. n in order
  bool uniform_separation = false;
  std::optional<ValueElement> min_valuation, max_valuation;  // pairwise diffs
  std::optional<ProjPoint> attracting, repelling;            // when hyperbolic
  std::vector<ValueElement> toward_attracting;  // v(g^k(p) - attracting), k asc
  bool attracting_monotone = false;  // those valuations never decrease
};

OrbitReport orbit_report(const Moebius& g, const ProjPoint& p, int n,
                         const ValueElement& precision);

/**
 * A hyperbolic element with translation length l(b, b') mapping the vertex b
 * to the vertex b'. q must be an element with v(q) = l(b, b') (so the length
 * must lie in the value lattice); the repelling fixed point is placed in b
 * (disjoint case) or at the common center / infinity (nested cases).
 * Throws NotNilpotentDistance when l(b, b') does not have strictly positive
 * leading coordinate (in particular when b == b').
 */
Moebius hyperbolic_from_balls(const Ball& from, const Ball& to, const FieldElement& q);

}  // namespace schottky

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "schottky/field.hpp"
#include "schottky/value_element.hpp"

namespace schottky {

/** Point of the projective line over a concrete valued field. */
class ProjPoint {
 public:
  static ProjPoint infinity(FieldPtr field) { return ProjPoint(std::move(field)); }
  static ProjPoint finite(FieldElement x) { return ProjPoint(std::move(x)); }

  bool is_infinity() const { return inf_; }
  const FieldElement& value() const;
  const FieldPtr& field() const { return field_; }

  bool operator==(const ProjPoint& o) const;
  std::string to_string() const;  // "inf" or the element string

 private:
  explicit ProjPoint(FieldPtr field) : field_(std::move(field)), inf_(true) {}
  explicit ProjPoint(FieldElement x)
      : field_(x.field()), x_(std::move(x)), inf_(false) {}
  FieldPtr field_;
  FieldElement x_;
  bool inf_ = false;
};

/**
 * Closed ball B(c, a) = { z : v(z - c) >= a } with a in the value lattice.
 * These are the vertices of the Lambda-tree: larger additive radius means a
 * smaller ball, deeper in the tree. The center is canonicalized on
 * construction (digits of valuation >= a are dropped), so equality of balls
 * is structural equality.
 */
class Ball {
 public:
  Ball(FieldElement center, ValueElement radius);

  const FieldElement& center() const { return center_; }
  const ValueElement& radius() const { return radius_; }
  const FieldPtr& field() const { return center_.field(); }

  bool contains(const FieldElement& z) const;
  bool contains(const ProjPoint& p) const;
  bool contains(const Ball& o) const;  // o is a subset of this ball
  bool operator==(const Ball& o) const;

  std::string to_string() const;  // B(c;[a])

 private:
  FieldElement center_;
  ValueElement radius_;
};

/** Standard vertex B(0, 0), the base point of the tree. */
Ball standard_ball(const FieldPtr& field);

/** Smallest ball containing both (their join in the tree order). */
Ball join(const Ball& x, const Ball& y);

/**
 * Additive path length between two vertices of the ball tree:
 * (a_x - a_join) + (a_y - a_join), always >= 0. The multiplicative distance
 * of the construction is the inverse image of this value; the distance is
 * "large" (inverse topologically nilpotent) iff this length has strictly
 * positive leading coordinate.
 */
ValueElement length(const Ball& x, const Ball& y);

/** Is x on the tree segment [u, v]?  (Additive lengths add up exactly.) */
bool between(const Ball& u, const Ball& x, const Ball& v);

/** Meeting vertex of the three pairwise segments. */
Ball median(const Ball& x, const Ball& y, const Ball& z);

/**
 * The vertex assigned to three distinct points of the projective line: the
 * meeting vertex of the paths from the three points into the tree. For
 * finite points it is the ball around the closest pair with radius their
 * valuation distance; with p3 = infinity it is B(p1, v(p1 - p2)).
 * Throws DegenerateTriple if two of the points coincide.
 */
Ball t_map(const ProjPoint& p1, const ProjPoint& p2, const ProjPoint& p3);

/**
 * Additive coordinate of q on the axis through p1 and p2 (increasing toward
 * p1): v(q - p1) - v(q - p2), with the obvious one-term forms when p1 or p2
 * is infinity. q must be finite and distinct from both.
 */
ValueElement path_coordinate(const ProjPoint& q, const ProjPoint& p1, const ProjPoint& p2);

/**
 * Symbolic ray of balls { B(anchor, a) : shallow <= a <= deep } sharing one
 * anchor. A missing bound leaves the ray unbounded on that side: no shallow
 * bound runs out toward infinity, no deep bound runs into the anchor point.
 */
struct PathSegment {
  FieldElement anchor;
  std::optional<ValueElement> shallow;  // smallest additive radius (largest ball)
  std::optional<ValueElement> deep;     // largest additive radius (smallest ball)

  bool contains(const Ball& b) const;
  std::string to_string() const;
};

/**
 * The path between two distinct points of the projective line: two rays
 * meeting at B(p, v(p - q)) for finite points, a single doubly unbounded ray
 * anchored at the finite point when the other is infinity.
 * Throws DegeneratePair when p == q.
 */
std::vector<PathSegment> path_between(const ProjPoint& p, const ProjPoint& q);

/**
 * Closed ball, or complement { z : v(z - c) <= a } united with infinity
 * (the image of a closed ball under a map whose pole it contains). A
 * complement region keeps the boundary sphere v(z - c) = a but excludes the
 * center itself, so its center is canonicalized one lattice step deeper than
 * a ball's: two complements agree iff their centers differ at valuation
 * strictly greater than a.
 */
class Region {
 public:
  enum class Kind { BallRegion, ComplementRegion };

  static Region of_ball(Ball b);
  static Region complement(FieldElement center, ValueElement radius);

  Kind kind() const { return kind_; }
  bool is_ball() const { return kind_ == Kind::BallRegion; }
  const FieldElement& center() const { return center_; }
  const ValueElement& radius() const { return radius_; }

  /** The ball B(c, a) with the same center and radius (the tree vertex). */
  Ball ball() const { return Ball(center_, radius_); }

  bool contains(const ProjPoint& p) const;
  bool contains(const FieldElement& z) const;

  bool operator==(const Region& o) const;

  std::string to_string() const;  // B(c;[a]) or C(c;[a])

 private:
  Region(Kind k, FieldElement c, ValueElement a)
      : kind_(k), center_(std::move(c)), radius_(std::move(a)) {}
  Kind kind_;
  FieldElement center_;
  ValueElement radius_;
};

}  // namespace schottky

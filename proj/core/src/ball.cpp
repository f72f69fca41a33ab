#include "schottky/ball.hpp"

#include "schottky/errors.hpp"

namespace schottky {

const FieldElement& ProjPoint::value() const {
  if (inf_) throw Error(ErrorKind::InvalidArgument, "infinity has no finite value");
  return x_;
}

bool ProjPoint::operator==(const ProjPoint& o) const {
  if (inf_ || o.inf_) return inf_ == o.inf_;
  return x_ == o.x_;
}

std::string ProjPoint::to_string() const { return inf_ ? "inf" : x_.to_string(); }

Ball::Ball(FieldElement center, ValueElement radius)
    : center_(std::move(center)), radius_(std::move(radius)) {
  if (!center_.field()->lattice_contains(radius_))
    throw Error(ErrorKind::InvalidArgument,
                "ball radius " + radius_.to_string() + " not in the value lattice of " +
                    center_.field()->spec_string());
  center_ = canonical_center(center_, radius_);
}

bool Ball::contains(const FieldElement& z) const {
  return ((z - center_).valuation() <=> radius_) != std::strong_ordering::less;
}

bool Ball::contains(const ProjPoint& p) const {
  return !p.is_infinity() && contains(p.value());
}

bool Ball::contains(const Ball& o) const {
  return ((o.radius_ <=> radius_) != std::strong_ordering::less) && contains(o.center_);
}

bool Ball::operator==(const Ball& o) const {
  return radius_ == o.radius_ && center_ == o.center_;
}

std::string Ball::to_string() const {
  return "B(" + center_.to_string() + ";" + radius_.to_string() + ")";
}

Ball standard_ball(const FieldPtr& field) {
  return Ball(field->zero(), ValueElement::zero(field->rank()));
}

Ball join(const Ball& x, const Ball& y) {
  ValueElement sep = (x.center() - y.center()).valuation();  // bottom if equal centers
  ValueElement a = min_add(min_add(x.radius(), y.radius()), sep);
  return Ball(x.center(), a);
}

ValueElement length(const Ball& x, const Ball& y) {
  ValueElement a = join(x, y).radius();
  return (x.radius() - a) + (y.radius() - a);
}

bool between(const Ball& u, const Ball& x, const Ball& v) {
  return length(u, x) + length(x, v) == length(u, v);
}

Ball median(const Ball& x, const Ball& y, const Ball& z) {
  Ball jxy = join(x, y), jxz = join(x, z), jyz = join(y, z);
  // The two larger joins coincide; the median is the smallest ball of the
  // three (largest additive radius).
  const Ball* m = &jxy;
  if ((jxz.radius() <=> m->radius()) == std::strong_ordering::greater) m = &jxz;
  if ((jyz.radius() <=> m->radius()) == std::strong_ordering::greater) m = &jyz;
  return *m;
}

Ball t_map(const ProjPoint& p1, const ProjPoint& p2, const ProjPoint& p3) {
  if (p1 == p2 || p1 == p3 || p2 == p3)
    throw Error(ErrorKind::DegenerateTriple, "t-map needs three distinct points");
  // Move the (at most one) infinite point to the back.
  if (p1.is_infinity()) return t_map(p2, p3, p1);
  if (p2.is_infinity()) return t_map(p1, p3, p2);
  if (p3.is_infinity())
    return Ball(p1.value(), (p1.value() - p2.value()).valuation());
  ValueElement v12 = (p1.value() - p2.value()).valuation();
  ValueElement v13 = (p1.value() - p3.value()).valuation();
  ValueElement v23 = (p2.value() - p3.value()).valuation();
  ValueElement m = max_add(max_add(v12, v13), v23);
  if (v12 == m) return Ball(p1.value(), v12);
  if (v13 == m) return Ball(p1.value(), v13);
  return Ball(p2.value(), v23);
}

bool PathSegment::contains(const Ball& b) const {
  if (shallow && (b.radius() <=> *shallow) == std::strong_ordering::less) return false;
  if (deep && (b.radius() <=> *deep) == std::strong_ordering::greater) return false;
  return b.contains(anchor);
}

std::string PathSegment::to_string() const {
  auto bound = [](const std::optional<ValueElement>& v) {
    return v ? v->to_string() : std::string("*");
  };
  return "pi(" + anchor.to_string() + ";" + bound(shallow) + ".." + bound(deep) + ")";
}

std::vector<PathSegment> path_between(const ProjPoint& p, const ProjPoint& q) {
  if (p == q) throw Error(ErrorKind::DegeneratePair, "path needs two distinct points");
  if (p.is_infinity()) return {PathSegment{q.value(), std::nullopt, std::nullopt}};
  if (q.is_infinity()) return {PathSegment{p.value(), std::nullopt, std::nullopt}};
  ValueElement meet = (p.value() - q.value()).valuation();
  return {PathSegment{p.value(), meet, std::nullopt},
          PathSegment{q.value(), std::move(meet), std::nullopt}};
}

ValueElement path_coordinate(const ProjPoint& q, const ProjPoint& p1, const ProjPoint& p2) {
  if (p1 == p2) throw Error(ErrorKind::DegeneratePair, "axis needs two distinct points");
  if (q.is_infinity() || q == p1 || q == p2)
    throw Error(ErrorKind::DegeneratePair, "coordinate undefined at " + q.to_string());
  if (p1.is_infinity()) return -(q.value() - p2.value()).valuation();
  if (p2.is_infinity()) return (q.value() - p1.value()).valuation();
  return (q.value() - p1.value()).valuation() - (q.value() - p2.value()).valuation();
}

Region Region::of_ball(Ball b) {
  FieldElement c = b.center();
  ValueElement a = b.radius();
  return Region(Kind::BallRegion, std::move(c), std::move(a));
}

Region Region::complement(FieldElement center, ValueElement radius) {
  const FieldPtr& f = center.field();
  if (!f->lattice_contains(radius))
    throw Error(ErrorKind::InvalidArgument,
                "region radius " + radius.to_string() + " not in the value lattice of " +
                    f->spec_string());
  // Complement sets agree iff the centers differ at valuation > radius, so
  // keep digits up to and including the boundary valuation.
  FieldElement c = canonical_center(center, radius + f->lattice_step());
  return Region(Kind::ComplementRegion, std::move(c), std::move(radius));
}

bool Region::contains(const FieldElement& z) const {
  auto cmp = (z - center_).valuation() <=> radius_;
  if (kind_ == Kind::BallRegion) return cmp != std::strong_ordering::less;
  return cmp != std::strong_ordering::greater;
}

bool Region::contains(const ProjPoint& p) const {
  if (p.is_infinity()) return kind_ == Kind::ComplementRegion;
  return contains(p.value());
}

bool Region::operator==(const Region& o) const {
  return kind_ == o.kind_ && radius_ == o.radius_ && center_ == o.center_;
}

std::string Region::to_string() const {
  const char* tag = kind_ == Kind::BallRegion ? "B(" : "C(";
  return tag + center_.to_string() + ";" + radius_.to_string() + ")";
}

}  // namespace schottky

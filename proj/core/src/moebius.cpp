#include "schottky/moebius.hpp"

#include <cassert>

#include "schottky/errors.hpp"

namespace schottky {

Moebius::Moebius(FieldElement a, FieldElement b, FieldElement c, FieldElement d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  assert(a_.field()->same(*b_.field()) && a_.field()->same(*c_.field()) &&
         a_.field()->same(*d_.field()));
  if (det().is_zero())
    throw Error(ErrorKind::InvalidArgument, "matrix is singular");
}

Moebius Moebius::identity(const FieldPtr& field) {
  return Moebius(field->one(), field->zero(), field->zero(), field->one());
}

Moebius Moebius::operator*(const Moebius& o) const {
  return Moebius(a_ * o.a_ + b_ * o.c_, a_ * o.b_ + b_ * o.d_,
                 c_ * o.a_ + d_ * o.c_, c_ * o.b_ + d_ * o.d_);
}

Moebius Moebius::inverse() const { return Moebius(d_, -b_, -c_, a_); }

bool Moebius::is_identity_projective() const {
  return b_.is_zero() && c_.is_zero() && a_ == d_;
}

bool Moebius::proportional_to(const Moebius& o) const {
  return a_ * o.b_ == b_ * o.a_ && a_ * o.c_ == c_ * o.a_ &&
         a_ * o.d_ == d_ * o.a_ && b_ * o.c_ == c_ * o.b_ &&
         b_ * o.d_ == d_ * o.b_ && c_ * o.d_ == d_ * o.c_;
}

ProjPoint Moebius::apply(const ProjPoint& p) const {
  if (p.is_infinity()) {
    if (c_.is_zero()) return ProjPoint::infinity(field());
    return ProjPoint::finite(a_ / c_);
  }
  FieldElement denom = c_ * p.value() + d_;
  if (denom.is_zero()) return ProjPoint::infinity(field());
  return ProjPoint::finite((a_ * p.value() + b_) / denom);
}

ValueElement Moebius::derivative_valuation(const ProjPoint& p) const {
  if (p.is_infinity()) {
    if (c_.is_zero()) return d_.valuation() - a_.valuation();
    return det().valuation() - c_.valuation().scaled(2);
  }
  FieldElement denom = c_ * p.value() + d_;
  if (denom.is_zero())
    throw Error(ErrorKind::PoleInput, "derivative undefined at the pole");
  return det().valuation() - denom.valuation().scaled(2);
}

std::string Moebius::to_string() const {
  return "[[" + a_.to_string() + "," + b_.to_string() + "],[" + c_.to_string() + "," +
         d_.to_string() + "]]";
}

namespace {

// Pole of g (the preimage of infinity).
ProjPoint pole_of(const Moebius& g) {
  if (g.c().is_zero()) return ProjPoint::infinity(g.field());
  return ProjPoint::finite(-(g.d() / g.c()));
}

}  // namespace

Region act_on_region(const Moebius& g, const Ball& ball) {
  ProjPoint pole = pole_of(g);
  if (!ball.contains(pole)) {
    ProjPoint p = ProjPoint::finite(ball.center());
    ValueElement r = g.derivative_valuation(p) + ball.radius();
    return Region::of_ball(Ball(g.apply(p).value(), r));
  }
  // Pole inside: the image is everything of valuation <= v(g'(inf)) - a
  // around g(inf), together with infinity itself.
  ValueElement r = g.det().valuation() - g.c().valuation().scaled(2) - ball.radius();
  return Region::complement(g.apply(ProjPoint::infinity(g.field())).value(), r);
}

Ball act_on_tree(const Moebius& g, const Ball& ball) {
  // Either way the vertex is the ball with the image region's center and
  // radius; on the boundary sphere the two branches agree.
  return act_on_region(g, ball).ball();
}

bool stabilizes_standard_ball(const Moebius& g) {
  ValueElement m = g.a().valuation();
  m = min_add(m, g.b().valuation());
  m = min_add(m, g.c().valuation());
  m = min_add(m, g.d().valuation());
  return g.det().valuation() == m.scaled(2);
}

FieldElement varpi(const Moebius& g) {
  FieldElement tr = g.trace();
  return tr * tr / g.det();
}

Classification classify(const Moebius& g, const ValueElement& precision, int max_order) {
  if (g.is_identity_projective())
    throw Error(ErrorKind::IdentityInput, "cannot classify the identity");
  const FieldPtr& f = g.field();
  FieldElement tr = g.trace();
  FieldElement dt = g.det();
  Classification res;
  res.multiplier = ValueElement::zero(f->rank());
  res.fixed_achieved = ValueElement::bottom(f->rank());

  if (!tr.is_zero()) {
    ValueElement mult = dt.valuation() - tr.valuation().scaled(2);
    if (mult.is_top_nilpotent()) {
      res.cls = MoebiusClass::Hyperbolic;
      res.multiplier = mult;
      if (g.c().is_zero()) {
        FieldElement zf = g.b() / (g.d() - g.a());
        bool inf_attracting = (g.d().valuation() - g.a().valuation()).is_top_nilpotent();
        ProjPoint inf = ProjPoint::infinity(f);
        ProjPoint fin = ProjPoint::finite(zf);
        res.attracting = inf_attracting ? inf : fin;
        res.repelling = inf_attracting ? fin : inf;
        res.fixed_exact = true;
      } else {
        // Eigenvalues solve x^2 - tr x + det; the Hensel basin root is the
        // one of larger valuation (the smaller eigenvalue), whose eigenline
        // is the repelling fixed point.
        HenselResult h = hensel_fixed_root(-tr, dt, precision);
        res.attracting = ProjPoint::finite((h.cofactor - g.d()) / g.c());
        res.repelling = ProjPoint::finite((h.root - g.d()) / g.c());
        res.fixed_exact = h.exact;
        res.fixed_achieved = h.achieved;
      }
      return res;
    }
  }

  Moebius pw = g;
  for (int k = 2; k <= max_order; ++k) {
    pw = pw * g;
    if (pw.is_identity_projective()) {
      res.cls = MoebiusClass::FiniteOrderCandidate;
      res.order = k;
      return res;
    }
  }
  FieldElement disc = tr * tr - f->from_long(4) * dt;
  if (f->characteristic() > 0 && disc.is_zero()) {
    // Parabolic in characteristic p: a p-power times a root of unity.
    res.cls = MoebiusClass::FiniteOrderCandidate;
    return res;
  }
  res.cls = MoebiusClass::NonHyperbolicInfinite;
  return res;
}

Moebius hyperbolic_from_balls(const Ball& from, const Ball& to, const FieldElement& q) {
  const FieldPtr& f = from.field();
  assert(f->same(*to.field()) && f->same(*q.field()));
  ValueElement l = length(from, to);
  if (!l.is_top_nilpotent())
    throw Error(ErrorKind::NotNilpotentDistance,
                "vertex distance " + l.to_string() + " lacks a positive leading coordinate");
  if (q.is_zero() || q.valuation() != l)
    throw Error(ErrorKind::InvalidArgument,
                "multiplier valuation must equal the vertex distance " + l.to_string());
  const FieldElement& b = from.center();
  const FieldElement& bp = to.center();
  if (from.contains(to)) {
    // Contraction toward the common center: z -> q (z - b') + b'.
    return Moebius(q, bp - q * bp, f->zero(), f->one());
  }
  if (to.contains(from)) {
    // Expansion from the common center: z -> q^{-1} (z - b) + b.
    FieldElement qi = q.inverse();
    return Moebius(qi, b - qi * b, f->zero(), f->one());
  }
  // Disjoint: conjugate z -> q z by tau(z) = (z - b')/(z - b), putting the
  // repelling fixed point at b and the attracting one at b'.
  Moebius tau(f->one(), -bp, f->one(), -b);
  Moebius mu(q, f->zero(), f->zero(), f->one());
  return tau.inverse() * mu * tau;
}

OrbitReport orbit_report(const Moebius& g, const ProjPoint& p, int n,
                         const ValueElement& precision) {
  OrbitReport rep;
  Moebius gi = g.inverse();
  std::vector<ProjPoint> neg;
  ProjPoint cur = p;
  for (int k = 1; k <= n; ++k) {
    cur = gi.apply(cur);
    neg.push_back(cur);
  }
  rep.points.assign(neg.rbegin(), neg.rend());
  rep.points.push_back(p);
  cur = p;
  for (int k = 1; k <= n; ++k) {
    cur = g.apply(cur);
    rep.points.push_back(cur);
  }

  bool uniform = true;
  std::optional<ValueElement> first;
  for (size_t i = 0; i < rep.points.size(); ++i) {
    if (rep.points[i].is_infinity()) continue;
    for (size_t j = i + 1; j < rep.points.size(); ++j) {
      if (rep.points[j].is_infinity()) continue;
      ValueElement v = (rep.points[i].value() - rep.points[j].value()).valuation();
      if (!first) {
        first = v;
        rep.min_valuation = v;
        rep.max_valuation = v;
        continue;
      }
      if (v != *first) uniform = false;
      if ((v <=> *rep.min_valuation) == std::strong_ordering::less) rep.min_valuation = v;
      if ((v <=> *rep.max_valuation) == std::strong_ordering::greater) rep.max_valuation = v;
    }
  }
  rep.uniform_separation = first.has_value() && uniform;

  if (!g.is_identity_projective()) {
    Classification cls = classify(g, precision);
    if (cls.cls == MoebiusClass::Hyperbolic) {
      rep.attracting = cls.attracting;
      rep.repelling = cls.repelling;
      if (cls.attracting && !cls.attracting->is_infinity()) {
        const FieldElement& a = cls.attracting->value();
        bool monotone = true;
        for (const ProjPoint& x : rep.points) {
          if (x.is_infinity() || x == *cls.attracting) continue;
          ValueElement v = (x.value() - a).valuation();
          if (!rep.toward_attracting.empty() &&
              (v <=> rep.toward_attracting.back()) == std::strong_ordering::less)
            monotone = false;
          rep.toward_attracting.push_back(std::move(v));
        }
        rep.attracting_monotone = monotone && !rep.toward_attracting.empty();
      }
    }
  }
  return rep;
}

}  // namespace schottky

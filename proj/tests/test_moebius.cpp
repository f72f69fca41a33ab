#include "doctest.h"
#include "schottky/errors.hpp"
#include "schottky/moebius.hpp"

using namespace schottky;

namespace {
FieldPtr q3() { return Field::rational_padic(3); }
Moebius mat(const FieldPtr& f, long a, long b, long c, long d) {
  return Moebius(f->from_long(a), f->from_long(b), f->from_long(c), f->from_long(d));
}
Ball ball(const FieldPtr& f, long c, std::vector<long> r) {
  return Ball(f->from_long(c), ValueElement::make(std::move(r)));
}
ValueElement prec() { return ValueElement::make({32}); }
}  // namespace

TEST_CASE("matrix basics") {
  FieldPtr f = q3();
  Moebius g = mat(f, 3, 0, 2, 1);
  CHECK(g.det() == f->from_long(3));
  CHECK(g.trace() == f->from_long(4));
  CHECK((g * g.inverse()).is_identity_projective());
  CHECK(g.inverse().inverse().proportional_to(g));
  CHECK(mat(f, 2, 0, 0, 2).is_identity_projective());
  CHECK(g.to_string() == "[[3,0],[2,1]]");
  CHECK_THROWS_AS(mat(f, 1, 2, 2, 4), Error);  // singular
}

TEST_CASE("projective action on points") {
  FieldPtr f = q3();
  Moebius g = mat(f, 3, 0, 2, 1);  // z -> 3z/(2z+1)
  CHECK(g.apply(ProjPoint::finite(f->one())) == ProjPoint::finite(f->one()));
  CHECK(g.apply(ProjPoint::finite(f->zero())) == ProjPoint::finite(f->zero()));
  CHECK(g.apply(ProjPoint::infinity(f)) ==
        ProjPoint::finite(f->from_rational(Rational(3, 2))));
  // the pole goes to infinity
  CHECK(g.apply(ProjPoint::finite(f->from_rational(Rational(-1, 2)))).is_infinity());
  Moebius aff = mat(f, 2, 5, 0, 1);
  CHECK(aff.apply(ProjPoint::infinity(f)).is_infinity());
}

TEST_CASE("derivative valuations") {
  FieldPtr f = q3();
  Moebius g = mat(f, 3, 0, 2, 1);
  CHECK(g.derivative_valuation(ProjPoint::finite(f->zero())) == ValueElement::make({1}));
  CHECK(g.derivative_valuation(ProjPoint::infinity(f)) == ValueElement::make({1}));
  CHECK_THROWS_AS(
      g.derivative_valuation(ProjPoint::finite(f->from_rational(Rational(-1, 2)))), Error);
  Moebius aff = mat(f, 9, 5, 0, 1);
  CHECK(aff.derivative_valuation(ProjPoint::infinity(f)) == ValueElement::make({-2}));
  CHECK(aff.derivative_valuation(ProjPoint::finite(f->one())) == ValueElement::make({2}));
}

TEST_CASE("vertex action: ball branch and complement branch agree with sets") {
  FieldPtr f = q3();
  Moebius g = mat(f, 3, 0, 2, 1);
  // pole -1/2 lies in the standard vertex: complement branch
  Region img = act_on_region(g, standard_ball(f));
  CHECK_FALSE(img.is_ball());
  CHECK(img.contains(ProjPoint::infinity(f)));
  CHECK(act_on_tree(g, standard_ball(f)) == ball(f, 0, {1}));
  // pole outside: ball branch
  Ball small = ball(f, 1, {2});
  Region img2 = act_on_region(g, small);
  CHECK(img2.is_ball());
  CHECK(act_on_tree(g, small) == img2.ball());
  // equivariance: points of the ball land in the image region
  for (long z = -40; z <= 40; ++z) {
    FieldElement x = f->from_long(z);
    if (!small.contains(x)) continue;
    CHECK(img2.contains(g.apply(ProjPoint::finite(x))));
  }
  for (long z = -40; z <= 40; ++z) {
    FieldElement x = f->from_long(z);
    if (!standard_ball(f).contains(x)) continue;
    CHECK(img.contains(g.apply(ProjPoint::finite(x))));
  }
}

TEST_CASE("vertex action is an isometry and a homomorphism") {
  FieldPtr f = q3();
  Moebius g = mat(f, 3, 0, 2, 1);
  Moebius h = mat(f, 1, 3, 1, 1);
  std::vector<Ball> balls = {standard_ball(f), ball(f, 1, {1}), ball(f, 2, {1}),
                             ball(f, 0, {2}), ball(f, 3, {2}), ball(f, -1, {3})};
  for (const Ball& x : balls) {
    CHECK(act_on_tree(g, act_on_tree(h, x)) == act_on_tree(g * h, x));
    CHECK(act_on_tree(g.inverse(), act_on_tree(g, x)) == x);
    for (const Ball& y : balls) {
      CHECK(length(act_on_tree(g, x), act_on_tree(g, y)) == length(x, y));
      CHECK(length(act_on_tree(h, x), act_on_tree(h, y)) == length(x, y));
    }
  }
}

TEST_CASE("standard vertex stabilizer") {
  FieldPtr f = q3();
  CHECK(stabilizes_standard_ball(mat(f, 1, 1, 0, 1)));
  CHECK_FALSE(stabilizes_standard_ball(mat(f, 3, 0, 0, 1)));
  CHECK(stabilizes_standard_ball(mat(f, 0, -1, 1, 0)));
  CHECK(stabilizes_standard_ball(mat(f, 9, 0, 0, 9)));
  CHECK(stabilizes_standard_ball(mat(f, 2, 1, 1, 1)));
  CHECK_FALSE(stabilizes_standard_ball(mat(f, 2, 1, 1, 2)));  // det = 3: odd valuation
  CHECK_FALSE(stabilizes_standard_ball(mat(f, 3, 0, 2, 1)));
  // stabilizing elements fix the vertex
  CHECK(act_on_tree(mat(f, 0, -1, 1, 0), standard_ball(f)) == standard_ball(f));
  CHECK(act_on_tree(mat(f, 1, 1, 0, 1), standard_ball(f)) == standard_ball(f));
}

TEST_CASE("classification: hyperbolic with exact fixed points") {
  FieldPtr f = q3();
  Moebius g = mat(f, 2, 1, 1, 2);  // trace^2/det = 16/3
  Classification c = classify(g, prec());
  CHECK(c.cls == MoebiusClass::Hyperbolic);
  CHECK(c.multiplier == ValueElement::make({1}));
  CHECK(c.fixed_exact);
  REQUIRE(c.attracting.has_value());
  REQUIRE(c.repelling.has_value());
  CHECK(*c.attracting == ProjPoint::finite(f->from_long(-1)));
  CHECK(*c.repelling == ProjPoint::finite(f->one()));
  // the fixed points are fixed, and the derivative contracts at the sink
  CHECK(g.apply(*c.attracting) == *c.attracting);
  CHECK(g.apply(*c.repelling) == *c.repelling);
  CHECK(g.derivative_valuation(*c.attracting).is_top_nilpotent());
  CHECK_FALSE(g.derivative_valuation(*c.repelling).is_top_nilpotent());

  Moebius g2 = mat(f, 27, 0, 26, 1);
  Classification c2 = classify(g2, prec());
  CHECK(c2.cls == MoebiusClass::Hyperbolic);
  CHECK(c2.multiplier == ValueElement::make({3}));
  CHECK(c2.fixed_exact);
  CHECK(*c2.attracting == ProjPoint::finite(f->zero()));
  CHECK(*c2.repelling == ProjPoint::finite(f->one()));
}

TEST_CASE("classification: upper triangular and approximate cases") {
  FieldPtr f = q3();
  Moebius g = mat(f, 9, 1, 0, 1);
  Classification c = classify(g, prec());
  CHECK(c.cls == MoebiusClass::Hyperbolic);
  CHECK(c.multiplier == ValueElement::make({2}));
  REQUIRE(c.attracting.has_value());
  CHECK(c.repelling->is_infinity());
  CHECK(*c.attracting == ProjPoint::finite(f->from_rational(Rational(1, -8))));
  Moebius gi = g.inverse();
  Classification ci = classify(gi, prec());
  CHECK(ci.attracting->is_infinity());

  // trace 1, det 3: hyperbolic but the characteristic polynomial is irreducible
  Moebius h = mat(f, 0, -3, 1, 1);
  Classification ch = classify(h, prec());
  CHECK(ch.cls == MoebiusClass::Hyperbolic);
  CHECK(ch.multiplier == ValueElement::make({1}));
  CHECK_FALSE(ch.fixed_exact);
  REQUIRE(ch.attracting.has_value());
  // the approximate fixed point is fixed up to (nearly) the requested precision
  ProjPoint z = *ch.repelling;
  FieldElement err = h.apply(z).value() - z.value();
  CHECK(((err.valuation() <=> ValueElement::make({30})) != std::strong_ordering::less));
}

TEST_CASE("classification: finite order and infinite non-hyperbolic") {
  FieldPtr f = q3();
  CHECK_THROWS_AS(classify(Moebius::identity(f), prec()), Error);
  CHECK_THROWS_AS(classify(mat(f, 2, 0, 0, 2), prec()), Error);  // projective identity
  Classification c2 = classify(mat(f, 0, -1, 1, 0), prec());  // order 2
  CHECK(c2.cls == MoebiusClass::FiniteOrderCandidate);
  CHECK(c2.order == 2);
  Classification c3 = classify(mat(f, 0, -1, 1, -1), prec());  // order 3
  CHECK(c3.cls == MoebiusClass::FiniteOrderCandidate);
  CHECK(c3.order == 3);
  Classification c4 = classify(mat(f, 1, -1, 1, 1), prec());  // rotation of order 4
  CHECK(c4.cls == MoebiusClass::FiniteOrderCandidate);
  CHECK(c4.order == 4);
  Classification c6 = classify(mat(f, 2, -1, 1, 1), prec());  // order 6
  CHECK(c6.cls == MoebiusClass::FiniteOrderCandidate);
  CHECK(c6.order == 6);
  // parabolic in characteristic zero: infinite order, not hyperbolic
  Classification cp = classify(mat(f, 1, 1, 0, 1), prec());
  CHECK(cp.cls == MoebiusClass::NonHyperbolicInfinite);
  // elliptic of infinite order: diag(2, 1) over Q_3 (2 is a unit, not torsion)
  Classification ce = classify(mat(f, 2, 0, 0, 1), prec());
  CHECK(ce.cls == MoebiusClass::NonHyperbolicInfinite);
  // parabolic in characteristic p is a finite order candidate
  FieldPtr k13 = Field::funcfield_tadic_fp(13);
  Moebius par(k13->one(), k13->one(), k13->zero(), k13->one());
  Classification cf = classify(par, ValueElement::make({32}));
  CHECK(cf.cls == MoebiusClass::FiniteOrderCandidate);
  CHECK_FALSE(cf.order.has_value());
  // and for small p the power test finds the exact order
  FieldPtr k3 = Field::funcfield_tadic_fp(3);
  Moebius par3(k3->one(), k3->one(), k3->zero(), k3->one());
  Classification cf3 = classify(par3, ValueElement::make({32}));
  CHECK(cf3.cls == MoebiusClass::FiniteOrderCandidate);
  CHECK(cf3.order == 3);
}

TEST_CASE("classification distinguishes the two rank-2 scalings") {
  FieldPtr f = Field::rank2_composite(3);
  // diag(3, 1): v(det) - 2 v(tr) = (0,1): leading coordinate 0, not hyperbolic
  Moebius d3(f->from_long(3), f->zero(), f->zero(), f->one());
  CHECK(classify(d3, ValueElement::make({32, 0})).cls ==
        MoebiusClass::NonHyperbolicInfinite);
  // diag(t, 1): v(det) - 2 v(tr) = (1,0): hyperbolic
  Moebius dt(f->t_element(), f->zero(), f->zero(), f->one());
  Classification c = classify(dt, ValueElement::make({32, 0}));
  CHECK(c.cls == MoebiusClass::Hyperbolic);
  CHECK(c.multiplier == ValueElement::make({1, 0}));
}

TEST_CASE("hyperbolic elements from vertex pairs") {
  FieldPtr f = q3();
  // disjoint vertices: reproduces the reference generator projectively
  Moebius g = hyperbolic_from_balls(ball(f, 1, {1}), ball(f, 0, {2}), f->from_long(27));
  CHECK(g.proportional_to(mat(f, 27, 0, 26, 1)));
  CHECK(act_on_tree(g, ball(f, 1, {1})) == ball(f, 0, {2}));
  Classification c = classify(g, prec());
  CHECK(c.cls == MoebiusClass::Hyperbolic);
  CHECK(c.multiplier == ValueElement::make({3}));
  CHECK(*c.repelling == ProjPoint::finite(f->one()));
  CHECK(*c.attracting == ProjPoint::finite(f->zero()));

  // nested: translation along the axis through the common center
  Moebius n = hyperbolic_from_balls(ball(f, 0, {1}), ball(f, 0, {3}), f->from_long(9));
  CHECK(act_on_tree(n, ball(f, 0, {1})) == ball(f, 0, {3}));
  CHECK(classify(n, prec()).multiplier == ValueElement::make({2}));
  Moebius m = hyperbolic_from_balls(ball(f, 0, {3}), ball(f, 0, {1}), f->from_long(9));
  CHECK(act_on_tree(m, ball(f, 0, {3})) == ball(f, 0, {1}));

  // disjoint at a nonzero join level
  Moebius w = hyperbolic_from_balls(ball(f, 3, {3}), ball(f, 0, {3}), f->from_long(81));
  CHECK(act_on_tree(w, ball(f, 3, {3})) == ball(f, 0, {3}));
  CHECK(classify(w, prec()).multiplier == ValueElement::make({4}));

  // error cases
  CHECK_THROWS_AS(
      hyperbolic_from_balls(ball(f, 0, {1}), ball(f, 0, {1}), f->from_long(1)), Error);
  try {
    hyperbolic_from_balls(ball(f, 0, {1}), ball(f, 0, {1}), f->one());
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotNilpotentDistance);
  }
  CHECK_THROWS_AS(
      hyperbolic_from_balls(ball(f, 1, {1}), ball(f, 0, {2}), f->from_long(9)), Error);
}

TEST_CASE("trace-zero elements are involutions, never hyperbolic") {
  FieldPtr f = q3();
  Moebius g = mat(f, 1, 3, 2, -1);  // trace 0
  Classification c = classify(g, prec());
  CHECK(c.cls == MoebiusClass::FiniteOrderCandidate);
  CHECK(c.order == 2);
}

TEST_CASE("the trace-squared-over-det invariant") {
  FieldPtr f = q3();
  Moebius g = mat(f, 2, 1, 1, 2);
  CHECK(varpi(g) == f->from_rational(Rational(16, 3)));
  CHECK(varpi(mat(f, 0, -1, 1, 0)).is_zero());
  // projective scaling and conjugation both leave it unchanged
  Moebius g2 = mat(f, 4, 2, 2, 4);
  CHECK(varpi(g2) == varpi(g));
  Moebius tau = mat(f, 1, 5, 2, -3);
  CHECK(varpi(tau * g * tau.inverse()) == varpi(g));
  // diag(q, 1) has varpi = (q+1)^2/q with valuation -v(q)
  Moebius mu = mat(f, 9, 0, 0, 1);
  CHECK(varpi(mu) == f->from_rational(Rational(100, 9)));
  CHECK(varpi(mu).valuation() == ValueElement::make({-2}));
}

TEST_CASE("orbit reports") {
  FieldPtr f = q3();
  // scaling by 3: orbit of 1 marches monotonically into the attracting point 0
  OrbitReport r = orbit_report(mat(f, 3, 0, 0, 1), ProjPoint::finite(f->one()), 5, prec());
  REQUIRE(r.points.size() == 11);
  for (int k = -5; k <= 5; ++k) {
    const ProjPoint& x = r.points[static_cast<size_t>(k + 5)];
    CHECK(x.value().valuation() == ValueElement::make({k}));
  }
  REQUIRE(r.attracting.has_value());
  CHECK(*r.attracting == ProjPoint::finite(f->zero()));
  CHECK(r.attracting_monotone);
  CHECK_FALSE(r.uniform_separation);

  // unit multiplier 2 over Q(t) with the t-adic valuation: constants stay at
  // pairwise valuation zero, the non-compactness separation witness
  FieldPtr ft = Field::funcfield_tadic_q();
  OrbitReport s =
      orbit_report(Moebius(ft->from_long(2), ft->zero(), ft->zero(), ft->one()),
                   ProjPoint::finite(ft->one()), 10, ValueElement::make({20}));
  CHECK(s.points.size() == 21);
  CHECK(s.uniform_separation);
  CHECK(*s.min_valuation == ValueElement::zero(1));
  CHECK(*s.max_valuation == ValueElement::zero(1));

  // the same scaling over Q_3 is NOT uniformly separated: 3 divides 2^2 - 1
  OrbitReport u = orbit_report(mat(f, 2, 0, 0, 1), ProjPoint::finite(f->one()), 10, prec());
  CHECK_FALSE(u.uniform_separation);
  CHECK(*u.min_valuation == ValueElement::zero(1));
}

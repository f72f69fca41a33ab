// Acceptance gate: ten end-to-end criteria, one pass/fail line each, exact
// arithmetic throughout (every comparison is ==, <=> on exact values, or a
// structural equality; no tolerances anywhere). Exits 0 iff all ten pass.

#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "sampler.hpp"
#include "schottky/ball.hpp"
#include "schottky/field.hpp"
#include "schottky/finite_tree.hpp"
#include "schottky/graph_synthesis.hpp"
#include "schottky/moebius.hpp"
#include "schottky/schottky_group.hpp"
#include "schottky/word.hpp"

using namespace schottky;

namespace {

struct Outcome {
  bool pass = true;
  long checks = 0;
  std::string first_failure;
};

// Counts every assertion; remembers the first failure for the report line.
struct Checker {
  Outcome out;
  void expect(bool cond, const std::string& what) {
    ++out.checks;
    if (!cond && out.pass) {
      out.pass = false;
      out.first_failure = what;
    }
  }
};

FieldPtr q3() {
  static FieldPtr f = Field::rational_padic(3);
  return f;
}
FieldPtr q5() {
  static FieldPtr f = Field::rational_padic(5);
  return f;
}
FieldPtr fqt() {
  static FieldPtr f = Field::funcfield_tadic_q();
  return f;
}
FieldPtr fp3() {
  static FieldPtr f = Field::funcfield_tadic_fp(3);
  return f;
}
FieldPtr r2() {
  static FieldPtr f = Field::rank2_composite(3);
  return f;
}

ValueElement default_precision(const FieldPtr& f) {
  std::vector<long> c(static_cast<std::size_t>(f->rank()), 0);
  c[0] = 40;
  return ValueElement::make(std::move(c));
}

ValueElement unit_step(const FieldPtr& f) {
  std::vector<long> c(static_cast<std::size_t>(f->rank()), 0);
  c[0] = 1;
  return ValueElement::make(std::move(c));
}

std::vector<FieldPtr> metric_instances() { return {q3(), fqt(), fp3(), r2()}; }

// ---------------------------------------------------------------- fixtures

Moebius mat(const FieldPtr& f, long a, long b, long c, long d) {
  return Moebius(f->from_long(a), f->from_long(b), f->from_long(c), f->from_long(d));
}

// The documented genus-2 datum over Q_3: gamma_1 = [[27,0],[26,1]] fixing
// {0, 1} with multiplier valuation [3], gamma_2 its conjugate by z -> 3 - z,
// pairing balls of radius [1] around the repelling and [2] around the
// attracting fixed points.
SchottkyData deep_pair() {
  FieldPtr f = q3();
  Moebius g1 = mat(f, 27, 0, 26, 1);
  Moebius t = mat(f, -1, 3, 0, 1);
  Moebius g2 = t * g1 * t;
  return make_schottky(
      {g1, g2},
      {Ball(f->from_long(1), ValueElement::make({1})),
       Ball(f->from_long(2), ValueElement::make({1})),
       Ball(f->from_long(0), ValueElement::make({2})),
       Ball(f->from_long(3), ValueElement::make({2}))});
}

// The t-adic analogue over Q(t) with the rank-two composite valuation:
// multiplier t^3, valuation (3,0).
SchottkyData rank2_pair() {
  FieldPtr f = r2();
  FieldElement t3 = f->t_element() * f->t_element() * f->t_element();
  Moebius g1(t3, f->zero(), t3 - f->one(), f->one());
  Moebius t = mat(f, -1, 3, 0, 1);
  Moebius g2 = t * g1 * t;
  return make_schottky(
      {g1, g2},
      {Ball(f->from_long(1), ValueElement::make({1, 0})),
       Ball(f->from_long(2), ValueElement::make({1, 0})),
       Ball(f->from_long(0), ValueElement::make({2, 0})),
       Ball(f->from_long(3), ValueElement::make({2, 0}))});
}

// --------------------------------------------------------------- criteria

// Four metric properties of the ball tree, exactly, on random pairs/triples.
Outcome criterion_metric() {
  Checker c;
  for (const FieldPtr& f : metric_instances()) {
    Sampler s(101);
    ValueElement zero = ValueElement::zero(f->rank());
    for (int i = 0; i < 1000; ++i) {
      Ball x = s.ball(f), y = s.ball(f), z = s.ball(f);
      ValueElement dxy = length(x, y);
      c.expect(!(dxy < zero), "positivity failed over " + f->spec_string());
      c.expect((dxy == zero) == (x == y),
               "identity of indiscernibles failed over " + f->spec_string());
      c.expect(dxy == length(y, x), "symmetry failed over " + f->spec_string());
      c.expect(!(length(x, z) + length(z, y) < dxy),
               "triangle inequality failed over " + f->spec_string());
      // Degenerate-pair coverage: d(x, x) = 0 exactly.
      c.expect(length(x, x) == zero, "self-distance failed over " + f->spec_string());
    }
  }
  return c.out;
}

// Taylor identity, tree isometry, and t-map equivariance, on both the ball
// and the complement branch of the Moebius action.
Outcome criterion_action() {
  Checker c;
  for (const FieldPtr& f : metric_instances()) {
    Sampler s(202);
    long ball_branch = 0, complement_branch = 0;
    for (int i = 0; i < 500; ++i) {
      Moebius g = s.moebius(f);

      // Isometry on the tree, whichever branch the region image takes.
      Ball b1 = s.ball(f), b2 = s.ball(f);
      (act_on_region(g, b1).is_ball() ? ball_branch : complement_branch) += 1;
      (act_on_region(g, b2).is_ball() ? ball_branch : complement_branch) += 1;
      c.expect(length(act_on_tree(g, b1), act_on_tree(g, b2)) == length(b1, b2),
               "isometry failed over " + f->spec_string());

      // Taylor identity on a pole-free ball: v(g(p)-g(q)) = v(g'(p)) + v(p-q).
      Ball b = b1;
      for (int tries = 0; !act_on_region(g, b).is_ball() && tries < 100; ++tries)
        b = s.ball(f);
      if (act_on_region(g, b).is_ball()) {
        FieldElement p = b.center() + s.at_least(f, b.radius());
        FieldElement q = b.center() + s.at_least(f, b.radius());
        for (int tries = 0; p == q && tries < 100; ++tries)
          q = b.center() + s.at_least(f, b.radius());
        if (!(p == q)) {
          ProjPoint pp = ProjPoint::finite(p);
          FieldElement gp = g.apply(pp).value();
          FieldElement gq = g.apply(ProjPoint::finite(q)).value();
          c.expect((gp - gq).valuation() ==
                       g.derivative_valuation(pp) + (p - q).valuation(),
                   "Taylor identity failed over " + f->spec_string());
        }
      }

      // t-map equivariance on a random distinct triple.
      ProjPoint p1 = s.point(f), p2 = s.point(f), p3 = s.point(f);
      for (int tries = 0; (p1 == p2 || p1 == p3 || p2 == p3) && tries < 100; ++tries) {
        p2 = s.point(f);
        p3 = s.point(f);
      }
      if (!(p1 == p2) && !(p1 == p3) && !(p2 == p3)) {
        Ball lhs = t_map(g.apply(p1), g.apply(p2), g.apply(p3));
        c.expect(lhs == act_on_tree(g, t_map(p1, p2, p3)),
                 "t-map equivariance failed over " + f->spec_string());
      }
    }
    c.expect(ball_branch > 50 && complement_branch > 50,
             "branch coverage too thin over " + f->spec_string());
  }
  return c.out;
}

// Integral unimodular elements fix the standard vertex; non-integral ones
// move it; the algebraic test agrees with the tree action everywhere.
Outcome criterion_stabilizer() {
  Checker c;
  for (const FieldPtr& f : metric_instances()) {
    Sampler s(303);
    Ball t0 = standard_ball(f);
    for (int i = 0; i < 200; ++i) {
      Moebius g = s.integral_moebius(f);
      bool fixes = act_on_tree(g, t0) == t0;
      c.expect(stabilizes_standard_ball(g), "integral element failed the algebraic test");
      c.expect(fixes, "integral element moved the standard vertex");
    }
    int found = 0;
    for (int tries = 0; found < 200 && tries < 20000; ++tries) {
      Moebius g = s.moebius(f);
      if (stabilizes_standard_ball(g)) {
        // Agreement on the stabilizing side of the sample stream too.
        c.expect(act_on_tree(g, t0) == t0, "algebraic test disagreed with the action");
        continue;
      }
      ++found;
      c.expect(!(act_on_tree(g, t0) == t0), "non-integral element fixed the standard vertex");
    }
    c.expect(found == 200, "failed to sample 200 non-integral elements");
  }
  return c.out;
}

// classify vs the pair-of-balls criterion on conjugates of mu_q, plus the
// rank-two discriminator diag(3,1) / diag(t,1).
Outcome criterion_hyperbolicity() {
  Checker c;
  for (const FieldPtr& f : {q3(), fqt(), r2()}) {
    Sampler s(404);
    ValueElement prec = default_precision(f);
    ValueElement e1 = unit_step(f);
    for (int i = 0; i < 200; ++i) {
      long m = s.uniform(2, 6);
      FieldElement qel = f->uniformizer_power(e1.scaled(m)) * s.unit(f);
      Moebius mu(qel, f->zero(), f->zero(), f->one());
      Moebius sigma = s.moebius(f);
      for (int tries = 0; (sigma.c().is_zero() || sigma.d().is_zero()) && tries < 100;
           ++tries)
        sigma = s.moebius(f);
      if (sigma.c().is_zero() || sigma.d().is_zero()) continue;
      Moebius h = sigma * mu * sigma.inverse();
      FieldElement x_att = sigma.b() / sigma.d();
      FieldElement x_rep = sigma.a() / sigma.c();
      ValueElement vq = qel.valuation();

      Classification cl = classify(h, prec);
      c.expect(cl.cls == MoebiusClass::Hyperbolic, "conjugate not classified hyperbolic");
      c.expect(cl.multiplier == vq, "multiplier valuation mismatch");
      c.expect(cl.fixed_exact, "rational fixed points not found exactly");
      c.expect(cl.attracting && *cl.attracting == ProjPoint::finite(x_att),
               "attracting fixed point mismatch");
      c.expect(cl.repelling && *cl.repelling == ProjPoint::finite(x_rep),
               "repelling fixed point mismatch");

      // varpi route: trace^2/det inverse must be topologically nilpotent.
      c.expect((-varpi(h).valuation()).is_top_nilpotent(),
               "varpi criterion disagreed with classify");

      // Pair-of-balls witness: on the axis, h translates the vertex at
      // depth 1 on the repelling side to depth v(q)-1 on the attracting side.
      ValueElement a0 = (x_rep - x_att).valuation();
      Ball from(x_rep, a0 + e1);
      Ball to(x_att, a0 + vq - e1);
      c.expect(length(from, to) == vq, "witness ball separation != multiplier");
      c.expect(length(from, to).is_top_nilpotent(), "witness separation not nilpotent");
      c.expect(act_on_tree(h, from) == to, "pair-of-balls witness failed");
    }
  }
  // Rank-two discriminator: v(3) = (0,1) is not topologically nilpotent,
  // v(t) = (1,0) is.
  FieldPtr f = r2();
  Classification c3 = classify(mat(f, 3, 0, 0, 1), default_precision(f));
  c.expect(c3.cls == MoebiusClass::NonHyperbolicInfinite, "diag(3,1) accepted over rank 2");
  Moebius mt(f->t_element(), f->zero(), f->zero(), f->one());
  Classification ct = classify(mt, default_precision(f));
  c.expect(ct.cls == MoebiusClass::Hyperbolic && ct.multiplier == ValueElement::make({1, 0}),
           "diag(t,1) rejected over rank 2");
  return c.out;
}

// Tree bounds |V| <= |L|-2, |E| <= |L|-3, connectivity/acyclicity, and
// incremental == batch, on random point sets.
Outcome criterion_trees() {
  Checker c;
  for (const FieldPtr& f : metric_instances()) {
    Sampler s(505);
    for (int i = 0; i < 100; ++i) {
      std::size_t n = static_cast<std::size_t>(s.uniform(3, 40));
      std::vector<ProjPoint> pts;
      while (pts.size() < n) {
        ProjPoint p = s.point(f, 5);
        bool dup = false;
        for (const ProjPoint& old : pts) dup = dup || old == p;
        if (!dup) pts.push_back(p);
      }
      PointSet L = PointSet::of(f, pts);
      c.expect(L.size() == n, "duplicate points slipped into the sample");
      SimplicialTree batch = build_tree(L);
      c.expect(batch.vertices().size() <= n - 2, "vertex bound violated");
      c.expect(batch.edges().size() <= n - 3 || (n == 3 && batch.edges().empty()),
               "edge bound violated");
      c.expect(batch.connected(), "tree not connected");
      c.expect(batch.edges().size() + 1 == batch.vertices().size(),
               "tree not acyclic");
      SimplicialTree inc = build_tree(PointSet::of(f, {pts[0], pts[1], pts[2]}));
      for (std::size_t k = 3; k < n; ++k) inc = insert_point(inc, pts[k]);
      c.expect(inc.same_tree(batch), "incremental build differs from batch build");
    }
  }
  return c.out;
}

// Shared end-to-end suite for a verified rank-2 datum: ping-pong, words of
// length <= 5 hyperbolic and pairwise distinct, B(w) nesting and the radius
// bound, quotient genus 2.
void schottky_suite(Checker& c, const SchottkyData& S, const std::string& label) {
  PingPongReport rep = verify_ping_pong(S);
  c.expect(rep.ok, label + ": ping-pong failed");
  if (!rep.ok) return;
  ValueElement rho = *rep.separation;
  ValueElement prec = default_precision(S.field());

  std::vector<Word> words = reduced_words_up_to(2, 5);
  std::set<std::string> keys;
  std::unordered_map<std::string, Ball> balls;
  long hyper = 0;
  for (const Word& w : words) {
    if (w.empty()) continue;
    if (word_is_hyperbolic(S, w, prec)) ++hyper;

    Moebius m = S.evaluate(w);
    const FieldElement* entries[4] = {&m.a(), &m.b(), &m.c(), &m.d()};
    FieldElement scale;
    for (const FieldElement* e : entries)
      if (!e->is_zero()) {
        scale = e->inverse();
        break;
      }
    std::string key;
    for (const FieldElement* e : entries) key += (*e * scale).to_string() + "|";
    keys.insert(key);

    Ball bw = ball_of_word(S, w);
    balls.emplace(w.to_string(), bw);
    long sl = static_cast<long>(w.size());
    if (sl >= 2) {
      Word prefix = Word::of(std::vector<int>(w.letters().begin(), w.letters().end() - 1));
      auto it = balls.find(prefix.to_string());
      c.expect(it != balls.end() && it->second.contains(bw),
               label + ": B(w) not nested in its prefix ball at " + w.to_string());
    }
    ValueElement bound = rho.scaled(sl - 1) + S.pairing_ball(w.letters().front()).radius();
    c.expect(!(bw.radius() < bound), label + ": radius bound failed at " + w.to_string());
  }
  c.expect(hyper == static_cast<long>(words.size()) - 1,
           label + ": some reduced word of length <= 5 is not hyperbolic");
  c.expect(keys.size() == words.size() - 1,
           label + ": reduced words of length <= 5 not pairwise distinct");

  QuotientResult q = quotient_graph(S);
  c.expect(q.genus == 2, label + ": quotient genus != 2");
  c.expect(q.graph.genus() == 2, label + ": quotient graph Betti number != 2");
}

Outcome criterion_schottky_rank1() {
  Checker c;
  schottky_suite(c, deep_pair(), "rank-1 datum");
  return c.out;
}

Outcome criterion_schottky_rank2() {
  Checker c;
  schottky_suite(c, rank2_pair(), "rank-2 datum");
  return c.out;
}

// Fundamental domain: sampled F-points leave F under every word of length
// 2..4, and the overlap equality F cap psi(F) = B(psi) cap psi(B(psi^-1))
// holds pointwise on circle samples.
void fundamental_domain_suite(Checker& c, const SchottkyData& S, std::uint64_t seed,
                              const std::string& label) {
  FieldPtr f = S.field();
  Sampler s(seed);

  std::vector<ProjPoint> sample;
  sample.push_back(ProjPoint::infinity(f));
  // Boundary circles belong to F when they avoid the other balls' interiors.
  for (int letter : {1, -1, 2, -2}) {
    const Ball& b = S.pairing_ball(letter);
    ProjPoint z = ProjPoint::finite(b.center() + f->uniformizer_power(b.radius()));
    if (in_fundamental_domain(S, z)) sample.push_back(z);
  }
  while (sample.size() < 100) {
    ProjPoint z = s.point(f, 2);
    if (in_fundamental_domain(S, z)) sample.push_back(z);
  }

  std::vector<Moebius> elements;
  for (const Word& w : reduced_words_up_to(2, 4))
    if (w.size() >= 2) elements.push_back(S.evaluate(w));
  c.expect(elements.size() == 156, label + ": unexpected word count");

  for (const ProjPoint& z : sample)
    for (const Moebius& m : elements)
      c.expect(!in_fundamental_domain(S, m.apply(z)),
               label + ": w(z) stayed in F for some |w| in 2..4");

  // Circle samples: units in several residue directions, plus a unit with a
  // nontrivial second digit.
  std::vector<FieldElement> units;
  for (long u : {1, 2, 4, 5}) {
    FieldElement e = f->from_long(u);
    if (e.valuation() == ValueElement::zero(f->rank())) units.push_back(e);
  }
  units.push_back(f->one() + f->uniformizer_power(unit_step(f)));

  long realized_overlap = 0;
  for (int letter : {1, -1, 2, -2}) {
    Moebius psi = S.element(letter);
    Moebius psi_inv = S.element(-letter);
    const Ball& ball_psi = S.pairing_ball(letter);
    const Ball& ball_inv = S.pairing_ball(-letter);

    std::vector<ProjPoint> circle;
    for (const FieldElement& u : units) {
      // On the sphere of B(psi) directly, and pushed forward from the
      // sphere of B(psi^-1).
      circle.push_back(ProjPoint::finite(
          ball_psi.center() + u * f->uniformizer_power(ball_psi.radius())));
      circle.push_back(psi.apply(ProjPoint::finite(
          ball_inv.center() + u * f->uniformizer_power(ball_inv.radius()))));
    }
    for (const ProjPoint& w : circle) {
      ProjPoint y = psi_inv.apply(w);
      bool lhs = in_fundamental_domain(S, w) && in_fundamental_domain(S, y);
      bool rhs = ball_psi.contains(w) && ball_inv.contains(y);
      c.expect(lhs == rhs, label + ": overlap equality failed on a circle sample");
      if (lhs) ++realized_overlap;
    }
  }
  c.expect(realized_overlap > 0, label + ": no circle sample realized the overlap");
}

Outcome criterion_fundamental_domain() {
  Checker c;
  fundamental_domain_suite(c, deep_pair(), 808, "rank-1 datum");
  fundamental_domain_suite(c, rank2_pair(), 809, "rank-2 datum");
  return c.out;
}

// Graph -> Schottky datum -> quotient graph round trips, including the
// ramified-extension path for odd weights.
Outcome criterion_round_trip() {
  Checker c;
  ValueElement two = ValueElement::make({2});

  WeightedGraph theta;
  theta.add_vertex("u");
  theta.add_vertex("x");
  theta.add_edge(0, 1, two);
  theta.add_edge(0, 1, two);
  theta.add_edge(0, 1, two);
  RoundTripReport r = round_trip(theta, q3());
  c.expect(r.isomorphic && r.genus == 2, "theta round trip failed: " + r.detail);

  WeightedGraph dumbbell;
  dumbbell.add_vertex("u");
  dumbbell.add_vertex("x");
  dumbbell.add_edge(0, 0, two);
  dumbbell.add_edge(1, 1, two);
  dumbbell.add_edge(0, 1, two);
  r = round_trip(dumbbell, q3());
  c.expect(r.isomorphic && r.genus == 2, "dumbbell round trip failed: " + r.detail);

  WeightedGraph k4;
  for (const char* l : {"a", "b", "c", "d"}) k4.add_vertex(l);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) k4.add_edge(i, j, two);
  QuotientOptions shallow;
  shallow.depth = 2;
  r = round_trip(k4, q5(), shallow);
  c.expect(r.isomorphic && r.genus == 3, "K4 round trip failed: " + r.detail);

  WeightedGraph odd;
  odd.add_vertex("u");
  odd.add_vertex("x");
  ValueElement one = ValueElement::make({1});
  odd.add_edge(0, 1, one);
  odd.add_edge(0, 1, one);
  odd.add_edge(0, 1, one);
  SynthesisResult syn = synthesize(odd, q3());
  c.expect(syn.extended, "odd-weight theta did not extend the field");
  c.expect(syn.field->kind() == FieldKind::QuadExt, "odd-weight synthesis field not quad-ext");
  r = round_trip(odd, q3());
  c.expect(r.isomorphic && r.genus == 2, "odd-weight round trip failed: " + r.detail);
  return c.out;
}

// Orbit of 0 under t -> t+1 over Q_3 equidistributes over residue discs;
// the unit-multiplier scaling mu_2 over Q(t) separates uniformly.
Outcome criterion_orbits() {
  Checker c;
  FieldPtr f = q3();
  Moebius shift = mat(f, 1, 1, 0, 1);
  std::vector<FieldElement> orbit;
  ProjPoint z = ProjPoint::finite(f->zero());
  for (int n = 0; n < 81; ++n) {
    orbit.push_back(z.value());
    z = shift.apply(z);
  }
  long p3k = 3;
  for (int k = 1; k <= 4; ++k, p3k *= 3) {
    long expect_hits = 81 / p3k;
    for (long j = 0; j < p3k; ++j) {
      Ball disc(f->from_long(j), ValueElement::make({k}));
      long hits = 0;
      for (const FieldElement& x : orbit)
        if (disc.contains(x)) ++hits;
      c.expect(hits == expect_hits,
               "disc " + disc.to_string() + " hit " + std::to_string(hits) + " times");
    }
  }

  FieldPtr k = fqt();
  Moebius mu2 = mat(k, 2, 0, 0, 1);
  OrbitReport rep = orbit_report(mu2, ProjPoint::finite(k->one()), 10, default_precision(k));
  c.expect(rep.points.size() == 21, "mu_2 orbit size != 21");
  c.expect(rep.uniform_separation, "mu_2 orbit separation not uniform");
  c.expect(rep.min_valuation && *rep.min_valuation == ValueElement::zero(1),
           "mu_2 pairwise valuation != 0");
  // Cross-check on the tree: truncations at radius [5] are pairwise at
  // length [10] exactly.
  ValueElement r5 = ValueElement::make({5});
  ValueElement ten = ValueElement::make({10});
  for (std::size_t i = 0; i < rep.points.size(); ++i)
    for (std::size_t j = i + 1; j < rep.points.size(); ++j)
      c.expect(length(Ball(rep.points[i].value(), r5), Ball(rep.points[j].value(), r5)) ==
                   ten,
               "tree distance between orbit truncations not uniform");
  return c.out;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries = {
      {1, "lambda-tree metric properties", criterion_metric},
      {2, "Moebius action: Taylor, isometry, t-map equivariance", criterion_action},
      {3, "standard-vertex stabilizer", criterion_stabilizer},
      {4, "hyperbolicity vs pair-of-balls criterion", criterion_hyperbolicity},
      {5, "finite trees of point sets", criterion_trees},
      {6, "Schottky end-to-end, rank-1 valuation", criterion_schottky_rank1},
      {7, "Schottky end-to-end, rank-2 valuation", criterion_schottky_rank2},
      {8, "fundamental domain displacement and overlap", criterion_fundamental_domain},
      {9, "graph synthesis round trips", criterion_round_trip},
      {10, "orbit equidistribution and uniform separation", criterion_orbits},
  };
  bool all = true;
  for (const Entry& e : entries) {
    Outcome out;
    std::string detail;
    try {
      out = e.run();
      detail = out.pass ? std::to_string(out.checks) + " exact checks"
                        : out.first_failure;
    } catch (const std::exception& ex) {
      out.pass = false;
      detail = std::string("exception: ") + ex.what();
    }
    all = all && out.pass;
    std::printf("criterion %2d [%s]: %s (%s)\n", e.id, out.pass ? "PASS" : "FAIL", e.name,
                detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}

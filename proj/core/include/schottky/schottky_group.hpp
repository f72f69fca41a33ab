#pragma once

#include <optional>
#include <string>
#include <vector>

#include "schottky/moebius.hpp"
#include "schottky/weighted_graph.hpp"
#include "schottky/word.hpp"

namespace schottky {

/**
 * A rank-g Schottky datum: generators gamma_1..gamma_g together with 2g
 * candidate pairing balls, listed as B_1..B_g (domain side) followed by
 * B_{g+1}..B_{2g} (image side): gamma_i carries the exterior of B_i onto
 * B_{g+i}, with its pole inside B_i.
 */
struct SchottkyData {
  std::vector<Moebius> generators;
  std::vector<Ball> balls;

  const FieldPtr& field() const { return generators.at(0).field(); }
  int rank() const { return static_cast<int>(generators.size()); }

  /** The element of a signed letter: +i is gamma_i, -i its inverse. */
  Moebius element(int letter) const;
  /** Product of the letters of w; the identity for the empty word. */
  Moebius evaluate(const Word& w) const;
  /** Ball the letter maps into: B(+i) = B_{g+i}, B(-i) = B_i. */
  const Ball& pairing_ball(int letter) const;
  /** Ball holding the letter's pole: B(+i) pole lies in B_i. */
  const Ball& pole_ball(int letter) const;
};

/** Validates the shape (g >= 1, 2g balls, one common field). */
SchottkyData make_schottky(std::vector<Moebius> generators, std::vector<Ball> balls);

struct PingPongViolation {
  std::string rule;  // "overlap", "short-distance", "pole-outside", "image-mismatch"
  int i = 0, j = 0;  // 1-based ball indices; j = 0 for single-generator rules
  std::string detail;
};

struct PingPongReport {
  bool ok = false;
  std::vector<PingPongViolation> violations;
  // Minimal pairwise separation length of the 2g balls; present whenever the
  // balls are pairwise disjoint. Every length must have a strictly positive
  // leading coordinate for the datum to verify.
  std::optional<ValueElement> separation;
};

/**
 * Checks the ping-pong configuration: pairwise disjoint balls, pairwise
 * separation lengths with strictly positive leading coordinate, each pole in
 * its domain ball, and gamma_i . B_i = B_{g+i} on the tree. ok iff no
 * violations.
 */
PingPongReport verify_ping_pong(const SchottkyData& S);

/**
 * Vertex B(w): for w = psi_1 ... psi_s this is the prefix image
 * (psi_1 ... psi_{s-1}) . B(psi_s). Depth grows by at least the separation
 * per letter: a(B(w)) >= (s-1) * separation + a(B(psi_1)), and B(w) nests
 * inside the ball of every prefix. Throws EmptyWord on the empty word.
 */
Ball ball_of_word(const SchottkyData& S, const Word& w);

/**
 * Is z in the common exterior F of the 2g balls (keeping the boundary
 * spheres)? Equivalently psi(z) lies in B(psi) for every signed letter psi;
 * infinity lies in F for any verified datum.
 */
bool in_fundamental_domain(const SchottkyData& S, const ProjPoint& z);

/**
 * Attracting fixed points of the non-power reduced words of length <= n, in
 * shortlex word order, deduplicated by exact equality of the computed
 * points. (Fixed points are exact when the characteristic polynomial splits
 * in the field, else Hensel approximations at the given precision.)
 */
std::vector<ProjPoint> limit_set_sample(const SchottkyData& S, int n,
                                        const ValueElement& precision);

/** Does the (nonempty) word evaluate to a hyperbolic element? */
bool word_is_hyperbolic(const SchottkyData& S, const Word& w,
                        const ValueElement& precision);

/**
 * Base vertex for orbit constructions: the meeting vertex of the first
 * generator's fixed points with the second generator's attracting point (a
 * vertex on the first axis); the join of the two pairing balls in rank one.
 */
Ball default_base_vertex(const SchottkyData& S, const ValueElement& precision);

struct QuotientOptions {
  int depth = 4;       // first orbit word length tried
  int max_depth = 10;  // orbit word length at which to give up
  std::optional<Ball> base;
  std::optional<ValueElement> precision;
};

struct QuotientResult {
  WeightedGraph graph;  // the stable quotient core
  // Per edge of `graph` (same order as graph.edges()): reading the edge from
  // its first endpoint to its second corresponds to this deck transformation
  // on the tree.
  std::vector<Word> covering;
  long genus = 0;
  int depth = 0;  // orbit word length at which the core repeated
};

/**
 * Quotient graph of the tree action: the orbit of the base vertex under
 * words of length <= depth spans a subtree (closed under joins and under
 * subdivision at translated vertices); vertices and edges are identified
 * along the generator action, truncation debris is pruned (degree <= 1) and
 * degree-two chains are contracted with weights added. The resulting core
 * must repeat at two consecutive sampled depths (d, d+2); otherwise
 * NotStabilized is thrown. For a verified rank-g datum the core has first
 * Betti number g.
 */
QuotientResult quotient_graph(const SchottkyData& S, const QuotientOptions& opt = {});

}  // namespace schottky

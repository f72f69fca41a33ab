#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "schottky/ball.hpp"
#include "schottky/field.hpp"
#include "schottky/schottky_group.hpp"
#include "schottky/weighted_graph.hpp"

namespace schottky {

/**
 * Split of the edge set of a connected weighted graph into a spanning tree
 * and the complementary (cotree) edges. Indices refer to positions in
 * WeightedGraph::edges(); cotree_edges is ascending and has one entry per
 * independent cycle (the genus of the graph).
 */
struct CotreeSplit {
  std::vector<std::size_t> tree_edges;
  std::vector<std::size_t> cotree_edges;
};

/**
 * Greedy cotree selection: while a cycle remains, drop one of its edges whose
 * weight has strictly positive leading coordinate (a topologically nilpotent
 * multiplier valuation). Requires a connected graph with positive edge
 * weights. Throws NoNilpotentEdgeInCycle when some cycle carries no such
 * edge; the total weight around that cycle then has leading coordinate zero,
 * so no hyperbolic transformation could translate along it.
 */
CotreeSplit nilpotent_cotree(const WeightedGraph& g);

/**
 * Pairwise disjoint sub-balls of b at prescribed tree distances: the i-th
 * output is centered at c(b) + r_i * u^{a(b)} for the i-th residue
 * representative r_i and has radius a(b) + distances[i]. Distinct outputs
 * join back to b itself, and l(b, out[i]) = distances[i] exactly. Throws
 * TooFewResidues when the residue field has fewer than distances.size()
 * elements and InvalidArgument on a non-positive distance.
 */
std::vector<Ball> place_subballs(const Ball& b, const std::vector<ValueElement>& distances);

/** Outcome of synthesizing a Schottky group from a weighted graph. */
struct SynthesisResult {
  FieldPtr field;     // the requested field, or its ramified quadratic extension
  SchottkyData data;  // verified ping-pong datum; generator i realizes cotree_edges[i]
  std::vector<Ball> vertex_balls;  // lift of each vertex, indexed like labels()
  std::vector<std::size_t> tree_edges;
  std::vector<std::size_t> cotree_edges;
  bool extended = false;  // half-integral midpoint radii forced a field extension
  std::string note;       // explanation of the extension when extended, else empty
};

/**
 * Builds a Schottky group whose quotient graph recovers g. The spanning tree
 * is lifted to a nested family of balls rooted at the standard ball (root = a
 * vertex of minimal valence, ties by label); every cotree edge contributes a
 * pair of midpoint balls placed halfway down its two stub directions, and its
 * generator is the hyperbolic transformation carrying the first midpoint ball
 * to the second with translation length equal to the induced cycle weight.
 * When some half-weight leaves the value lattice, the field is wrapped in a
 * ramified quadratic extension (noted in the result, not an error).
 *
 * Requirements: connected, every valence >= 3, weights positive and in the
 * value lattice of base, every cycle containing an edge of strictly positive
 * leading weight coordinate, and valences within the residue budget (the
 * root needs valence many residue classes, every other vertex one fewer).
 * Throws InvalidArgument / UnsupportedWeight / NoNilpotentEdgeInCycle /
 * TooFewResidues accordingly; the returned datum always verifies.
 */
SynthesisResult synthesize(const WeightedGraph& g, const FieldPtr& base);

/** Outcome of a synthesis / quotient round trip. */
struct RoundTripReport {
  bool isomorphic = false;  // recovered quotient isomorphic to the input graph
  WeightedGraph recovered;  // quotient graph of the synthesized group
  long genus = 0;           // genus of the recovered graph
  std::string detail;       // mismatch certificate when not isomorphic
};

/**
 * End-to-end check: synthesize a group from g, compute its quotient graph,
 * and compare with g as weighted multigraphs (vertex labels ignored). opt is
 * forwarded to the quotient computation. Errors propagate from synthesis.
 */
RoundTripReport round_trip(const WeightedGraph& g, const FieldPtr& base,
                           const QuotientOptions& opt = {});

}  // namespace schottky

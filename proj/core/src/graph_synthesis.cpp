#include "schottky/graph_synthesis.hpp"

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "schottky/errors.hpp"
#include "schottky/moebius.hpp"

namespace schottky {

namespace {

// One cycle of the subgraph spanned by the active edges, as a list of edge
// indices; empty when that subgraph is a forest. Loops and parallel edges
// count as cycles. Works from an arbitrary spanning forest: any remaining
// active edge closes a cycle with the two tree paths to the meeting vertex.
std::vector<std::size_t> find_cycle(const WeightedGraph& g, const std::vector<char>& active) {
  const auto& edges = g.edges();
  const std::size_t V = g.vertex_count();
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (active[e] && edges[e].u == edges[e].v) return {e};

  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(V);  // (other, edge)
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!active[e]) continue;
    adj[edges[e].u].push_back({edges[e].v, e});
    adj[edges[e].v].push_back({edges[e].u, e});
  }
  std::vector<long> parent(V, -1);
  std::vector<std::size_t> parent_edge(V, 0);
  std::vector<char> in_forest(edges.size(), 0), visited(V, 0);
  for (std::size_t s = 0; s < V; ++s) {
    if (visited[s]) continue;
    std::vector<std::size_t> queue = {s};
    visited[s] = 1;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      std::size_t x = queue[qi];
      for (auto [y, e] : adj[x]) {
        if (visited[y]) continue;
        visited[y] = 1;
        parent[y] = static_cast<long>(x);
        parent_edge[y] = e;
        in_forest[e] = 1;
        queue.push_back(y);
      }
    }
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!active[e] || in_forest[e]) continue;
    std::size_t x = edges[e].u, y = edges[e].v;
    std::vector<long> on_x_chain(V, 0);
    for (long v = static_cast<long>(x); v != -1; v = parent[v]) on_x_chain[v] = 1;
    std::vector<std::size_t> cycle = {e};
    long meet = static_cast<long>(y);
    while (!on_x_chain[meet]) {
      cycle.push_back(parent_edge[meet]);
      meet = parent[meet];
    }
    for (long v = static_cast<long>(x); v != meet; v = parent[v]) cycle.push_back(parent_edge[v]);
    return cycle;
  }
  return {};
}

bool positive(const ValueElement& w) {
  return !w.is_bottom() && ValueElement::zero(w.rank()) < w;
}

}  // namespace

CotreeSplit nilpotent_cotree(const WeightedGraph& g) {
  if (g.vertex_count() == 0) throw Error(ErrorKind::InvalidArgument, "graph must be nonempty");
  if (!g.connected()) throw Error(ErrorKind::InvalidArgument, "graph must be connected");
  const auto& edges = g.edges();
  for (const auto& e : edges)
    if (!positive(e.weight))
      throw Error(ErrorKind::InvalidArgument, "edge weights must be positive");

  std::vector<char> active(edges.size(), 1);
  std::vector<std::size_t> cotree;
  for (;;) {
    std::vector<std::size_t> cycle = find_cycle(g, active);
    if (cycle.empty()) break;
    std::size_t drop = edges.size();
    for (std::size_t e : cycle)
      if (edges[e].weight.is_top_nilpotent()) {
        drop = e;
        break;
      }
    if (drop == edges.size()) {
      ValueElement total = edges[cycle[0]].weight;
      for (std::size_t i = 1; i < cycle.size(); ++i) total = total + edges[cycle[i]].weight;
      throw Error(ErrorKind::NoNilpotentEdgeInCycle,
                  "cycle of total weight " + total.to_string() +
                      " has no edge with strictly positive leading coordinate");
    }
    active[drop] = 0;
    cotree.push_back(drop);
  }
  std::sort(cotree.begin(), cotree.end());
  CotreeSplit out;
  out.cotree_edges = std::move(cotree);
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (active[e]) out.tree_edges.push_back(e);
  return out;
}

std::vector<Ball> place_subballs(const Ball& b, const std::vector<ValueElement>& distances) {
  if (distances.empty()) return {};
  const FieldPtr& f = b.field();
  for (const ValueElement& d : distances) {
    if (d.rank() != f->rank())
      throw Error(ErrorKind::InvalidArgument, "distance rank does not match the field");
    if (!positive(d))
      throw Error(ErrorKind::InvalidArgument, "sub-ball distances must be positive");
  }
  std::vector<FieldElement> reps =
      residue_representatives(f, static_cast<long>(distances.size()));
  FieldElement scale = f->uniformizer_power(b.radius());
  std::vector<Ball> out;
  out.reserve(distances.size());
  for (std::size_t i = 0; i < distances.size(); ++i)
    out.emplace_back(b.center() + reps[i] * scale, b.radius() + distances[i]);
  return out;
}

SynthesisResult synthesize(const WeightedGraph& g, const FieldPtr& base) {
  const int rank = base->rank();
  const auto& edges = g.edges();
  if (g.vertex_count() == 0) throw Error(ErrorKind::InvalidArgument, "graph must be nonempty");
  if (!g.connected()) throw Error(ErrorKind::InvalidArgument, "graph must be connected");
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) < 3)
      throw Error(ErrorKind::InvalidArgument, "vertex " + g.labels()[v] +
                                                  " has valence " + std::to_string(g.degree(v)) +
                                                  "; every vertex must have valence at least 3");
  for (const auto& e : edges) {
    if (e.weight.is_bottom() || e.weight.rank() != rank || !positive(e.weight))
      throw Error(ErrorKind::InvalidArgument,
                  "edge weights must be positive rank-" + std::to_string(rank) + " values");
    if (!base->lattice_contains(e.weight))
      throw Error(ErrorKind::UnsupportedWeight, "edge weight " + e.weight.to_string() +
                                                    " lies outside the value lattice of " +
                                                    base->spec_string());
  }

  CotreeSplit split = nilpotent_cotree(g);

  // Root: minimal valence, ties by label. It spends one residue direction per
  // incident edge end; every other vertex keeps one direction for its parent.
  const std::size_t V = g.vertex_count();
  std::size_t root = 0;
  for (std::size_t v = 1; v < V; ++v)
    if (std::make_pair(g.degree(v), g.labels()[v]) <
        std::make_pair(g.degree(root), g.labels()[root]))
      root = v;
  if (std::optional<long> k = base->residue_size()) {
    for (std::size_t v = 0; v < V; ++v) {
      long need = static_cast<long>(g.degree(v)) - (v == root ? 0 : 1);
      if (need > *k)
        throw Error(ErrorKind::TooFewResidues,
                    "vertex " + g.labels()[v] + " needs " + std::to_string(need) +
                        " residue directions, residue field has " + std::to_string(*k));
    }
  }

  // Midpoint radii live at half the cotree weights; when some half leaves the
  // value lattice, ramify the leading uniformizer by a quadratic extension.
  FieldPtr field = base;
  bool extended = false;
  std::string note;
  bool need_half = false;
  for (std::size_t e : split.cotree_edges)
    if (!base->lattice_contains(edges[e].weight.halved())) need_half = true;
  if (need_half) {
    if (base->kind() == FieldKind::QuadExt)
      throw Error(ErrorKind::UnsupportedWeight,
                  "midpoint radii leave the value lattice of " + base->spec_string() +
                      "; only one quadratic extension level is supported");
    std::vector<long> leading(static_cast<std::size_t>(rank), 0);
    leading[0] = 1;
    field = Field::quad_ext(base, base->uniformizer_power(ValueElement::make(leading)));
    extended = true;
    note = "OddWeightNeedsExtension: midpoint radii are half-integral, synthesized over " +
           field->spec_string();
    for (std::size_t e : split.cotree_edges)
      if (!field->lattice_contains(edges[e].weight.halved()))
        throw Error(ErrorKind::UnsupportedWeight,
                    "half of weight " + edges[e].weight.to_string() +
                        " is not in the extended value lattice (only the leading " +
                        "coordinate can be ramified)");
  }

  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> tadj(V);  // (edge, other)
  for (std::size_t e : split.tree_edges) {
    tadj[edges[e].u].push_back({e, edges[e].v});
    tadj[edges[e].v].push_back({e, edges[e].u});
  }
  struct Stub {
    std::size_t pos;  // index into split.cotree_edges
    int side;         // 0 = first endpoint of the edge, 1 = second
  };
  std::vector<std::vector<Stub>> stubs(V);
  for (std::size_t i = 0; i < split.cotree_edges.size(); ++i) {
    const auto& e = edges[split.cotree_edges[i]];
    stubs[e.u].push_back({i, 0});
    stubs[e.v].push_back({i, 1});
  }

  // Lift the spanning tree: the root is the standard ball, and every vertex
  // hands out residue directions to its tree children (sorted by label) and
  // then to its cotree stubs (by edge index). A stub's midpoint ball sits
  // halfway down the cycle weight in its own direction.
  std::vector<std::optional<Ball>> vball(V);
  std::vector<long> tparent(V, -1);
  std::vector<ValueElement> wdist(V, ValueElement::zero(rank));
  std::vector<int> tdepth(V, 0);
  std::vector<std::optional<Ball>> mid_first(split.cotree_edges.size());
  std::vector<std::optional<Ball>> mid_second(split.cotree_edges.size());
  vball[root] = standard_ball(field);
  std::vector<std::size_t> queue = {root};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    std::size_t u = queue[qi];
    const Ball& bu = *vball[u];
    std::vector<std::pair<std::size_t, std::size_t>> children;  // (edge, child)
    for (auto [e, x] : tadj[u])
      if (!vball[x]) children.push_back({e, x});
    std::sort(children.begin(), children.end(), [&](const auto& a, const auto& b) {
      return g.labels()[a.second] < g.labels()[b.second];
    });
    std::vector<ValueElement> dists;
    for (const auto& [e, x] : children) dists.push_back(edges[e].weight);
    for (const Stub& s : stubs[u])
      dists.push_back(edges[split.cotree_edges[s.pos]].weight.halved());
    std::vector<Ball> subs = place_subballs(bu, dists);
    std::size_t k = 0;
    for (const auto& [e, x] : children) {
      vball[x] = subs[k++];
      tparent[x] = static_cast<long>(u);
      wdist[x] = wdist[u] + edges[e].weight;
      tdepth[x] = tdepth[u] + 1;
      queue.push_back(x);
    }
    for (const Stub& s : stubs[u]) (s.side == 0 ? mid_first : mid_second)[s.pos] = subs[k++];
  }

  auto tree_distance = [&](std::size_t a, std::size_t b) {
    std::size_t x = a, y = b;
    while (tdepth[x] > tdepth[y]) x = static_cast<std::size_t>(tparent[x]);
    while (tdepth[y] > tdepth[x]) y = static_cast<std::size_t>(tparent[y]);
    while (x != y) {
      x = static_cast<std::size_t>(tparent[x]);
      y = static_cast<std::size_t>(tparent[y]);
    }
    return wdist[a] + wdist[b] - wdist[x].scaled(2);
  };

  // One generator per cotree edge: its translation length is the cycle weight
  // (the edge weight plus the tree path between its endpoints), realized from
  // the first midpoint ball onto the second.
  std::vector<Moebius> gens;
  std::vector<Ball> domain, image;
  for (std::size_t i = 0; i < split.cotree_edges.size(); ++i) {
    const auto& e = edges[split.cotree_edges[i]];
    ValueElement cycle_weight = e.weight + tree_distance(e.u, e.v);
    FieldElement q = field->uniformizer_power(cycle_weight);
    gens.push_back(hyperbolic_from_balls(*mid_first[i], *mid_second[i], q));
    domain.push_back(*mid_first[i]);
    image.push_back(*mid_second[i]);
  }
  std::vector<Ball> balls = domain;
  balls.insert(balls.end(), image.begin(), image.end());
  SchottkyData data = make_schottky(std::move(gens), std::move(balls));
  PingPongReport report = verify_ping_pong(data);
  if (!report.ok) {
    std::string msg = "synthesized datum failed verification";
    if (!report.violations.empty())
      msg += ": " + report.violations[0].rule + " (" + report.violations[0].detail + ")";
    throw Error(ErrorKind::InvalidArgument, msg);
  }

  std::vector<Ball> vertex_balls;
  vertex_balls.reserve(V);
  for (std::size_t v = 0; v < V; ++v) vertex_balls.push_back(*vball[v]);
  return SynthesisResult{std::move(field),          std::move(data),
                         std::move(vertex_balls),   std::move(split.tree_edges),
                         std::move(split.cotree_edges), extended,
                         std::move(note)};
}

RoundTripReport round_trip(const WeightedGraph& g, const FieldPtr& base,
                           const QuotientOptions& opt) {
  SynthesisResult syn = synthesize(g, base);
  QuotientResult q = quotient_graph(syn.data, opt);
  RoundTripReport out;
  out.recovered = q.graph;
  out.genus = q.genus;
  out.isomorphic = isomorphic(q.graph, g);
  if (!out.isomorphic)
    out.detail = "recovered quotient is not isomorphic to the input: " +
                 q.graph.canonical_signature() + " vs " + g.canonical_signature();
  return out;
}

}  // namespace schottky

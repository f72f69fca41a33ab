#include "schottky/weighted_graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "schottky/errors.hpp"

namespace schottky {

size_t WeightedGraph::add_vertex(std::string label) {
  if (label.empty())
    throw Error(ErrorKind::InvalidArgument, "vertex labels must be nonempty");
  for (const std::string& l : labels_)
    if (l == label)
      throw Error(ErrorKind::InvalidArgument, "duplicate vertex label: " + label);
  labels_.push_back(std::move(label));
  return labels_.size() - 1;
}

void WeightedGraph::add_edge(size_t u, size_t v, ValueElement weight) {
  if (u >= labels_.size() || v >= labels_.size())
    throw Error(ErrorKind::UnknownVertex, "edge endpoint out of range");
  if (u > v) std::swap(u, v);
  edges_.push_back({u, v, std::move(weight)});
}

void WeightedGraph::add_edge(const std::string& u, const std::string& v,
                             ValueElement weight) {
  add_edge(index_of(u), index_of(v), std::move(weight));
}

size_t WeightedGraph::index_of(const std::string& label) const {
  for (size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label) return i;
  throw Error(ErrorKind::UnknownVertex, "no vertex labelled " + label);
}

size_t WeightedGraph::degree(size_t v) const {
  if (v >= labels_.size())
    throw Error(ErrorKind::UnknownVertex, "vertex index out of range");
  size_t d = 0;
  for (const Edge& e : edges_) {
    if (e.u == v) ++d;
    if (e.v == v) ++d;  // a loop hits both branches
  }
  return d;
}

size_t WeightedGraph::min_degree() const {
  size_t best = 0;
  for (size_t v = 0; v < labels_.size(); ++v)
    best = v == 0 ? degree(v) : std::min(best, degree(v));
  return best;
}

size_t WeightedGraph::components() const {
  size_t n = labels_.size();
  std::vector<size_t> parent(n);
  std::iota(parent.begin(), parent.end(), size_t{0});
  auto find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : edges_) parent[find(e.u)] = find(e.v);
  size_t c = 0;
  for (size_t v = 0; v < n; ++v)
    if (find(v) == v) ++c;
  return c;
}

long WeightedGraph::genus() const {
  return static_cast<long>(edges_.size()) - static_cast<long>(labels_.size()) +
         static_cast<long>(components());
}

std::string WeightedGraph::to_dot() const {
  std::ostringstream os;
  os << "graph g {\n";
  for (size_t i = 0; i < labels_.size(); ++i)
    os << "  n" << i << " [label=\"" << labels_[i] << "\"];\n";
  for (const Edge& e : edges_)
    os << "  n" << e.u << " -- n" << e.v << " [label=\"" << e.weight.to_string()
       << "\"];\n";
  os << "}\n";
  return os.str();
}

namespace {

// Serialize the edge list under a given vertex ordering, sorted so that the
// string depends only on the ordered graph, not on edge insertion order.
std::string ordered_signature(const WeightedGraph& g, const std::vector<size_t>& pos) {
  std::vector<std::string> parts;
  parts.reserve(g.edges().size());
  for (const auto& e : g.edges()) {
    size_t a = pos[e.u], b = pos[e.v];
    if (a > b) std::swap(a, b);
    std::ostringstream os;
    os << "(" << a << "," << b << "," << e.weight.to_string() << ")";
    parts.push_back(os.str());
  }
  std::sort(parts.begin(), parts.end());
  std::ostringstream os;
  os << "V=" << g.vertex_count() << ";";
  for (const auto& p : parts) os << p;
  return os.str();
}

// Iterated color refinement: a vertex color absorbs the multiset of
// (edge weight, neighbor color) pairs over its incident edges. Colors are
// re-indexed after each round, so two isomorphic graphs end with identical
// color histograms and class structure.
std::vector<int> refine_colors(const WeightedGraph& g) {
  size_t n = g.vertex_count();
  std::vector<int> color(n, 0);
  for (size_t round = 0; round <= n; ++round) {
    std::vector<std::string> key(n);
    for (size_t v = 0; v < n; ++v) {
      std::vector<std::string> inc;
      for (const auto& e : g.edges()) {
        if (e.u == v)
          inc.push_back(e.weight.to_string() + "@" +
                        std::to_string(e.u == e.v ? -1 : color[e.v]));
        if (e.v == v && e.u != e.v)
          inc.push_back(e.weight.to_string() + "@" + std::to_string(color[e.u]));
      }
      std::sort(inc.begin(), inc.end());
      std::ostringstream os;
      os << color[v] << "|";
      for (const auto& s : inc) os << s << ";";
      key[v] = os.str();
    }
    std::map<std::string, int> index;
    for (const auto& k : key) index.emplace(k, 0);
    int next = 0;
    for (auto& kv : index) kv.second = next++;
    std::vector<int> fresh(n);
    for (size_t v = 0; v < n; ++v) fresh[v] = index[key[v]];
    if (fresh == color) break;
    color = std::move(fresh);
  }
  return color;
}

}  // namespace

std::string WeightedGraph::canonical_signature() const {
  size_t n = vertex_count();
  if (n == 0) return "V=0;";
  std::vector<int> color = refine_colors(*this);

  // Group vertices by color; candidate orderings permute within classes only.
  std::map<int, std::vector<size_t>> classes;
  for (size_t v = 0; v < n; ++v) classes[color[v]].push_back(v);
  std::vector<std::vector<size_t>> cells;
  for (auto& kv : classes) cells.push_back(kv.second);

  std::string best;
  std::vector<size_t> pos(n);
  std::vector<std::vector<size_t>> perm = cells;
  auto assemble = [&]() {
    size_t at = 0;
    for (const auto& cell : perm)
      for (size_t v : cell) pos[v] = at++;
    std::string sig = ordered_signature(*this, pos);
    if (best.empty() || sig < best) best = sig;
  };
  // Exhaust the product of per-cell permutations.
  auto rec = [&](auto&& self, size_t cell) -> void {
    if (cell == perm.size()) {
      assemble();
      return;
    }
    std::sort(perm[cell].begin(), perm[cell].end());
    do {
      self(self, cell + 1);
    } while (std::next_permutation(perm[cell].begin(), perm[cell].end()));
  };
  rec(rec, 0);
  return best;
}

bool isomorphic(const WeightedGraph& a, const WeightedGraph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count())
    return false;
  return a.canonical_signature() == b.canonical_signature();
}

}  // namespace schottky

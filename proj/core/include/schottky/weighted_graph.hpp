#pragma once

#include <string>
#include <vector>

#include "schottky/value_element.hpp"

namespace schottky {

// A finite undirected multigraph with unique vertex labels and edge weights
// in the value group. Loops and parallel edges are allowed; a loop adds two
// to the degree of its vertex.
class WeightedGraph {
 public:
  struct Edge {
    size_t u, v;  // endpoint indices, stored with u <= v
    ValueElement weight;
  };

  WeightedGraph() = default;

  size_t add_vertex(std::string label);
  void add_edge(size_t u, size_t v, ValueElement weight);
  void add_edge(const std::string& u, const std::string& v, ValueElement weight);

  size_t vertex_count() const { return labels_.size(); }
  size_t edge_count() const { return edges_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Edge>& edges() const { return edges_; }

  size_t index_of(const std::string& label) const;  // throws UnknownVertex
  size_t degree(size_t v) const;
  size_t min_degree() const;
  size_t components() const;
  bool connected() const { return components() <= 1; }

  // First Betti number E - V + C; the genus of the graph.
  long genus() const;

  std::string to_dot() const;

  // A serialization that is identical for two graphs exactly when they are
  // isomorphic as weighted multigraphs (vertex labels are ignored). Computed
  // by iterated neighborhood-color refinement followed by an exhaustive
  // minimum over the orderings that respect the refined color classes.
  std::string canonical_signature() const;

 private:
  std::vector<std::string> labels_;
  std::vector<Edge> edges_;
};

bool isomorphic(const WeightedGraph& a, const WeightedGraph& b);

}  // namespace schottky

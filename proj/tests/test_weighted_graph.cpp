#include <vector>

#include "doctest.h"
#include "schottky/errors.hpp"
#include "schottky/weighted_graph.hpp"

using namespace schottky;

namespace {

ValueElement w(long x) { return ValueElement::make({x}); }

WeightedGraph theta(const std::string& a, const std::string& b, long w1, long w2,
                    long w3) {
  WeightedGraph g;
  g.add_vertex(a);
  g.add_vertex(b);
  g.add_edge(a, b, w(w1));
  g.add_edge(a, b, w(w2));
  g.add_edge(a, b, w(w3));
  return g;
}

}  // namespace

TEST_CASE("multigraph structure, degrees, and genus") {
  WeightedGraph g = theta("x", "y", 1, 2, 3);
  CHECK(g.vertex_count() == 2);
  CHECK(g.edge_count() == 3);
  CHECK(g.degree(0) == 3);
  CHECK(g.degree(1) == 3);
  CHECK(g.min_degree() == 3);
  CHECK(g.connected());
  CHECK(g.genus() == 2);

  WeightedGraph dumbbell;
  dumbbell.add_vertex("l");
  dumbbell.add_vertex("r");
  dumbbell.add_edge("l", "l", w(2));
  dumbbell.add_edge("l", "r", w(1));
  dumbbell.add_edge("r", "r", w(2));
  CHECK(dumbbell.degree(0) == 3);  // loop counts twice
  CHECK(dumbbell.degree(1) == 3);
  CHECK(dumbbell.genus() == 2);

  WeightedGraph forest;
  forest.add_vertex("a");
  forest.add_vertex("b");
  forest.add_vertex("c");
  forest.add_vertex("d");
  forest.add_edge("a", "b", w(1));
  forest.add_edge("c", "d", w(1));
  CHECK(forest.components() == 2);
  CHECK_FALSE(forest.connected());
  CHECK(forest.genus() == 0);
}

TEST_CASE("isomorphism ignores labels and edge order but not weights") {
  WeightedGraph g1 = theta("x", "y", 1, 2, 3);
  WeightedGraph g2 = theta("p", "q", 3, 1, 2);
  CHECK(isomorphic(g1, g2));
  CHECK(g1.canonical_signature() == g2.canonical_signature());
  WeightedGraph g3 = theta("x", "y", 1, 2, 4);
  CHECK_FALSE(isomorphic(g1, g3));

  // Two parallel edges are not two loops.
  WeightedGraph parallel;
  parallel.add_vertex("u");
  parallel.add_vertex("v");
  parallel.add_edge("u", "v", w(1));
  parallel.add_edge("u", "v", w(1));
  WeightedGraph loops;
  loops.add_vertex("u");
  loops.add_vertex("v");
  loops.add_edge("u", "u", w(1));
  loops.add_edge("v", "v", w(1));
  CHECK_FALSE(isomorphic(parallel, loops));
}

TEST_CASE("fully symmetric graphs canonicalize") {
  auto k4 = [](std::vector<std::string> names) {
    WeightedGraph g;
    for (const auto& n : names) g.add_vertex(n);
    for (size_t i = 0; i < 4; ++i)
      for (size_t j = i + 1; j < 4; ++j) g.add_edge(i, j, ValueElement::make({1}));
    return g;
  };
  WeightedGraph a = k4({"1", "2", "3", "4"});
  WeightedGraph b = k4({"d", "c", "b", "a"});
  CHECK(a.min_degree() == 3);
  CHECK(a.genus() == 3);
  CHECK(isomorphic(a, b));
}

TEST_CASE("weighted paths distinguish weight patterns up to reflection") {
  auto path = [&](long w1, long w2) {
    WeightedGraph g;
    g.add_vertex("a");
    g.add_vertex("b");
    g.add_vertex("c");
    g.add_edge("a", "b", w(w1));
    g.add_edge("b", "c", w(w2));
    return g;
  };
  CHECK(isomorphic(path(1, 2), path(2, 1)));
  CHECK_FALSE(isomorphic(path(1, 2), path(1, 1)));
}

TEST_CASE("rank-two weights participate in the signature") {
  auto loop = [](std::vector<long> coords) {
    WeightedGraph g;
    g.add_vertex("v");
    g.add_edge("v", "v", ValueElement::make(std::move(coords)));
    return g;
  };
  CHECK(isomorphic(loop({1, -2}), loop({1, -2})));
  CHECK_FALSE(isomorphic(loop({1, -2}), loop({1, 2})));
}

TEST_CASE("graph input validation") {
  WeightedGraph g;
  g.add_vertex("a");
  CHECK_THROWS_AS(g.add_vertex("a"), Error);
  CHECK_THROWS_AS(g.add_vertex(""), Error);
  CHECK_THROWS_AS(g.add_edge("a", "zzz", w(1)), Error);
  CHECK_THROWS_AS(g.add_edge(0, 7, w(1)), Error);
  CHECK_THROWS_AS(g.degree(3), Error);
  CHECK(g.index_of("a") == 0);
  CHECK_THROWS_WITH_AS(g.index_of("b"), doctest::Contains("UnknownVertex"), Error);
  std::string dot = g.to_dot();
  CHECK(dot.find("label=\"a\"") != std::string::npos);
}

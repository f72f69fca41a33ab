#pragma once

#include <optional>
#include <string>
#include <vector>

#include "schottky/ball.hpp"

namespace schottky {

/** Deterministic total order on projective points: finite first, infinity last. */
bool point_less(const ProjPoint& a, const ProjPoint& b);

/** Deterministic total order on balls: by radius, then by center. */
bool ball_less(const Ball& a, const Ball& b);

/**
 * Finite set of pairwise distinct projective points in canonical order
 * (finite points sorted, infinity last).
 */
class PointSet {
 public:
  /** Builds the set, silently dropping duplicates. */
  static PointSet of(FieldPtr field, std::vector<ProjPoint> pts);

  const FieldPtr& field() const { return field_; }
  const std::vector<ProjPoint>& points() const { return pts_; }
  size_t size() const { return pts_.size(); }
  bool contains(const ProjPoint& p) const;

  /** The set extended by p; throws DuplicatePoint when p is already present. */
  PointSet with(ProjPoint p) const;

  bool operator==(const PointSet& o) const;

 private:
  PointSet(FieldPtr field, std::vector<ProjPoint> pts);
  FieldPtr field_;
  std::vector<ProjPoint> pts_;
};

/**
 * The finite tree spanned by a point set: vertices are the balls assigned to
 * the triples of the set, edges join vertices whose segment contains no third
 * vertex, weighted by the additive path length. Vertices are kept in
 * canonical order, edges as sorted index pairs.
 */
class SimplicialTree {
 public:
  struct Edge {
    size_t u, v;  // indexes into vertices(), u < v
    ValueElement weight;
  };

  const PointSet& points() const { return pts_; }
  const std::vector<Ball>& vertices() const { return verts_; }
  const std::vector<Edge>& edges() const { return edges_; }

  /** Index of v in vertices(); throws UnknownVertex when absent. */
  size_t index_of(const Ball& v) const;

  /** Edges incident to v; throws UnknownVertex when absent. */
  std::vector<Edge> star(const Ball& v) const;

  /** Same vertices and weighted edges (the sample sets may differ). */
  bool same_tree(const SimplicialTree& o) const;

  bool connected() const;

  /** Deterministic DOT rendering with ball labels and weight labels. */
  std::string to_dot() const;

 private:
  friend SimplicialTree build_tree(const PointSet& L);
  friend SimplicialTree insert_point(const SimplicialTree& T, const ProjPoint& p);
  SimplicialTree(PointSet pts, std::vector<Ball> verts, std::vector<Edge> edges)
      : pts_(std::move(pts)), verts_(std::move(verts)), edges_(std::move(edges)) {}
  PointSet pts_;
  std::vector<Ball> verts_;
  std::vector<Edge> edges_;
};

/** The tree of a point set with at least three points; throws TooFewPoints. */
SimplicialTree build_tree(const PointSet& L);

/**
 * The tree of T's point set extended by p, computed incrementally: the only
 * possible new vertex is the ball around p touching its nearest sample points
 * (the minimal enclosing ball of the finite points when p is infinity).
 * Throws DuplicatePoint when p is already in the set.
 */
SimplicialTree insert_point(const SimplicialTree& T, const ProjPoint& p);

/**
 * All balls on the segment [b1, b2] whose radius is attained as a valuation
 * distance from the segment's anchors to a point of L, ordered from b1 to b2.
 * Between two tree vertices these are exactly the tree vertices on the path.
 */
std::vector<Ball> segment_vertices(const Ball& b1, const Ball& b2,
                                   const std::vector<ProjPoint>& L);

/** Finite prefix of a ray: strictly nested balls, read inward or outward. */
struct RayPrefix {
  std::vector<Ball> balls;  // balls[i] strictly contains balls[i+1]
  bool outward = false;     // true: the ray runs toward infinity
};

/**
 * The point of L the ray converges to: infinity for outward rays, the unique
 * point of L inside the deepest ball otherwise; nullopt when the prefix does
 * not yet isolate a single point. Throws NotNested on invalid prefixes.
 */
std::optional<ProjPoint> evaluate_ray(const RayPrefix& r, const PointSet& L);

}  // namespace schottky

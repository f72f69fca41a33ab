#include "schottky/finite_tree.hpp"

#include <algorithm>
#include <sstream>

#include "schottky/errors.hpp"

namespace schottky {

bool point_less(const ProjPoint& a, const ProjPoint& b) {
  if (a.is_infinity() || b.is_infinity()) return !a.is_infinity() && b.is_infinity();
  return compare_elements(a.value(), b.value()) < 0;
}

bool ball_less(const Ball& a, const Ball& b) {
  auto c = a.radius() <=> b.radius();
  if (c != std::strong_ordering::equal) return c == std::strong_ordering::less;
  return compare_elements(a.center(), b.center()) < 0;
}

PointSet::PointSet(FieldPtr field, std::vector<ProjPoint> pts)
    : field_(std::move(field)), pts_(std::move(pts)) {}

PointSet PointSet::of(FieldPtr field, std::vector<ProjPoint> pts) {
  for (const ProjPoint& p : pts)
    if (!p.field()->same(*field))
      throw Error(ErrorKind::InvalidArgument, "point from a different field instance");
  std::sort(pts.begin(), pts.end(), point_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return PointSet(std::move(field), std::move(pts));
}

bool PointSet::contains(const ProjPoint& p) const {
  return std::any_of(pts_.begin(), pts_.end(),
                     [&](const ProjPoint& q) { return q == p; });
}

PointSet PointSet::with(ProjPoint p) const {
  if (contains(p))
    throw Error(ErrorKind::DuplicatePoint, "point already in the set: " + p.to_string());
  std::vector<ProjPoint> pts = pts_;
  pts.push_back(std::move(p));
  return PointSet::of(field_, std::move(pts));
}

bool PointSet::operator==(const PointSet& o) const {
  return field_->same(*o.field_) && pts_ == o.pts_;
}

namespace {

struct ValTable {
  std::vector<FieldElement> fin;  // the finite points
  bool has_inf = false;
  std::vector<std::vector<ValueElement>> v;  // pairwise valuations, i != j
};

ValTable val_table(const PointSet& L) {
  ValTable t;
  for (const ProjPoint& p : L.points()) {
    if (p.is_infinity())
      t.has_inf = true;
    else
      t.fin.push_back(p.value());
  }
  size_t n = t.fin.size();
  t.v.assign(n, std::vector<ValueElement>(n, ValueElement::zero(L.field()->rank())));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      ValueElement val = (t.fin[i] - t.fin[j]).valuation();
      t.v[j][i] = val;
      t.v[i][j] = std::move(val);
    }
  return t;
}

// Vertices are the balls of the triples: the pair (i, j) realizes the ball
// B(p_i, v(p_i - p_j)) as soon as some third point is at least as far from
// both (infinity always is).
std::vector<Ball> tree_vertices(const PointSet& L) {
  ValTable t = val_table(L);
  size_t n = t.fin.size();
  std::vector<Ball> out;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      bool realized = t.has_inf;
      for (size_t k = 0; !realized && k < n; ++k) {
        if (k == i || k == j) continue;
        realized = (t.v[i][k] <=> t.v[i][j]) != std::strong_ordering::greater &&
                   (t.v[j][k] <=> t.v[i][j]) != std::strong_ordering::greater;
      }
      if (realized) out.push_back(Ball(t.fin[i], t.v[i][j]));
    }
  std::sort(out.begin(), out.end(), ball_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Edges join vertices with no third vertex on their segment; checked on a
// cached length table so the cubic pass costs no field arithmetic.
std::vector<SimplicialTree::Edge> tree_edges(const std::vector<Ball>& verts) {
  size_t m = verts.size();
  std::vector<SimplicialTree::Edge> edges;
  if (m < 2) return edges;
  std::vector<std::vector<ValueElement>> len(
      m, std::vector<ValueElement>(m, ValueElement::zero(verts[0].field()->rank())));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j) {
      ValueElement l = length(verts[i], verts[j]);
      len[j][i] = l;
      len[i][j] = std::move(l);
    }
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j) {
      bool direct = true;
      for (size_t k = 0; direct && k < m; ++k) {
        if (k == i || k == j) continue;
        direct = !(len[i][k] + len[k][j] == len[i][j]);
      }
      if (direct) edges.push_back({i, j, len[i][j]});
    }
  return edges;
}

}  // namespace

SimplicialTree build_tree(const PointSet& L) {
  if (L.size() < 3)
    throw Error(ErrorKind::TooFewPoints, "a tree needs at least three points");
  std::vector<Ball> verts = tree_vertices(L);
  std::vector<SimplicialTree::Edge> edges = tree_edges(verts);
  return SimplicialTree(L, std::move(verts), std::move(edges));
}

// One insertion extends the vertex set by at most two balls. Every old pair
// ball other than the minimal ball enclosing the old finite points has a
// sample outside it, so its realization never depends on the new point; the
// only candidates are the ball where the new point meets the spanned tree and
// that enclosing ball, which gains an outward direction when the new point
// leaves both of its occupied directions.
SimplicialTree insert_point(const SimplicialTree& T, const ProjPoint& p) {
  PointSet L2 = T.points().with(p);
  std::vector<FieldElement> fin;
  bool has_inf = false;
  for (const ProjPoint& q : T.points().points()) {
    if (q.is_infinity())
      has_inf = true;
    else
      fin.push_back(q.value());
  }

  std::vector<Ball> verts = T.vertices();
  if (p.is_infinity()) {
    // Every pair ball gains the outward direction, so the only ball that can
    // have been missing is the minimal one enclosing the finite points.
    ValueElement r = (fin[0] - fin[1]).valuation();
    for (size_t i = 2; i < fin.size(); ++i) r = min_add(r, (fin[0] - fin[i]).valuation());
    verts.push_back(Ball(fin[0], r));
  } else {
    const FieldElement& x = p.value();
    std::vector<ValueElement> vals;
    vals.reserve(fin.size());
    for (const FieldElement& q : fin) vals.push_back((x - q).valuation());
    ValueElement rstar = vals[0];  // attachment radius: distance to the nearest sample
    ValueElement vmin = vals[0];
    for (size_t i = 1; i < vals.size(); ++i) {
      rstar = max_add(rstar, vals[i]);
      vmin = min_add(vmin, vals[i]);
    }
    // B(x, rstar) is a vertex unless the old samples all share one direction
    // there, leaving it with only two directions and nothing outside.
    bool attach_realized = has_inf || vmin < rstar;
    if (!has_inf) {
      ValueElement m0 = (fin[0] - fin[1]).valuation();
      size_t jmin = 1;
      for (size_t i = 2; i < fin.size(); ++i) {
        ValueElement v0i = (fin[0] - fin[i]).valuation();
        if (v0i < m0) {
          m0 = v0i;
          jmin = i;
        }
      }
      // Some old pair splits at or above rstar: a third direction at B(x, rstar).
      if (!attach_realized) attach_realized = !(rstar < m0);
      // The old enclosing ball B(fin[0], m0) becomes a vertex once the new
      // point sits outside both directions occupied by the old samples.
      if (!(m0 < vals[0]) && !(m0 < vals[jmin])) verts.push_back(Ball(fin[0], m0));
    }
    if (attach_realized) verts.push_back(Ball(x, rstar));
  }
  std::sort(verts.begin(), verts.end(), ball_less);
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  std::vector<SimplicialTree::Edge> edges = tree_edges(verts);
  return SimplicialTree(std::move(L2), std::move(verts), std::move(edges));
}

size_t SimplicialTree::index_of(const Ball& v) const {
  for (size_t i = 0; i < verts_.size(); ++i)
    if (verts_[i] == v) return i;
  throw Error(ErrorKind::UnknownVertex, "not a tree vertex: " + v.to_string());
}

std::vector<SimplicialTree::Edge> SimplicialTree::star(const Ball& v) const {
  size_t i = index_of(v);
  std::vector<Edge> out;
  for (const Edge& e : edges_)
    if (e.u == i || e.v == i) out.push_back(e);
  return out;
}

bool SimplicialTree::same_tree(const SimplicialTree& o) const {
  if (verts_.size() != o.verts_.size() || edges_.size() != o.edges_.size()) return false;
  for (size_t i = 0; i < verts_.size(); ++i)
    if (!(verts_[i] == o.verts_[i])) return false;
  for (size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].u != o.edges_[i].u || edges_[i].v != o.edges_[i].v ||
        edges_[i].weight != o.edges_[i].weight)
      return false;
  return true;
}

bool SimplicialTree::connected() const {
  if (verts_.empty()) return true;
  std::vector<char> seen(verts_.size(), 0);
  std::vector<size_t> stack = {0};
  seen[0] = 1;
  while (!stack.empty()) {
    size_t i = stack.back();
    stack.pop_back();
    for (const Edge& e : edges_) {
      size_t other = e.u == i ? e.v : e.v == i ? e.u : i;
      if (other != i && !seen[other]) {
        seen[other] = 1;
        stack.push_back(other);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

std::string SimplicialTree::to_dot() const {
  std::ostringstream os;
  os << "graph tree {\n";
  for (size_t i = 0; i < verts_.size(); ++i)
    os << "  n" << i << " [label=\"" << verts_[i].to_string() << "\"];\n";
  for (const Edge& e : edges_)
    os << "  n" << e.u << " -- n" << e.v << " [label=\"" << e.weight.to_string()
       << "\"];\n";
  os << "}\n";
  return os.str();
}

std::vector<Ball> segment_vertices(const Ball& b1, const Ball& b2,
                                   const std::vector<ProjPoint>& L) {
  Ball j = join(b1, b2);
  auto side_radii = [&](const Ball& b) {
    std::vector<ValueElement> radii;
    for (const ProjPoint& q : L) {
      if (q.is_infinity()) continue;
      ValueElement r = (b.center() - q.value()).valuation();
      if ((r <=> j.radius()) != std::strong_ordering::less &&
          (r <=> b.radius()) != std::strong_ordering::greater)
        radii.push_back(std::move(r));
    }
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    return radii;
  };
  std::vector<Ball> out;
  std::vector<ValueElement> r1 = side_radii(b1);
  for (auto it = r1.rbegin(); it != r1.rend(); ++it) out.push_back(Ball(b1.center(), *it));
  for (const ValueElement& r : side_radii(b2)) {
    Ball cand(b2.center(), r);
    if (std::find(out.begin(), out.end(), cand) == out.end()) out.push_back(cand);
  }
  return out;
}

std::optional<ProjPoint> evaluate_ray(const RayPrefix& r, const PointSet& L) {
  if (r.balls.empty()) throw Error(ErrorKind::NotNested, "empty ray prefix");
  for (size_t i = 0; i + 1 < r.balls.size(); ++i) {
    if (!r.balls[i].contains(r.balls[i + 1]) || r.balls[i] == r.balls[i + 1])
      throw Error(ErrorKind::NotNested, "ray balls must be strictly nested");
  }
  if (r.outward) return ProjPoint::infinity(L.field());
  const Ball& deepest = r.balls.back();
  std::optional<ProjPoint> found;
  for (const ProjPoint& q : L.points()) {
    if (!deepest.contains(q)) continue;
    if (found) return std::nullopt;  // two sample points left: unresolved
    found = q;
  }
  return found;  // nullopt also when the sample misses the ball entirely
}

}  // namespace schottky

#include "schottky/schottky_group.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "schottky/errors.hpp"

namespace schottky {

namespace {

int letter_index(const SchottkyData& S, int letter) {
  int i = letter > 0 ? letter : -letter;
  if (letter == 0 || i > S.rank())
    throw Error(ErrorKind::InvalidArgument,
                "letter " + std::to_string(letter) + " outside rank " +
                    std::to_string(S.rank()));
  return i;
}

ValueElement default_precision(const FieldPtr& field) {
  std::vector<long> coords(static_cast<size_t>(field->rank()), 0);
  coords[0] = 40;
  return ValueElement::make(std::move(coords));
}

}  // namespace

Moebius SchottkyData::element(int letter) const {
  int i = letter_index(*this, letter);
  const Moebius& m = generators[static_cast<size_t>(i) - 1];
  return letter > 0 ? m : m.inverse();
}

Moebius SchottkyData::evaluate(const Word& w) const {
  Moebius m = Moebius::identity(field());
  for (int l : w.letters()) m = m * element(l);
  return m;
}

const Ball& SchottkyData::pairing_ball(int letter) const {
  int i = letter_index(*this, letter);
  size_t idx = letter > 0 ? static_cast<size_t>(rank() + i) - 1 : static_cast<size_t>(i) - 1;
  return balls[idx];
}

const Ball& SchottkyData::pole_ball(int letter) const {
  int i = letter_index(*this, letter);
  size_t idx = letter > 0 ? static_cast<size_t>(i) - 1 : static_cast<size_t>(rank() + i) - 1;
  return balls[idx];
}

SchottkyData make_schottky(std::vector<Moebius> generators, std::vector<Ball> balls) {
  if (generators.empty())
    throw Error(ErrorKind::InvalidArgument, "need at least one generator");
  if (balls.size() != 2 * generators.size())
    throw Error(ErrorKind::InvalidArgument,
                "need exactly two pairing balls per generator, got " +
                    std::to_string(balls.size()) + " balls for " +
                    std::to_string(generators.size()) + " generators");
  const FieldPtr& f = generators.front().field();
  for (const Moebius& m : generators)
    if (!f->same(*m.field()))
      throw Error(ErrorKind::InvalidArgument, "generators live over different fields");
  for (const Ball& b : balls)
    if (!f->same(*b.field()))
      throw Error(ErrorKind::InvalidArgument, "pairing balls live over a different field");
  return SchottkyData{std::move(generators), std::move(balls)};
}

PingPongReport verify_ping_pong(const SchottkyData& S) {
  PingPongReport rep;
  const int g = S.rank();
  const int n = 2 * g;
  bool all_disjoint = true;
  std::optional<ValueElement> sep;

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const Ball& bi = S.balls[static_cast<size_t>(i)];
      const Ball& bj = S.balls[static_cast<size_t>(j)];
      // Balls are nested or disjoint, so they meet iff one holds the other's center.
      if (bi.contains(bj.center()) || bj.contains(bi.center())) {
        all_disjoint = false;
        rep.violations.push_back({"overlap", i + 1, j + 1,
                                  bi.to_string() + " meets " + bj.to_string()});
        continue;
      }
      ValueElement l = length(bi, bj);
      if (!l.is_top_nilpotent())
        rep.violations.push_back(
            {"short-distance", i + 1, j + 1,
             "separation " + l.to_string() + " of " + bi.to_string() + " and " +
                 bj.to_string() + " is not topologically nilpotent"});
      if (!sep || l < *sep) sep = l;
    }
  }
  if (all_disjoint) rep.separation = sep;

  for (int i = 1; i <= g; ++i) {
    for (int sgn : {+1, -1}) {
      int letter = sgn * i;
      Moebius m = S.element(letter);
      const Ball& dom = S.pole_ball(letter);
      int idx = letter > 0 ? i : g + i;
      if (m.c().is_zero()) {
        rep.violations.push_back({"pole-outside", idx, 0,
                                  m.to_string() + " has its pole at infinity, outside " +
                                      dom.to_string()});
      } else {
        FieldElement pole = -(m.d() / m.c());
        if (!dom.contains(pole))
          rep.violations.push_back({"pole-outside", idx, 0,
                                    "pole " + pole.to_string() + " of " + m.to_string() +
                                        " lies outside " + dom.to_string()});
      }
    }
    Ball img = act_on_tree(S.generators[static_cast<size_t>(i) - 1],
                           S.balls[static_cast<size_t>(i) - 1]);
    const Ball& want = S.balls[static_cast<size_t>(g + i) - 1];
    if (!(img == want))
      rep.violations.push_back({"image-mismatch", i, g + i,
                                "generator " + std::to_string(i) + " sends its ball to " +
                                    img.to_string() + ", not " + want.to_string()});
  }

  rep.ok = rep.violations.empty();
  return rep;
}

Ball ball_of_word(const SchottkyData& S, const Word& w) {
  if (w.empty()) throw Error(ErrorKind::EmptyWord, "the empty word has no ball");
  const std::vector<int>& ls = w.letters();
  Moebius prefix = Moebius::identity(S.field());
  for (size_t i = 0; i + 1 < ls.size(); ++i) prefix = prefix * S.element(ls[i]);
  return act_on_tree(prefix, S.pairing_ball(ls.back()));
}

bool in_fundamental_domain(const SchottkyData& S, const ProjPoint& z) {
  for (int i = 1; i <= S.rank(); ++i) {
    for (int sgn : {+1, -1}) {
      int letter = sgn * i;
      if (!S.pairing_ball(letter).contains(S.element(letter).apply(z))) return false;
    }
  }
  return true;
}

std::vector<ProjPoint> limit_set_sample(const SchottkyData& S, int n,
                                        const ValueElement& precision) {
  std::vector<ProjPoint> out;
  for (const Word& w : reduced_words_up_to(S.rank(), n)) {
    if (w.empty() || is_proper_power(w)) continue;
    Moebius m = S.evaluate(w);
    if (m.is_identity_projective()) continue;
    Classification c = classify(m, precision);
    if (c.cls != MoebiusClass::Hyperbolic || !c.attracting) continue;
    const ProjPoint& p = *c.attracting;
    bool seen = false;
    for (const ProjPoint& q : out)
      if (q == p) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(p);
  }
  return out;
}

bool word_is_hyperbolic(const SchottkyData& S, const Word& w,
                        const ValueElement& precision) {
  if (w.empty()) throw Error(ErrorKind::EmptyWord, "cannot classify the empty word");
  Moebius m = S.evaluate(w);
  if (m.is_identity_projective()) return false;
  return classify(m, precision).cls == MoebiusClass::Hyperbolic;
}

Ball default_base_vertex(const SchottkyData& S, const ValueElement& precision) {
  if (S.rank() == 1) return join(S.balls[0], S.balls[1]);
  Classification c1 = classify(S.generators[0], precision);
  Classification c2 = classify(S.generators[1], precision);
  if (c1.cls != MoebiusClass::Hyperbolic || c2.cls != MoebiusClass::Hyperbolic ||
      !c1.attracting || !c1.repelling || !c2.attracting)
    throw Error(ErrorKind::InvalidArgument,
                "base vertex needs hyperbolic generators with fixed points");
  return t_map(*c1.attracting, *c1.repelling, *c2.attracting);
}

namespace {

struct BallLess {
  bool operator()(const Ball& x, const Ball& y) const {
    auto c = x.radius() <=> y.radius();
    if (c != 0) return c < 0;
    return compare_elements(x.center(), y.center()) < 0;
  }
};

/**
 * Compressed containment trie over a join-closed set of balls. Node ids are
 * stable; parent links realize the Hasse diagram of containment (parent =
 * smallest stored ball strictly containing the node). Insertion splices in
 * the join of the new ball with the one branch it meets, which keeps the set
 * join-closed, so the Hasse diagram is exactly the subtree the stored
 * vertices span in the tree of balls.
 */
class HullTrie {
 public:
  const Ball& ball(int id) const { return nodes_[static_cast<size_t>(id)].v; }
  int parent(int id) const { return nodes_[static_cast<size_t>(id)].parent; }
  int size() const { return static_cast<int>(nodes_.size()); }

  int find(const Ball& b) const {
    auto it = index_.find(b);
    return it == index_.end() ? -1 : it->second;
  }

  int insert(const Ball& b) {
    auto it = index_.find(b);
    if (it != index_.end()) return it->second;
    if (root_ < 0) return root_ = raw_add(b, -1);
    if (!nodes_[static_cast<size_t>(root_)].v.contains(b)) {
      Ball j = join(nodes_[static_cast<size_t>(root_)].v, b);
      int jid = raw_add(j, -1);
      relink(root_, jid);
      root_ = jid;
      if (ball(jid) == b) return jid;
    }
    int c = root_;  // invariant: ball(c) strictly contains b
    for (;;) {
      // At most one child can share a join with b below ball(c): two such
      // children would force their own join (= ball(c)) inside that ball.
      int hit = -1;
      std::optional<Ball> hj;
      for (int k : nodes_[static_cast<size_t>(c)].kids) {
        Ball j = join(ball(k), b);
        if (!(j == ball(c))) {
          hit = k;
          hj = std::move(j);
          break;
        }
      }
      if (hit < 0) return raw_add(b, c);
      if (*hj == ball(hit)) {  // that child still contains b: descend
        c = hit;
        continue;
      }
      int jid = raw_add(*hj, c);  // the join splits the edge from c to the child
      relink(hit, jid);
      if (*hj == b) return jid;
      return raw_add(b, jid);
    }
  }

 private:
  struct Node {
    Ball v;
    int parent;
    std::vector<int> kids;
  };

  int raw_add(const Ball& b, int par) {
    int id = static_cast<int>(nodes_.size());
    nodes_.push_back({b, par, {}});
    if (par >= 0) nodes_[static_cast<size_t>(par)].kids.push_back(id);
    index_.emplace(b, id);
    return id;
  }

  void relink(int child, int par) {
    int old = nodes_[static_cast<size_t>(child)].parent;
    if (old >= 0) {
      auto& ks = nodes_[static_cast<size_t>(old)].kids;
      ks.erase(std::find(ks.begin(), ks.end(), child));
    }
    nodes_[static_cast<size_t>(child)].parent = par;
    if (par >= 0) nodes_[static_cast<size_t>(par)].kids.push_back(child);
  }

  std::vector<Node> nodes_;
  std::map<Ball, int, BallLess> index_;
  int root_ = -1;
};

/**
 * Union-find over trie nodes carrying free-group potentials: each node x
 * stores a word with x = word . parent(x) as tree vertices, so each class
 * records how every member is reached from the representative. Inconsistent
 * potentials on a merge certify a vertex stabilizer, which a free action
 * forbids.
 */
class OrbitUF {
 public:
  explicit OrbitUF(int n)
      : parent_(static_cast<size_t>(n)), delta_(static_cast<size_t>(n)) {
    for (int i = 0; i < n; ++i) parent_[static_cast<size_t>(i)] = i;
  }

  int find(int x) {
    size_t sx = static_cast<size_t>(x);
    if (parent_[sx] == x) return x;
    int p = parent_[sx];
    int r = find(p);
    if (p != r) {
      delta_[sx] = delta_[sx] * delta_[static_cast<size_t>(p)];
      parent_[sx] = r;
    }
    return r;
  }

  // Representative r and the word with x = word . r.
  std::pair<int, Word> locate(int x) {
    int r = find(x);
    return {r, x == r ? Word() : delta_[static_cast<size_t>(x)]};
  }

  // Record y = rel . x.
  void relate(int x, int y, const Word& rel) {
    auto [rx, wx] = locate(x);
    auto [ry, wy] = locate(y);
    if (rx == ry) {
      if (!(wy == rel * wx))
        throw Error(ErrorKind::InvalidArgument,
                    "tree action is not free on the sampled orbit");
      return;
    }
    parent_[static_cast<size_t>(ry)] = rx;
    delta_[static_cast<size_t>(ry)] = wy.inverse() * rel * wx;
  }

 private:
  std::vector<int> parent_;
  std::vector<Word> delta_;
};

struct MultiEdge {
  int u, v;  // root ids; reading u -> v lifts the edge as rep(u) -> word . rep(v)
  ValueElement weight;
  Word word;
};

struct CoreGraph {
  WeightedGraph graph;
  std::vector<Word> covering;
};

std::string letters_key(const Word& w) {
  std::string s;
  for (int l : w.letters()) {
    s += std::to_string(l);
    s += ',';
  }
  return s;
}

CoreGraph build_core(const SchottkyData& S, const Ball& base, int depth) {
  const int g = S.rank();
  std::vector<int> letters;
  std::vector<Moebius> elems;
  for (int i = 1; i <= g; ++i) {
    letters.push_back(+i);
    elems.push_back(S.element(+i));
    letters.push_back(-i);
    elems.push_back(S.element(-i));
  }
  const int L = static_cast<int>(letters.size());

  // Orbit of the base vertex under reduced words up to the depth, evaluated
  // by extending each word's prefix product with one multiplication.
  HullTrie trie;
  {
    struct Prefix {
      int last;  // final letter, 0 for the identity
      Moebius m;
    };
    std::vector<Prefix> level = {{0, Moebius::identity(S.field())}};
    trie.insert(act_on_tree(level.front().m, base));
    for (int len = 1; len <= depth; ++len) {
      std::vector<Prefix> next;
      next.reserve(level.size() * static_cast<size_t>(L));
      for (const Prefix& pre : level) {
        for (int li = 0; li < L; ++li) {
          int l = letters[static_cast<size_t>(li)];
          if (pre.last == -l) continue;
          Moebius m = pre.m * elems[static_cast<size_t>(li)];
          trie.insert(act_on_tree(m, base));
          next.push_back({l, std::move(m)});
        }
      }
      level = std::move(next);
    }
  }

  // Lazily cached images of stored vertices under the 2g letters (a node's
  // ball never changes, so entries stay valid as the trie grows).
  std::vector<std::vector<std::optional<Ball>>> img;
  auto image = [&](int x, int li) -> const Ball& {
    if (static_cast<int>(img.size()) < trie.size())
      img.resize(static_cast<size_t>(trie.size()));
    auto& row = img[static_cast<size_t>(x)];
    if (row.empty()) row.resize(static_cast<size_t>(L));
    auto& slot = row[static_cast<size_t>(li)];
    if (!slot) slot = act_on_tree(elems[static_cast<size_t>(li)], trie.ball(x));
    return *slot;
  };

  // Subdivision closure: when a letter carries both endpoints of an edge to
  // stored vertices, every stored vertex strictly inside the image segment
  // pulls back to a subdividing vertex of the edge. Afterwards edges map to
  // edges wherever both endpoint images are present.
  constexpr int kClosureRounds = 64;
  for (int round = 0;; ++round) {
    if (round >= kClosureRounds)
      throw Error(ErrorKind::NotStabilized,
                  "orbit subtree did not close up under subdivision");
    bool changed = false;
    std::vector<std::pair<int, int>> edges;
    for (int x = 0; x < trie.size(); ++x)
      if (trie.parent(x) >= 0) edges.emplace_back(x, trie.parent(x));
    for (const auto& [c, p] : edges) {
      for (int li = 0; li < L; ++li) {
        int ic = trie.find(image(c, li));
        if (ic < 0) continue;
        int ip = trie.find(image(p, li));
        if (ip < 0) continue;
        Ball j = join(trie.ball(ic), trie.ball(ip));
        int jid = trie.find(j);
        if (jid < 0) {  // defensive: join-closure keeps this present
          jid = trie.insert(j);
          changed = true;
        }
        // Stored vertices strictly inside the segment [image(c), image(p)]:
        // the proper ancestors of each endpoint below the join, plus the join
        // itself when it is not an endpoint (images of incomparable vertices
        // can be incomparable even though c and p are nested).
        std::vector<int> mids;
        for (int side : {ic, ip})
          for (int a = trie.parent(side);
               a >= 0 && trie.ball(a).radius() > j.radius(); a = trie.parent(a))
            mids.push_back(a);
        if (jid != ic && jid != ip) mids.push_back(jid);
        const Moebius& back = elems[static_cast<size_t>(li ^ 1)];
        for (int u : mids) {
          Ball pre = act_on_tree(back, trie.ball(u));
          if (trie.find(pre) < 0) {
            trie.insert(pre);
            changed = true;
          }
        }
      }
    }
    if (!changed) break;
  }

  // Glue vertices along single letters; transitivity composes the words.
  OrbitUF uf(trie.size());
  for (int x = 0; x < trie.size(); ++x) {
    for (int li = 0; li < L; ++li) {
      int y = trie.find(image(x, li));
      if (y >= 0) uf.relate(x, y, Word::letter(letters[static_cast<size_t>(li)]));
    }
  }

  // Edge classes: an edge from c to p, read from the representatives, runs
  // rep(root(c)) -> delta . rep(root(p)) with delta = word(c)^-1 word(p).
  // Equivalent edges agree on (roots, delta) up to reversal.
  std::map<std::string, MultiEdge> classes;
  for (int x = 0; x < trie.size(); ++x) {
    int p = trie.parent(x);
    if (p < 0) continue;
    auto [rc, wc] = uf.locate(x);
    auto [rp, wp] = uf.locate(p);
    Word delta = wc.inverse() * wp;
    ValueElement wt = length(trie.ball(x), trie.ball(p));
    std::string fwd = std::to_string(rc) + ">" + std::to_string(rp) + ":" + letters_key(delta);
    std::string rev = std::to_string(rp) + ">" + std::to_string(rc) + ":" +
                      letters_key(delta.inverse());
    if (fwd <= rev)
      classes.emplace(fwd, MultiEdge{rc, rp, wt, delta});
    else
      classes.emplace(rev, MultiEdge{rp, rc, wt, delta.inverse()});
  }

  std::set<int> alive;
  for (int x = 0; x < trie.size(); ++x) alive.insert(uf.find(x));
  std::vector<MultiEdge> medges;
  for (const auto& [key, e] : classes) medges.push_back(e);

  auto degree_of = [&](int v) {
    size_t d = 0;
    for (const MultiEdge& e : medges) {
      if (e.u == v) ++d;
      if (e.v == v) ++d;
    }
    return d;
  };

  // Prune truncation debris: vertices of degree <= 1 come from the cut-off
  // boundary of the sampled orbit, never from a cycle of the quotient.
  for (bool pruned = true; pruned;) {
    pruned = false;
    for (int v : alive) {
      if (degree_of(v) > 1) continue;
      alive.erase(v);
      std::erase_if(medges, [v](const MultiEdge& e) { return e.u == v || e.v == v; });
      pruned = true;
      break;
    }
  }

  // Contract interior degree-two vertices: two distinct non-loop edges fuse
  // into one edge, adding weights and composing deck words along the path. A
  // vertex whose whole neighborhood is one loop stays (a rank-one core).
  for (bool contracted = true; contracted;) {
    contracted = false;
    for (int v : alive) {
      std::vector<size_t> inc;
      bool has_loop = false;
      for (size_t i = 0; i < medges.size(); ++i) {
        if (medges[i].u == v && medges[i].v == v)
          has_loop = true;
        else if (medges[i].u == v || medges[i].v == v)
          inc.push_back(i);
      }
      if (has_loop || inc.size() != 2) continue;
      MultiEdge e1 = medges[inc[0]];
      MultiEdge e2 = medges[inc[1]];
      int a;
      Word w_av;  // read a -> v
      if (e1.v == v) {
        a = e1.u;
        w_av = e1.word;
      } else {
        a = e1.v;
        w_av = e1.word.inverse();
      }
      int b;
      Word w_vb;  // read v -> b
      if (e2.u == v) {
        b = e2.v;
        w_vb = e2.word;
      } else {
        b = e2.u;
        w_vb = e2.word.inverse();
      }
      MultiEdge fused{a, b, e1.weight + e2.weight, w_av * w_vb};
      medges.erase(medges.begin() + static_cast<std::ptrdiff_t>(inc[1]));
      medges.erase(medges.begin() + static_cast<std::ptrdiff_t>(inc[0]));
      medges.push_back(fused);
      alive.erase(v);
      contracted = true;
      break;
    }
  }

  CoreGraph out;
  std::map<int, size_t> vidx;
  size_t next = 0;
  for (int r : alive) {
    out.graph.add_vertex("v" + std::to_string(next));
    vidx[r] = next++;
  }

  struct FinalEdge {
    size_t u, v;
    ValueElement weight;
    Word word;
  };
  std::vector<FinalEdge> fes;
  for (const MultiEdge& e : medges) {
    size_t u = vidx.at(e.u), v = vidx.at(e.v);
    Word w = e.word;
    if (u > v) {
      std::swap(u, v);
      w = w.inverse();
    }
    if (u == v && shortlex_less(w.inverse(), w)) w = w.inverse();
    fes.push_back({u, v, e.weight, w});
  }
  std::sort(fes.begin(), fes.end(), [](const FinalEdge& a, const FinalEdge& b) {
    if (a.u != b.u) return a.u < b.u;
    if (a.v != b.v) return a.v < b.v;
    auto c = a.weight <=> b.weight;
    if (c != 0) return c < 0;
    return shortlex_less(a.word, b.word);
  });
  for (FinalEdge& e : fes) {
    out.graph.add_edge(e.u, e.v, e.weight);
    out.covering.push_back(std::move(e.word));
  }
  return out;
}

}  // namespace

QuotientResult quotient_graph(const SchottkyData& S, const QuotientOptions& opt) {
  if (opt.depth < 1)
    throw Error(ErrorKind::InvalidArgument, "orbit depth must be at least 1");
  if (opt.max_depth < opt.depth)
    throw Error(ErrorKind::InvalidArgument, "maximum depth below starting depth");
  ValueElement prec = opt.precision ? *opt.precision : default_precision(S.field());
  Ball base = opt.base ? *opt.base : default_base_vertex(S, prec);

  std::optional<std::string> prev_sig;
  for (int d = opt.depth; d <= opt.max_depth; d += 2) {
    CoreGraph core = build_core(S, base, d);
    std::string sig = core.graph.canonical_signature();
    if (prev_sig && *prev_sig == sig) {
      QuotientResult res;
      res.graph = std::move(core.graph);
      res.covering = std::move(core.covering);
      res.genus = res.graph.genus();
      res.depth = d;
      return res;
    }
    prev_sig = std::move(sig);
  }
  throw Error(ErrorKind::NotStabilized,
              "quotient core did not repeat between consecutive sampled depths");
}

}  // namespace schottky

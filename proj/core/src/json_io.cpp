#include "schottky/json_io.hpp"

#include <utility>
#include <variant>

#include "schottky/errors.hpp"

namespace schottky {

namespace {

const Json& require_key(const Json& j, const char* key, const char* what) {
  if (!j.is_object())
    throw ParseError(std::string(what) + " must be a JSON object");
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError(std::string(what) + " is missing the \"" + key + "\" key");
  return *it;
}

std::string require_string(const Json& j, const char* key, const char* what) {
  const Json& v = require_key(j, key, what);
  if (!v.is_string())
    throw ParseError(std::string(what) + " key \"" + key + "\" must be a string");
  return v.get<std::string>();
}

long require_int(const Json& j, const char* key, const char* what) {
  const Json& v = require_key(j, key, what);
  if (!v.is_number_integer() && !v.is_number_unsigned())
    throw ParseError(std::string(what) + " key \"" + key + "\" must be an integer");
  return v.get<long>();
}

Rational rational_from_string(const std::string& s) {
  try {
    mpq_class q(s);
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  } catch (const std::invalid_argument&) {
    throw ParseError("bad rational '" + s + "'");
  }
}

Json rational_to_json(const Rational& c) {
  if (c.get_den() == 1 && c.get_num().fits_slong_p())
    return Json(c.get_num().get_si());
  return Json(c.get_str());
}

// A component of a quadratic-extension element, as an element of the base.
FieldElement base_component(const FieldPtr& base, const BasePayload& bp) {
  return std::visit([&](const auto& v) { return FieldElement(base, Payload(v)); }, bp);
}

}  // namespace

Json field_to_json(const FieldPtr& f) {
  Json j;
  switch (f->kind()) {
    case FieldKind::RationalPadic:
      j["kind"] = "rational-padic";
      j["p"] = f->p();
      break;
    case FieldKind::Rank2Composite:
      j["kind"] = "rank2-composite";
      j["p"] = f->p();
      break;
    case FieldKind::FuncfieldTadic:
      j["kind"] = "funcfield-tadic";
      j["base"] = f->p() == 0 ? std::string("Q") : "F_" + std::to_string(f->p());
      break;
    case FieldKind::QuadExt:
      j["kind"] = "quad-ext";
      j["base"] = field_to_json(f->base());
      j["ramifier"] = f->ramifier().to_string();
      break;
  }
  return j;
}

FieldPtr field_from_json(const Json& j) {
  std::string kind = require_string(j, "kind", "field spec");
  try {
    if (kind == "rational-padic") return Field::rational_padic(require_int(j, "p", "field spec"));
    if (kind == "rank2-composite") return Field::rank2_composite(require_int(j, "p", "field spec"));
    if (kind == "funcfield-tadic") {
      std::string base = require_string(j, "base", "field spec");
      if (base == "Q") return Field::funcfield_tadic_q();
      if (base.rfind("F_", 0) == 0 && base.size() > 2) {
        std::size_t used = 0;
        long p = std::stol(base.substr(2), &used);
        if (used == base.size() - 2) return Field::funcfield_tadic_fp(p);
      }
      throw ParseError("funcfield base must be \"Q\" or \"F_p\", got '" + base + "'");
    }
    if (kind == "quad-ext") {
      FieldPtr base = field_from_json(require_key(j, "base", "field spec"));
      FieldElement ram = base->parse(require_string(j, "ramifier", "field spec"));
      return Field::quad_ext(base, ram);
    }
  } catch (const Error& e) {
    throw ParseError(e.what());  // a structurally bad spec, e.g. composite p
  } catch (const std::invalid_argument&) {
    throw ParseError("bad field spec");
  } catch (const std::out_of_range&) {
    throw ParseError("bad field spec");
  }
  throw ParseError("unknown field kind '" + kind + "'");
}

Json value_to_json(const ValueElement& v) {
  if (v.is_bottom()) return Json("bottom");
  Json j = Json::array();
  for (const Rational& c : v.coords()) j.push_back(rational_to_json(c));
  return j;
}

ValueElement value_from_json(const Json& j, int rank) {
  if (j.is_string()) {
    if (j.get<std::string>() == "bottom") {
      if (rank < 0) throw ParseError("\"bottom\" is not a valid valuation here");
      return ValueElement::bottom(rank);
    }
    throw ParseError("valuation must be an array of coordinates or \"bottom\"");
  }
  if (!j.is_array())
    throw ParseError("valuation must be an array of coordinates or \"bottom\"");
  if (j.empty()) throw ParseError("valuation needs at least one coordinate");
  if (rank >= 0 && static_cast<int>(j.size()) != rank)
    throw ParseError("valuation has " + std::to_string(j.size()) + " coordinates, expected " +
                     std::to_string(rank));
  std::vector<Rational> coords;
  coords.reserve(j.size());
  for (const Json& c : j) {
    if (c.is_number_integer() || c.is_number_unsigned())
      coords.push_back(Rational(c.get<long>()));
    else if (c.is_string())
      coords.push_back(rational_from_string(c.get<std::string>()));
    else
      throw ParseError("valuation coordinates must be integers or fraction strings");
  }
  return ValueElement(std::move(coords));
}

Json element_to_json(const FieldElement& x) {
  if (const QuadValue* qv = std::get_if<QuadValue>(&x.payload())) {
    const FieldPtr& base = x.field()->base();
    return Json::array({base_component(base, qv->re).to_string(),
                        base_component(base, qv->im).to_string()});
  }
  return Json(x.to_string());
}

FieldElement element_from_json(const Json& j, const FieldPtr& f) {
  if (j.is_string()) return f->parse(j.get<std::string>());
  if (j.is_array()) {
    if (f->kind() != FieldKind::QuadExt)
      throw ParseError("pair elements require a quadratic extension field");
    if (j.size() != 2 || !j[0].is_string() || !j[1].is_string())
      throw ParseError("a quadratic-extension element is a [\"re\",\"im\"] string pair");
    FieldElement re = f->base()->parse(j[0].get<std::string>());
    FieldElement im = f->base()->parse(j[1].get<std::string>());
    return f->coerce(re) + f->sqrt_ramifier() * f->coerce(im);
  }
  throw ParseError("element must be a string (or a string pair over a quadratic extension)");
}

Json point_to_json(const ProjPoint& p) {
  if (p.is_infinity()) return Json("inf");
  return element_to_json(p.value());
}

ProjPoint point_from_json(const Json& j, const FieldPtr& f) {
  if (j.is_string() && j.get<std::string>() == "inf") return ProjPoint::infinity(f);
  return ProjPoint::finite(element_from_json(j, f));
}

Json ball_to_json(const Ball& b) {
  Json j;
  j["center"] = element_to_json(b.center());
  j["radius"] = value_to_json(b.radius());
  return j;
}

Ball ball_from_json(const Json& j, const FieldPtr& f) {
  FieldElement center = element_from_json(require_key(j, "center", "ball"), f);
  ValueElement radius = value_from_json(require_key(j, "radius", "ball"), f->rank());
  return Ball(std::move(center), std::move(radius));
}

Json region_to_json(const Region& r) {
  Json j;
  j["center"] = element_to_json(r.center());
  j["radius"] = value_to_json(r.radius());
  if (!r.is_ball()) j["complement"] = true;
  return j;
}

Region region_from_json(const Json& j, const FieldPtr& f) {
  FieldElement center = element_from_json(require_key(j, "center", "region"), f);
  ValueElement radius = value_from_json(require_key(j, "radius", "region"), f->rank());
  bool complement = false;
  if (auto it = j.find("complement"); it != j.end()) {
    if (!it->is_boolean()) throw ParseError("region key \"complement\" must be a boolean");
    complement = it->get<bool>();
  }
  if (complement) return Region::complement(std::move(center), std::move(radius));
  return Region::of_ball(Ball(std::move(center), std::move(radius)));
}

Json moebius_to_json(const Moebius& m) {
  Json j;
  j["a"] = element_to_json(m.a());
  j["b"] = element_to_json(m.b());
  j["c"] = element_to_json(m.c());
  j["d"] = element_to_json(m.d());
  return j;
}

Moebius moebius_from_json(const Json& j, const FieldPtr& f) {
  return Moebius(element_from_json(require_key(j, "a", "matrix"), f),
                 element_from_json(require_key(j, "b", "matrix"), f),
                 element_from_json(require_key(j, "c", "matrix"), f),
                 element_from_json(require_key(j, "d", "matrix"), f));
}

Json classification_to_json(const Classification& c) {
  Json j;
  switch (c.cls) {
    case MoebiusClass::Hyperbolic: {
      j["kind"] = "hyperbolic";
      j["multiplier_valuation"] = value_to_json(c.multiplier);
      Json fixed = Json::array();
      if (c.attracting) fixed.push_back(point_to_json(*c.attracting));
      if (c.repelling) fixed.push_back(point_to_json(*c.repelling));
      j["fixed"] = std::move(fixed);
      if (!c.fixed_exact) {
        j["fixed_exact"] = false;
        j["achieved_valuation"] = value_to_json(c.fixed_achieved);
      }
      break;
    }
    case MoebiusClass::FiniteOrderCandidate:
      j["kind"] = "finite-order-candidate";
      if (c.order) j["order"] = *c.order;
      break;
    case MoebiusClass::NonHyperbolicInfinite:
      j["kind"] = "non-hyperbolic-infinite";
      break;
  }
  return j;
}

Json points_to_json(const std::vector<ProjPoint>& pts) {
  Json j = Json::array();
  for (const ProjPoint& p : pts) j.push_back(point_to_json(p));
  return j;
}

Json point_set_to_json(const PointSet& ps) {
  Json j;
  j["points"] = points_to_json(ps.points());
  return j;
}

PointSet point_set_from_json(const Json& j, const FieldPtr& f) {
  const Json& pts = require_key(j, "points", "point set");
  if (!pts.is_array()) throw ParseError("point set key \"points\" must be an array");
  std::vector<ProjPoint> out;
  out.reserve(pts.size());
  for (const Json& p : pts) out.push_back(point_from_json(p, f));
  return PointSet::of(f, std::move(out));
}

Json tree_to_json(const SimplicialTree& t) {
  Json j;
  Json vertices = Json::array();
  for (const Ball& b : t.vertices()) vertices.push_back(ball_to_json(b));
  j["vertices"] = std::move(vertices);
  Json edges = Json::array();
  for (const auto& e : t.edges())
    edges.push_back(Json::array({e.u, e.v, value_to_json(e.weight)}));
  j["edges"] = std::move(edges);
  return j;
}

Json graph_to_json(const WeightedGraph& g) {
  Json j;
  j["vertices"] = g.labels();
  Json edges = Json::array();
  for (const auto& e : g.edges())
    edges.push_back(Json::array(
        {g.labels()[e.u], g.labels()[e.v], value_to_json(e.weight)}));
  j["edges"] = std::move(edges);
  return j;
}

WeightedGraph graph_from_json(const Json& j) {
  const Json& vertices = require_key(j, "vertices", "graph");
  const Json& edges = require_key(j, "edges", "graph");
  if (!vertices.is_array()) throw ParseError("graph key \"vertices\" must be an array");
  if (!edges.is_array()) throw ParseError("graph key \"edges\" must be an array");
  WeightedGraph g;
  try {
    for (const Json& v : vertices) {
      if (!v.is_string()) throw ParseError("graph vertices must be label strings");
      g.add_vertex(v.get<std::string>());
    }
    for (const Json& e : edges) {
      if (!e.is_array() || e.size() != 3 || !e[0].is_string() || !e[1].is_string())
        throw ParseError("graph edges must be [\"u\",\"v\",weight] triples");
      g.add_edge(e[0].get<std::string>(), e[1].get<std::string>(),
                 value_from_json(e[2], -1));
    }
  } catch (const Error& err) {
    throw ParseError(err.what());  // duplicate label / unknown endpoint
  }
  return g;
}

Json schottky_to_json(const SchottkyData& s) {
  Json j;
  j["field"] = field_to_json(s.field());
  Json gens = Json::array();
  for (const Moebius& m : s.generators) gens.push_back(moebius_to_json(m));
  j["generators"] = std::move(gens);
  Json balls = Json::array();
  for (const Ball& b : s.balls) balls.push_back(ball_to_json(b));
  j["balls"] = std::move(balls);
  return j;
}

SchottkyData schottky_from_json(const Json& j) {
  FieldPtr f = field_from_json(require_key(j, "field", "schottky datum"));
  const Json& gens = require_key(j, "generators", "schottky datum");
  const Json& balls = require_key(j, "balls", "schottky datum");
  if (!gens.is_array()) throw ParseError("schottky key \"generators\" must be an array");
  if (!balls.is_array()) throw ParseError("schottky key \"balls\" must be an array");
  std::vector<Moebius> generators;
  for (const Json& m : gens) generators.push_back(moebius_from_json(m, f));
  std::vector<Ball> pairing;
  for (const Json& b : balls) pairing.push_back(ball_from_json(b, f));
  try {
    return make_schottky(std::move(generators), std::move(pairing));
  } catch (const Error& e) {
    throw ParseError(e.what());  // shape violations are schema violations
  }
}

Json ping_pong_to_json(const PingPongReport& r) {
  Json j;
  j["ok"] = r.ok;
  Json violations = Json::array();
  for (const auto& v : r.violations) {
    Json vj;
    vj["rule"] = v.rule;
    vj["i"] = v.i;
    vj["j"] = v.j;
    vj["detail"] = v.detail;
    violations.push_back(std::move(vj));
  }
  j["violations"] = std::move(violations);
  if (r.separation) j["separation"] = value_to_json(*r.separation);
  return j;
}

Json quotient_to_json(const QuotientResult& q) {
  Json j;
  j["vertices"] = q.graph.labels();
  Json edges = Json::array();
  for (std::size_t i = 0; i < q.graph.edges().size(); ++i) {
    const auto& e = q.graph.edges()[i];
    edges.push_back(Json::array({q.graph.labels()[e.u], q.graph.labels()[e.v],
                                 value_to_json(e.weight), q.covering[i].to_string()}));
  }
  j["edges"] = std::move(edges);
  j["genus"] = q.genus;
  j["depth"] = q.depth;
  return j;
}

Json synthesis_to_json(const SynthesisResult& r) {
  Json j;
  j["schottky"] = schottky_to_json(r.data);
  Json vb = Json::array();
  for (const Ball& b : r.vertex_balls) vb.push_back(ball_to_json(b));
  j["vertex_balls"] = std::move(vb);
  j["tree_edges"] = r.tree_edges;
  j["cotree_edges"] = r.cotree_edges;
  j["extended"] = r.extended;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json round_trip_to_json(const RoundTripReport& r) {
  Json j;
  j["isomorphic"] = r.isomorphic;
  j["genus"] = r.genus;
  j["recovered"] = graph_to_json(r.recovered);
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

std::string dump_deterministic(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace schottky

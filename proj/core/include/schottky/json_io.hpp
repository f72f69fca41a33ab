#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "schottky/ball.hpp"
#include "schottky/field.hpp"
#include "schottky/finite_tree.hpp"
#include "schottky/graph_synthesis.hpp"
#include "schottky/moebius.hpp"
#include "schottky/schottky_group.hpp"
#include "schottky/weighted_graph.hpp"

namespace schottky {

using Json = nlohmann::json;

// JSON schemas for every domain type crossing the CLI boundary. Serialization
// is deterministic (objects keep sorted keys, numbers are exact integers or
// canonical fraction strings); parsing throws ParseError on malformed input.

// {"kind":"rational-padic","p":3} | {"kind":"rank2-composite","p":3}
// | {"kind":"funcfield-tadic","base":"Q"|"F_p"}
// | {"kind":"quad-ext","base":<field>,"ramifier":"3"}
Json field_to_json(const FieldPtr& f);
FieldPtr field_from_json(const Json& j);

// Additive vectors: [2], [2,-1], ["3/2"], or "bottom" (needs a rank context).
// rank < 0 accepts any arity.
Json value_to_json(const ValueElement& v);
ValueElement value_from_json(const Json& j, int rank);

// Exact strings ("-3/4", "2+t^1+t^3", "(1+t^1)/(t^2)"); elements of a
// quadratic extension as a ["re","im"] pair of base-field strings.
Json element_to_json(const FieldElement& x);
FieldElement element_from_json(const Json& j, const FieldPtr& f);

// "inf" or an element document.
Json point_to_json(const ProjPoint& p);
ProjPoint point_from_json(const Json& j, const FieldPtr& f);

// {"center":"<element>","radius":[2]}; a Region adds "complement":true.
Json ball_to_json(const Ball& b);
Ball ball_from_json(const Json& j, const FieldPtr& f);
Json region_to_json(const Region& r);
Region region_from_json(const Json& j, const FieldPtr& f);

// {"a":"3","b":"0","c":"2","d":"1"}
Json moebius_to_json(const Moebius& m);
Moebius moebius_from_json(const Json& j, const FieldPtr& f);

// {"kind":"hyperbolic","multiplier_valuation":[1],"fixed":["0","inf"]};
// approximate fixed points add "fixed_exact":false and the achieved
// valuation, finite-order candidates their "order" when found.
Json classification_to_json(const Classification& c);

Json points_to_json(const std::vector<ProjPoint>& pts);
// {"points":["0","1","9","inf"]}
Json point_set_to_json(const PointSet& ps);
PointSet point_set_from_json(const Json& j, const FieldPtr& f);

// {"vertices":[<ball>...],"edges":[[0,1,[2]]...]} with index endpoints.
Json tree_to_json(const SimplicialTree& t);

// {"vertices":["a","b"],"edges":[["a","b",[2]],["a","a",[2]]]}
Json graph_to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const Json& j);

// {"field":<field>,"generators":[<matrix>...],"balls":[<ball>...]}
Json schottky_to_json(const SchottkyData& s);
SchottkyData schottky_from_json(const Json& j);

// {"ok":false,"violations":[{"rule":"overlap","i":1,"j":4,"detail":...}],
//  "separation":[2] when the balls are pairwise disjoint}
Json ping_pong_to_json(const PingPongReport& r);

// {"vertices":[...],"edges":[[u,v,weight,word]...],"genus":2,"depth":4}
Json quotient_to_json(const QuotientResult& q);

// {"schottky":...,"vertex_balls":[...],"tree_edges":[...],
//  "cotree_edges":[...],"extended":false} plus "note" when present
Json synthesis_to_json(const SynthesisResult& r);

// {"isomorphic":true,"genus":2,"recovered":<graph>} plus "detail" on mismatch
Json round_trip_to_json(const RoundTripReport& r);

// Two-space indented dump with a trailing newline; byte-stable for equal
// documents (keys are stored sorted, all numbers are integers).
std::string dump_deterministic(const Json& j);

}  // namespace schottky

// Command-line surface for the exact Schottky / Lambda-tree toolkit.
//
// One request per invocation: JSON documents in (file path, inline JSON, or
// stdin), deterministic JSON or DOT out. Exit codes: 0 on success, 1 when the
// computation produced a structured negative verdict or a domain error on
// well-formed input, 2 on malformed input (bad JSON, schema violations, I/O).

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "schottky/json_io.hpp"

using namespace schottky;

namespace {

struct Options {
  int depth = 4;
  int max_depth = 10;
  std::string precision_text;         // --precision flag, a valuation JSON
  std::optional<Json> precision_doc;  // "precision" from a run request
  std::string format = "json";
};

Json parse_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

// A document argument is "-" for stdin, inline JSON when it starts like a
// JSON value, and a file path otherwise.
Json read_document(const std::string& arg) {
  if (arg == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return parse_text(ss.str(), "stdin");
  }
  std::size_t i = arg.find_first_not_of(" \t\r\n");
  if (i != std::string::npos && (arg[i] == '{' || arg[i] == '[' || arg[i] == '"'))
    return parse_text(arg, "inline JSON");
  std::ifstream in(arg);
  if (!in) throw ParseError("cannot open input file '" + arg + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), "file '" + arg + "'");
}

FieldPtr require_field(const std::optional<Json>& spec) {
  if (!spec)
    throw ParseError("this command needs a field (--field or the request's \"field\" key)");
  return field_from_json(*spec);
}

ValueElement precision_for(const FieldPtr& f, const Options& opts) {
  Json doc;
  if (opts.precision_doc)
    doc = *opts.precision_doc;
  else if (!opts.precision_text.empty())
    doc = parse_text(opts.precision_text, "--precision");
  else {
    std::vector<Rational> coords(f->rank(), Rational(0));
    coords[0] = 40;
    return ValueElement(std::move(coords));
  }
  return value_from_json(doc, f->rank());
}

// True for DOT, false for JSON; anything else is unsupported.
bool want_dot(const std::string& format) {
  if (format == "json") return false;
  if (format == "dot") return true;
  throw Error(ErrorKind::UnsupportedFormat, "unknown output format '" + format + "'");
}

void require_json_format(const std::string& cmd, const std::string& format) {
  if (want_dot(format))
    throw Error(ErrorKind::UnsupportedFormat, "command '" + cmd + "' renders JSON only");
}

void emit(const Json& doc) { std::cout << dump_deterministic(doc); }

// Matrix entries may be JSON integers in requests (e.g. [[3,0],[0,1]]).
FieldElement element_from_request(const Json& j, const FieldPtr& f) {
  if (j.is_number_integer() || j.is_number_unsigned()) return f->from_long(j.get<long>());
  return element_from_json(j, f);
}

Moebius matrix_from_request(const Json& j, const FieldPtr& f) {
  if (j.is_array()) {
    if (j.size() != 2 || !j[0].is_array() || j[0].size() != 2 || !j[1].is_array() ||
        j[1].size() != 2)
      throw ParseError("a matrix is [[a,b],[c,d]] or {\"a\":...,\"b\":...,\"c\":...,\"d\":...}");
    return Moebius(element_from_request(j[0][0], f), element_from_request(j[0][1], f),
                   element_from_request(j[1][0], f), element_from_request(j[1][1], f));
  }
  if (j.is_object()) {
    for (const char* k : {"a", "b", "c", "d"})
      if (!j.contains(k)) throw ParseError(std::string("matrix is missing the \"") + k + "\" key");
    return Moebius(element_from_request(j["a"], f), element_from_request(j["b"], f),
                   element_from_request(j["c"], f), element_from_request(j["d"], f));
  }
  throw ParseError("a matrix is [[a,b],[c,d]] or {\"a\":...,\"b\":...,\"c\":...,\"d\":...}");
}

QuotientOptions quotient_options(const FieldPtr& f, const Options& opts) {
  QuotientOptions q;
  q.depth = opts.depth;
  q.max_depth = opts.max_depth;
  if (opts.precision_doc || !opts.precision_text.empty()) q.precision = precision_for(f, opts);
  return q;
}

int dispatch(const std::string& cmd, const Json& payload, const std::optional<Json>& field,
             const Options& opts);

// A run request bundles {command, field?, payload, options?} in one document.
int dispatch_request(const Json& request) {
  if (!request.is_object()) throw ParseError("a request must be a JSON object");
  for (const auto& [key, value] : request.items()) {
    (void)value;
    if (key != "command" && key != "field" && key != "payload" && key != "options")
      throw ParseError("unknown request key \"" + key + "\"");
  }
  if (!request.contains("command") || !request["command"].is_string())
    throw ParseError("a request needs a \"command\" string");
  std::string cmd = request["command"].get<std::string>();
  if (cmd == "run") throw ParseError("requests cannot nest: unknown command \"run\"");
  if (!request.contains("payload")) throw ParseError("a request needs a \"payload\" document");

  Options opts;
  if (request.contains("options")) {
    const Json& o = request["options"];
    if (!o.is_object()) throw ParseError("request \"options\" must be an object");
    for (const auto& [key, value] : o.items()) {
      if (key == "depth") {
        if (!value.is_number_integer()) throw ParseError("option \"depth\" must be an integer");
        opts.depth = value.get<int>();
      } else if (key == "max-depth") {
        if (!value.is_number_integer())
          throw ParseError("option \"max-depth\" must be an integer");
        opts.max_depth = value.get<int>();
      } else if (key == "precision") {
        opts.precision_doc = value;
      } else if (key == "output-format") {
        if (!value.is_string()) throw ParseError("option \"output-format\" must be a string");
        opts.format = value.get<std::string>();
      } else {
        throw ParseError("unknown option \"" + key + "\"");
      }
    }
  }
  std::optional<Json> field;
  if (request.contains("field")) field = request["field"];
  return dispatch(cmd, request["payload"], field, opts);
}

int dispatch(const std::string& cmd, const Json& payload, const std::optional<Json>& field,
             const Options& opts) {
  if (cmd == "classify") {
    require_json_format(cmd, opts.format);
    FieldPtr f = require_field(field);
    Classification c = classify(matrix_from_request(payload, f), precision_for(f, opts));
    emit(classification_to_json(c));
    return 0;
  }
  if (cmd == "tree") {
    bool dot = want_dot(opts.format);
    FieldPtr f = require_field(field);
    SimplicialTree t = build_tree(point_set_from_json(payload, f));
    if (dot)
      std::cout << t.to_dot();
    else
      emit(tree_to_json(t));
    return 0;
  }
  if (cmd == "schottky-verify") {
    require_json_format(cmd, opts.format);
    PingPongReport rep = verify_ping_pong(schottky_from_json(payload));
    emit(ping_pong_to_json(rep));
    return rep.ok ? 0 : 1;
  }
  if (cmd == "limit-set") {
    require_json_format(cmd, opts.format);
    SchottkyData s = schottky_from_json(payload);
    Json j;
    j["points"] = points_to_json(limit_set_sample(s, opts.depth, precision_for(s.field(), opts)));
    emit(j);
    return 0;
  }
  if (cmd == "quotient") {
    bool dot = want_dot(opts.format);
    SchottkyData s = schottky_from_json(payload);
    QuotientResult q = quotient_graph(s, quotient_options(s.field(), opts));
    if (dot)
      std::cout << q.graph.to_dot();
    else
      emit(quotient_to_json(q));
    return 0;
  }
  if (cmd == "synthesize") {
    require_json_format(cmd, opts.format);
    FieldPtr f = require_field(field);
    emit(synthesis_to_json(synthesize(graph_from_json(payload), f)));
    return 0;
  }
  if (cmd == "round-trip") {
    require_json_format(cmd, opts.format);
    FieldPtr f = require_field(field);
    RoundTripReport r = round_trip(graph_from_json(payload), f, quotient_options(f, opts));
    emit(round_trip_to_json(r));
    return r.isomorphic ? 0 : 1;
  }
  if (cmd == "run") return dispatch_request(payload);
  throw ParseError("unknown command \"" + cmd + "\"");
}

Json error_document(const std::string& kind, const std::string& message) {
  Json j;
  j["error"] = Json{{"kind", kind}, {"message", message}};
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact arithmetic for trees of balls over valued fields: Moebius\n"
               "classification, finite trees of point sets, Schottky verification,\n"
               "limit sets, quotient graphs, and graph-to-group synthesis."};
  app.require_subcommand(1);

  std::string input = "-";
  std::string field_arg;
  Options opts;
  long seed = 0;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"classify", "Classify a Moebius matrix (hyperbolic / finite order / neither)"},
      {"tree", "Build the finite tree spanned by a point set"},
      {"schottky-verify", "Check the ping-pong configuration of a Schottky datum"},
      {"limit-set", "Sample attracting fixed points of reduced words up to --depth"},
      {"quotient", "Stable quotient graph of the tree action with covering words"},
      {"synthesize", "Realize a weighted graph as the quotient of a Schottky datum"},
      {"round-trip", "Synthesize, take the quotient, and compare with the input graph"},
      {"run", "Execute a bundled request {command, field, payload, options}"},
  };
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("input", input,
                    "payload document: file path, inline JSON, or - for stdin");
    sub->add_option("--field", field_arg, "field spec: file path or inline JSON");
    sub->add_option("--depth", opts.depth, "word length for limit-set / first quotient depth")
        ->capture_default_str();
    sub->add_option("--max-depth", opts.max_depth, "quotient stabilization cap")
        ->capture_default_str();
    sub->add_option("--precision", opts.precision_text,
                    "approximation valuation as JSON, e.g. \"[40]\"");
    sub->add_option("--format", opts.format, "output format: json or dot")
        ->capture_default_str();
    sub->add_option("--seed", seed,
                    "seed for randomized commands (reserved; current commands are "
                    "deterministic)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << dump_deterministic(
        error_document("ParseError", std::string("command line: ") + e.what()));
    return 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    Json payload = read_document(input);
    std::optional<Json> field;
    if (!field_arg.empty()) field = read_document(field_arg);
    return dispatch(cmd, payload, field, opts);
  } catch (const ParseError& e) {
    std::cerr << dump_deterministic(error_document("ParseError", e.what()));
    return 2;
  } catch (const Error& e) {
    // Domain errors on well-formed input are reported as structured results.
    std::cout << dump_deterministic(error_document(error_kind_name(e.kind()), e.what()));
    return 1;
  }
}

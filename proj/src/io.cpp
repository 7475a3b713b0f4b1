#include "netres/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace netres {

namespace {

struct Token {
  std::string text;
  std::size_t column;
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size() || line[i] == '#') break;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

NodeId parse_label(const Token& t, std::size_t line) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc() || p != t.text.data() + t.text.size() || v > 0xffffffffULL)
    throw ParseError("Malformed", "expected a node label, got '" + t.text + "'", line, t.column);
  return static_cast<NodeId>(v);
}

void add_parsed_edge(ParsedGraph& pg, NodeId u, NodeId v, std::size_t line, std::size_t col) {
  if (u == v) throw ParseError("SelfLoop", "self-loop on node " + std::to_string(u), line, col);
  pg.graph.add_node(u);
  pg.graph.add_node(v);
  bool fresh = pg.graph.add_edge(u, v);
  if (pg.undirected) fresh = pg.graph.add_edge(v, u) || fresh;
  if (!fresh)
    pg.warnings.push_back({"DuplicateEdge", line, col,
                           "duplicate edge " + std::to_string(u) + " " + std::to_string(v)});
}

ParsedGraph parse_text(const std::string& bytes) {
  ParsedGraph pg;
  bool header = false;
  std::istringstream in(bytes);
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (!header) {
      if (toks.size() != 1 || (toks[0].text != "directed" && toks[0].text != "undirected"))
        throw ParseError("Malformed", "expected header 'directed' or 'undirected'", ln, toks[0].column);
      pg.undirected = toks[0].text == "undirected";
      header = true;
      continue;
    }
    if (toks[0].text == "node") {
      if (toks.size() != 2) throw ParseError("Malformed", "expected 'node <label>'", ln, toks[0].column);
      pg.graph.add_node(parse_label(toks[1], ln));
      continue;
    }
    if (toks.size() != 2) throw ParseError("Malformed", "expected '<u> <v>'", ln, toks[0].column);
    add_parsed_edge(pg, parse_label(toks[0], ln), parse_label(toks[1], ln), ln, toks[0].column);
  }
  if (!header) throw ParseError("Malformed", "missing header", ln == 0 ? 1 : ln, 1);
  return pg;
}

std::pair<std::size_t, std::size_t> line_col(const std::string& s, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < s.size(); ++i) {
    if (s[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

NodeId json_label(const Json& j) {
  if (!j.is_number_integer() || j.get<long long>() < 0 || j.get<long long>() > 0xffffffffLL)
    throw Error("Malformed", "node labels must be non-negative integers, got " + j.dump());
  return j.get<NodeId>();
}

Edge json_edge(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error("Malformed", "edges are [u, v] pairs, got " + j.dump());
  return {json_label(j[0]), json_label(j[1])};
}

std::set<NodeId> json_nodes(const Json& j) {
  if (!j.is_array()) throw Error("Malformed", "expected a list of node labels");
  std::set<NodeId> out;
  for (const auto& x : j) out.insert(json_label(x));
  return out;
}

std::set<Edge> json_edges(const Json& j) {
  if (!j.is_array()) throw Error("Malformed", "expected a list of edges");
  std::set<Edge> out;
  for (const auto& x : j) out.insert(json_edge(x));
  return out;
}

Json edge_json(const Edge& e) { return Json::array({e.first, e.second}); }

Json edges_json(const std::set<Edge>& es) {
  Json a = Json::array();
  for (const auto& e : es) a.push_back(edge_json(e));
  return a;
}

Json nodes_json(const std::set<NodeId>& ns) {
  Json a = Json::array();
  for (NodeId v : ns) a.push_back(v);
  return a;
}

const Json& field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw Error("Malformed", std::string("missing field '") + key + "'");
  return *it;
}

NodeId label_field(const Json& j, const char* key) { return json_label(field(j, key)); }

template <class T>
T get_or(const Json& j, const char* key, T dflt) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return dflt;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error("Malformed", std::string("field '") + key + "' has the wrong type");
  }
}

Json rational_json(const Rational& r) { return to_string(r); }

}  // namespace

Rational parse_rational(const std::string& s) {
  auto fail = [&]() -> Rational { throw Error("Malformed", "not a rational number: '" + s + "'"); };
  auto slash = s.find('/');
  auto to_ll = [&](const std::string& t) {
    long long v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || t.empty()) fail();
    return v;
  };
  if (slash != std::string::npos) {
    long long d = to_ll(s.substr(slash + 1));
    if (d == 0) fail();
    return Rational(to_ll(s.substr(0, slash)), d);
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return Rational(to_ll(s));
  std::string frac = s.substr(dot + 1);
  if (frac.empty() || frac.size() > 15) fail();
  std::string whole = s.substr(0, dot);
  bool neg = !whole.empty() && whole[0] == '-';
  if (neg) whole = whole.substr(1);
  long long scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  Rational r = Rational(whole.empty() ? 0 : to_ll(whole)) + Rational(to_ll(frac), scale);
  return neg ? -r : r;
}

ParsedGraph parse_graph(const std::string& bytes) {
  std::size_t i = 0;
  while (i < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[i]))) ++i;
  if (i < bytes.size() && bytes[i] == '{') {
    Json j;
    try {
      j = Json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
      auto [l, c] = line_col(bytes, e.byte == 0 ? 0 : e.byte - 1);
      throw ParseError("Malformed", "invalid JSON", l, c);
    }
    return graph_from_json(j);
  }
  return parse_text(bytes);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("FileNotFound", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ParsedGraph read_graph_file(const std::string& path) { return parse_graph(read_file(path)); }

std::string serialize_graph(const Graph& g, bool undirected) {
  if (undirected && !g.is_undirected()) throw Error("Malformed", "graph is not symmetric");
  std::string out = undirected ? "undirected\n" : "directed\n";
  std::set<NodeId> touched;
  for (const auto& [u, v] : g.edges()) {
    touched.insert(u);
    touched.insert(v);
  }
  for (NodeId v : g.nodes())
    if (!touched.count(v)) out += "node " + std::to_string(v) + "\n";
  for (const auto& [u, v] : g.edges())
    if (!undirected || u < v) out += std::to_string(u) + " " + std::to_string(v) + "\n";
  return out;
}

Json graph_to_json(const Graph& g, bool undirected) {
  if (undirected && !g.is_undirected()) throw Error("Malformed", "graph is not symmetric");
  Json edges = Json::array();
  for (const auto& e : g.edges())
    if (!undirected || e.first < e.second) edges.push_back(edge_json(e));
  return {{"directed", !undirected}, {"nodes", nodes_json(g.nodes())}, {"edges", edges}};
}

ParsedGraph graph_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("Malformed", "graph JSON must be an object", 1, 1);
  ParsedGraph pg;
  try {
    pg.undirected = !get_or<bool>(j, "directed", true);
    bool listed = j.contains("nodes");
    if (listed)
      for (NodeId v : json_nodes(j["nodes"])) pg.graph.add_node(v);
    const Json& edges = j.contains("edges") ? j["edges"] : Json::array();
    if (!edges.is_array()) throw Error("Malformed", "edges must be a list");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      Edge e = json_edge(edges[i]);
      if (e.first == e.second)
        throw ParseError("SelfLoop", "self-loop on node " + std::to_string(e.first) + " (edges[" +
                                         std::to_string(i) + "])", 1, 1);
      if (listed && (!pg.graph.has_node(e.first) || !pg.graph.has_node(e.second)))
        throw ParseError("DanglingEdge", "edge endpoint not in nodes (edges[" + std::to_string(i) + "])", 1, 1);
      add_parsed_edge(pg, e.first, e.second, 1, 1);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.code(), e.what(), 1, 1);
  }
  return pg;
}

Json to_json(const Intervention& k) {
  Json j = std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, iv::Identity>) return Json::object();
        else if constexpr (std::is_same_v<T, iv::NodeDel> || std::is_same_v<T, iv::NodeAdd>) return {{"v", x.v}};
        else if constexpr (std::is_same_v<T, iv::Isolate>) return {{"nodes", nodes_json(x.nodes)}};
        else if constexpr (std::is_same_v<T, iv::EdgeShift> || std::is_same_v<T, iv::UEdgeShift>)
          return {{"from", edge_json(x.from)}, {"to", edge_json(x.to)}};
        else if constexpr (std::is_same_v<T, iv::NodeSplit> || std::is_same_v<T, iv::USplit>)
          return {{"v", x.v}, {"fresh", x.fresh}, {"edges", edges_json(x.edges)}};
        else if constexpr (std::is_same_v<T, iv::NodeMerge>) return {{"v", x.v}, {"other", x.other}};
        else if constexpr (std::is_same_v<T, iv::NodeCopy>) return {{"v", x.v}, {"fresh", x.fresh}};
        else if constexpr (std::is_same_v<T, iv::Kelmans>) return {{"v", x.v}, {"u", x.u}};
        else return {{"v", x.v}, {"w", x.w}};
      },
      k);
  j["kind"] = kind_name(kind_of(k));
  j["text"] = to_text(k);
  return j;
}

Intervention intervention_from_json(const Json& j) {
  if (j.is_string()) return intervention_from_text(j.get<std::string>());
  if (!j.is_object()) throw Error("Malformed", "intervention must be an object or a text step");
  if (!j.contains("kind") && j.contains("text")) return intervention_from_text(field(j, "text").get<std::string>());
  const Json& kj = field(j, "kind");
  if (!kj.is_string()) throw Error("Malformed", "intervention kind must be a string");
  Kind kind = kind_from_name(kj.get<std::string>());
  Intervention k;
  switch (kind) {
    case Kind::Identity: k = iv::Identity{}; break;
    case Kind::EdgeDel: k = iv::EdgeDel{label_field(j, "v"), label_field(j, "w")}; break;
    case Kind::EdgeAdd: k = iv::EdgeAdd{label_field(j, "v"), label_field(j, "w")}; break;
    case Kind::NodeDel: k = iv::NodeDel{label_field(j, "v")}; break;
    case Kind::NodeAdd: k = iv::NodeAdd{label_field(j, "v")}; break;
    case Kind::Isolate: k = iv::Isolate{json_nodes(field(j, "nodes"))}; break;
    case Kind::EdgeShift: k = iv::EdgeShift{json_edge(field(j, "from")), json_edge(field(j, "to"))}; break;
    case Kind::NodeSplit:
      k = iv::NodeSplit{json_edges(field(j, "edges")), label_field(j, "v"), label_field(j, "fresh")};
      break;
    case Kind::NodeMerge: k = iv::NodeMerge{label_field(j, "v"), label_field(j, "other")}; break;
    case Kind::NodeCopy: k = iv::NodeCopy{label_field(j, "v"), label_field(j, "fresh")}; break;
    case Kind::UEdgeDel: k = iv::UEdgeDel{label_field(j, "v"), label_field(j, "w")}; break;
    case Kind::UEdgeAdd: k = iv::UEdgeAdd{label_field(j, "v"), label_field(j, "w")}; break;
    case Kind::UEdgeShift: k = iv::UEdgeShift{json_edge(field(j, "from")), json_edge(field(j, "to"))}; break;
    case Kind::USplit:
      k = iv::USplit{json_edges(field(j, "edges")), label_field(j, "v"), label_field(j, "fresh")};
      break;
    case Kind::Kelmans: k = iv::Kelmans{label_field(j, "v"), label_field(j, "u")}; break;
  }
  validate(k);
  return k;
}

Json to_json(const Strategy& s) {
  Json a = Json::array();
  for (const auto& k : s) a.push_back(to_json(k));
  return a;
}

Strategy strategy_from_json(const Json& j) {
  if (j.is_string()) return strategy_from_text(j.get<std::string>());
  if (!j.is_array()) throw Error("Malformed", "strategy must be a list of interventions");
  Strategy s;
  for (const auto& x : j) s.push_back(intervention_from_json(x));
  return s;
}

Json to_json(const InterventionSet& s) {
  Json kinds = Json::array();
  for (Kind k : s.kinds) kinds.push_back(kind_name(k));
  Json j = {{"kinds", kinds}, {"max_split_edges", s.max_split_edges}, {"max_isolate_nodes", s.max_isolate_nodes}};
  if (s.scope) j["scope"] = nodes_json(*s.scope);
  if (s.max_nodes) j["max_nodes"] = *s.max_nodes;
  return j;
}

InterventionSet iset_from_json(const Json& j) {
  if (j.is_string()) return iset_from_string(j.get<std::string>());
  if (!j.is_object()) throw Error("Malformed", "iset must be a string or an object");
  InterventionSet s;
  const Json& kinds = field(j, "kinds");
  if (kinds.is_string()) {
    s = iset_from_string(kinds.get<std::string>());
  } else {
    if (!kinds.is_array()) throw Error("Malformed", "kinds must be a list");
    for (const auto& k : kinds) {
      if (!k.is_string()) throw Error("Malformed", "kind names must be strings");
      s.kinds.insert(kind_from_name(k.get<std::string>()));
    }
  }
  s.max_split_edges = get_or<std::size_t>(j, "max_split_edges", s.max_split_edges);
  s.max_isolate_nodes = get_or<std::size_t>(j, "max_isolate_nodes", s.max_isolate_nodes);
  if (j.contains("scope")) s.scope = json_nodes(j["scope"]);
  if (j.contains("max_nodes")) s.max_nodes = get_or<std::size_t>(j, "max_nodes", 0);
  return s;
}

Json to_json(const Threshold& t) {
  Json j = {{"value", number_or_null(t.value)}};
  if (t.exact) j["exact"] = rational_json(*t.exact);
  return j;
}

Threshold threshold_from_json(const Json& j) {
  if (j.is_number()) return ThresholdSchedule::make_constant(j.get<double>()).constant;
  if (j.is_string()) return ThresholdSchedule::make_constant(parse_rational(j.get<std::string>())).constant;
  if (j.is_object()) {
    if (j.contains("exact")) return threshold_from_json(j["exact"]);
    if (j.contains("value")) return threshold_from_json(j["value"]);
  }
  throw Error("Malformed", "threshold must be a number, a fraction string or {value, exact}");
}

Json to_json(const ThresholdSchedule& s) {
  switch (s.form) {
    case ThresholdSchedule::Form::Constant: return {{"constant", to_json(s.constant)}};
    case ThresholdSchedule::Form::Table: {
      Json t = Json::object();
      for (const auto& [n, th] : s.table) t[std::to_string(n)] = to_json(th);
      return {{"table", t}, {"default", to_json(s.table_default)}};
    }
    case ThresholdSchedule::Form::Formula: {
      Json p = Json::object();
      for (const auto& [k, v] : s.params) p[k] = v;
      return {{"formula", s.formula}, {"params", p}};
    }
  }
  return nullptr;
}

ThresholdSchedule schedule_from_json(const Json& j) {
  if (j.is_number() || j.is_string()) {
    ThresholdSchedule s;
    s.constant = threshold_from_json(j);
    return s;
  }
  if (!j.is_object()) throw Error("Malformed", "threshold schedule must be a number, string or object");
  if (j.contains("constant")) return schedule_from_json(j["constant"]);
  if (j.contains("formula")) {
    std::map<std::string, double> params;
    if (j.contains("params")) {
      if (!j["params"].is_object()) throw Error("Malformed", "params must be an object");
      for (const auto& [k, v] : j["params"].items()) {
        if (!v.is_number()) throw Error("Malformed", "param '" + k + "' must be a number");
        params[k] = v.get<double>();
      }
    }
    return ThresholdSchedule::make_formula(field(j, "formula").get<std::string>(), params);
  }
  if (j.contains("table")) {
    ThresholdSchedule s;
    s.form = ThresholdSchedule::Form::Table;
    if (!j["table"].is_object()) throw Error("Malformed", "table must map sizes to thresholds");
    for (const auto& [k, v] : j["table"].items()) {
      std::size_t n = 0;
      auto [p, ec] = std::from_chars(k.data(), k.data() + k.size(), n);
      if (ec != std::errc() || p != k.data() + k.size()) throw Error("Malformed", "table key '" + k + "' is not a size");
      s.table[n] = threshold_from_json(v);
    }
    s.table_default = threshold_from_json(field(j, "default"));
    return s;
  }
  if (j.contains("value") || j.contains("exact")) return schedule_from_json(Json{{"constant", j}});
  throw Error("Malformed", "threshold schedule needs constant, formula or table");
}

Json to_json(const StressConfig& c) {
  Json shockj = std::visit(
      [](const auto& s) -> Json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, shock::UniformSingleNode>) return {{"kind", "uniform"}};
        else if constexpr (std::is_same_v<T, shock::FixedSet>) return {{"kind", "fixed"}, {"nodes", nodes_json(s.nodes)}};
        else return {{"kind", "bernoulli"}, {"p", s.p}};
      },
      c.shock);
  return {{"tau", c.params.tau},    {"gamma", c.params.gamma}, {"alpha", c.alpha}, {"lambda", c.lambda},
          {"samples", c.samples},   {"seed", c.seed},          {"shock", shockj}};
}

StressConfig stress_config_from_json(const Json& j) {
  if (!j.is_object()) throw Error("InvalidConfig", "stress config must be an object");
  StressConfig c;
  c.params.tau = get_or<double>(j, "tau", c.params.tau);
  c.params.gamma = get_or<double>(j, "gamma", c.params.gamma);
  c.alpha = get_or<double>(j, "alpha", c.alpha);
  c.lambda = get_or<double>(j, "lambda", c.lambda);
  c.samples = get_or<std::size_t>(j, "samples", c.samples);
  c.seed = get_or<std::uint64_t>(j, "seed", c.seed);
  if (j.contains("shock")) {
    const Json& s = j["shock"];
    std::string kind = s.is_string() ? s.get<std::string>() : get_or<std::string>(s, "kind", "");
    if (kind == "uniform")
      c.shock = shock::UniformSingleNode{};
    else if (kind == "fixed")
      c.shock = shock::FixedSet{json_nodes(field(s, "nodes"))};
    else if (kind == "bernoulli")
      c.shock = shock::PerNodeBernoulli{get_or<double>(s, "p", 0.1)};
    else
      throw Error("InvalidConfig", "shock kind must be uniform, fixed or bernoulli");
  }
  c.validate();
  return c;
}

Engine engine_from_string(const std::string& s) {
  if (s == "epn") return Engine::EPN;
  if (s == "gillespie") return Engine::Gillespie;
  throw Error("InvalidConfig", "engine must be epn or gillespie");
}

Json to_json(const QSpec& q) {
  Json j = {{"q", q_name(q.kind)}};
  if (q.kind == QKind::StressProbability) j["stress"] = to_json(q.stress);
  if (q.kind == QKind::NodeDegree) j["node"] = q.node;
  return j;
}

QSpec qspec_from_json(const Json& j) {
  QSpec q;
  if (j.is_string()) {
    q.kind = q_from_name(j.get<std::string>());
    return q;
  }
  if (!j.is_object()) throw Error("Malformed", "Q must be a name or an object");
  q.kind = q_from_name(field(j, "q").get<std::string>());
  if (j.contains("stress")) q.stress = stress_config_from_json(j["stress"]);
  if (j.contains("node")) q.node = label_field(j, "node");
  q.workers = get_or<unsigned>(j, "workers", 1);
  return q;
}

Json to_json(const AcceptanceSpec& a) {
  Json j = to_json(a.q);
  j["threshold"] = to_json(a.schedule);
  return j;
}

AcceptanceSpec acceptance_from_json(const Json& j) {
  if (j.is_string()) return acceptance_preset(j.get<std::string>());
  if (!j.is_object()) throw Error("Malformed", "acceptance must be a preset name or an object");
  AcceptanceSpec a;
  if (j.contains("preset")) {
    a = acceptance_preset(field(j, "preset").get<std::string>());
    if (j.contains("stress")) {
      a.q.stress = stress_config_from_json(j["stress"]);
      if (a.q.kind == QKind::StressProbability && !j.contains("threshold"))
        a.schedule = ThresholdSchedule::make_constant(a.q.stress.lambda);
    }
    if (j.contains("node")) a.q.node = label_field(j, "node");
  } else {
    a.q = qspec_from_json(j);
    if (!j.contains("threshold") && a.q.kind == QKind::StressProbability)
      a.schedule = ThresholdSchedule::make_constant(a.q.stress.lambda);
    else
      a.schedule = schedule_from_json(field(j, "threshold"));
  }
  if (j.contains("threshold") && j.contains("preset")) a.schedule = schedule_from_json(j["threshold"]);
  a.q.workers = get_or<unsigned>(j, "workers", a.q.workers);
  return a;
}

namespace {

Json map_json(const MonotoneMap& h) { return {{"kind", h.name()}, {"a", h.a}, {"cap", h.cap}}; }

MonotoneMap map_from_json(const Json& j) {
  MonotoneMap h;
  if (j.is_null()) return h;
  std::string kind = j.is_string() ? j.get<std::string>() : get_or<std::string>(j, "kind", "identity");
  if (kind == "identity")
    h.kind = MonotoneMap::Kind::Identity;
  else if (kind == "scale")
    h.kind = MonotoneMap::Kind::Scale;
  else if (kind == "softcap")
    h.kind = MonotoneMap::Kind::SoftCap;
  else
    throw Error("Malformed", "h must be identity, scale or softcap");
  if (j.is_object()) {
    h.a = get_or<double>(j, "a", h.a);
    h.cap = get_or<double>(j, "cap", h.cap);
  }
  if (!(h.a > 0) || !(h.cap > 0)) throw Error("Malformed", "h needs a > 0 and cap > 0");
  return h;
}

}  // namespace

Json to_json(const CostModel& m) {
  Json j = {{"model", model_name(m)}};
  if (auto* mon = std::get_if<cost::Monetary>(&m)) {
    Json p = Json::object();
    for (const auto& [k, v] : mon->prices.base) p[k] = v;
    for (const auto& [k, v] : mon->prices.scoped) p[k] = v;
    if (mon->prices.fallback) p["default"] = *mon->prices.fallback;
    j["prices"] = p;
  } else if (auto* e = std::get_if<cost::Efficiency>(&m)) {
    j["h"] = map_json(e->h);
  } else if (auto* c = std::get_if<cost::Communicability>(&m)) {
    j["h"] = map_json(c->h);
  }
  return j;
}

CostModel cost_model_from_json(const Json& j) {
  std::string model = j.is_string() ? j.get<std::string>() : j.is_object() ? get_or<std::string>(j, "model", "") : "";
  if (model == "unit") return cost::UnitCount{};
  if (model == "efficiency") return cost::Efficiency{map_from_json(j.is_object() ? j.value("h", Json()) : Json())};
  if (model == "communicability")
    return cost::Communicability{map_from_json(j.is_object() ? j.value("h", Json()) : Json())};
  if (model == "monetary") {
    cost::Monetary m;
    if (j.is_object() && j.contains("prices")) {
      const Json& p = j["prices"];
      if (!p.is_object()) throw Error("Malformed", "prices must be an object");
      for (const auto& [k, v] : p.items()) {
        if (!v.is_number()) throw Error("InvalidPrice", "price for '" + k + "' must be a number");
        if (k == "default")
          m.prices.fallback = v.get<double>();
        else if (k.find(':') != std::string::npos)
          m.prices.scoped[k] = v.get<double>();
        else
          m.prices.base[k] = v.get<double>();
      }
    }
    m.prices.validate();
    return m;
  }
  throw Error("Malformed", "cost model must be monetary, efficiency, communicability or unit");
}

Json to_json(const SearchBudget& b) { return {{"depth", b.depth}, {"max_states", b.max_states}}; }

SearchBudget budget_from_json(const Json& j, SearchBudget fallback) {
  if (j.is_null()) return fallback;
  if (!j.is_object()) throw Error("Malformed", "budget must be an object");
  fallback.depth = get_or<std::size_t>(j, "depth", fallback.depth);
  fallback.max_states = get_or<std::size_t>(j, "max_states", fallback.max_states);
  return fallback;
}

Json to_json(const PresetFile& p) {
  return {{"acceptance", to_json(p.preset.acceptance)},
          {"iset", to_json(p.preset.iset)},
          {"cost", to_json(p.preset.cost)},
          {"budget", to_json(p.budget)}};
}

PresetFile preset_from_json(const Json& j) {
  if (!j.is_object()) throw Error("Malformed", "preset must be an object");
  PresetFile p;
  p.preset.acceptance = acceptance_from_json(field(j, "acceptance"));
  p.preset.iset = iset_from_json(field(j, "iset"));
  if (j.contains("cost")) p.preset.cost = cost_model_from_json(j["cost"]);
  p.budget = budget_from_json(j.value("budget", Json()));
  return p;
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json to_json(const StressEstimate& e) {
  Json h = Json::array();
  for (auto c : e.histogram) h.push_back(c);
  return {{"p_hat", e.p_hat}, {"ci_low", e.ci_low}, {"ci_high", e.ci_high}, {"samples", e.samples},
          {"hits", e.hits},   {"seed", e.seed},     {"histogram", h}};
}

Json to_json(const QValue& q) {
  Json j = {{"value", number_or_null(q.value)}, {"text", q.text()}};
  if (q.exact) j["exact"] = rational_json(*q.exact);
  if (q.estimate) j["estimate"] = to_json(*q.estimate);
  return j;
}

Json to_json(const Verdict& v) {
  Json j = {{"decision", to_string(v.decision)},
            {"accepted", v.accepted()},
            {"q", number_or_null(v.q.value)},
            {"q_text", v.q.text()},
            {"threshold", number_or_null(v.threshold.value)},
            {"threshold_text", v.threshold.text()},
            {"margin", number_or_null(v.margin)}};
  if (v.q.exact) j["q_exact"] = rational_json(*v.q.exact);
  if (v.threshold.exact) j["threshold_exact"] = rational_json(*v.threshold.exact);
  if (v.exact_margin) j["margin_exact"] = rational_json(*v.exact_margin);
  if (v.q.estimate) j["estimate"] = to_json(*v.q.estimate);
  return j;
}

Json to_json(const CostResult& r) {
  Json j = {{"value", number_or_null(r.value)}, {"status", to_string(r.status)}, {"expanded", r.expanded}};
  j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  return j;
}

Json to_json(const RhoResult& r) {
  Json j = {{"value", number_or_null(r.value)}, {"status", to_string(r.status)}, {"expanded", r.expanded}};
  j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  j["result"] = r.result ? graph_to_json(*r.result) : Json(nullptr);
  return j;
}

Json to_json(const SizeCheck& c) {
  Json j = {{"n", c.n}, {"ok", c.ok}, {"method", c.method}};
  if (c.witness) j["witness"] = graph_to_json(*c.witness);
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

Json to_json(const PropertyReport& r) {
  Json sizes = Json::array();
  for (const auto& s : r.sizes) sizes.push_back(to_json(s));
  Json j = {{"property", r.property}, {"holds", r.holds}, {"sizes", sizes}, {"detail", r.detail}};
  if (r.first_size) j["first_size"] = *r.first_size;
  return j;
}

Json to_json(const MonotonicityVerdict& v) {
  Json j = {{"result", v.counterexample ? "Counterexample" : "NoCounterexample"},
            {"trials", v.trials},
            {"skipped", v.skipped}};
  if (v.counterexample) {
    j["graph"] = graph_to_json(v.graph);
    j["intervention"] = to_json(v.intervention);
    j["before"] = to_json(v.before);
    j["after"] = to_json(v.after);
    j["source"] = v.source;
  }
  return j;
}

Json to_json(const SuggestResult& r) {
  Json a = Json::array();
  for (const auto& s : r.ranked)
    a.push_back({{"strategy", to_json(s.strategy)},
                 {"encoding", encode(s.strategy)},
                 {"cost", number_or_null(s.cost)},
                 {"margin", number_or_null(s.margin)},
                 {"accepted", s.accepted}});
  Json j = {{"ranked", a}};
  if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
  return j;
}

Json to_json(const AxiomReport& r) {
  auto one = [](const AxiomResult& a) {
    Json j = {{"checked", a.checked}, {"violations", a.violations}};
    if (!a.witness.empty()) j["witness"] = a.witness;
    return j;
  };
  return {{"C1", one(r.c1)}, {"C2", one(r.c2)}, {"C3", one(r.c3)}, {"C4", one(r.c4)}, {"all_pass", r.all_pass()}};
}

Json to_json(const RhoPropertyReport& r) {
  Json j = {{"graphs", r.graphs},
            {"zero_on_accepted", r.zero_on_accepted},
            {"zero_on_accepted_fail", r.zero_on_accepted_fail},
            {"nonneg_fail", r.nonneg_fail},
            {"nu_applicable", r.nu_applicable},
            {"nu", number_or_null(r.nu)},
            {"nu_fail", r.nu_fail},
            {"zero_iff_accepted_fail", r.zero_iff_accepted_fail},
            {"budget_limited", r.budget_limited},
            {"ok", r.ok()}};
  if (!r.first_failure.empty()) j["first_failure"] = r.first_failure;
  return j;
}

}  // namespace netres

namespace netres {

std::vector<std::string> metric_names() {
  return {"nodes",         "edges",           "weakly_connected", "strongly_connected", "avg_degree",
          "moment2out",    "moment2in",       "variance_in",      "variance_out",       "efficiency",
          "avg_communicability", "max_deg_in", "max_deg_out",     "max_close_in",       "max_close_out",
          "max_betweenness", "moment2total",  "epidemic_ratio",   "spectral_radius"};
}

namespace {

Json exact_entry(const Rational& r) { return {{"value", to_double(r)}, {"exact", to_string(r)}}; }
Json real_entry(double x) { return {{"value", number_or_null(x)}}; }

Json metric(const Graph& g, const std::string& k) {
  if (k == "nodes") return {{"value", g.size()}};
  if (k == "edges") return {{"value", g.edge_count()}};
  if (k == "weakly_connected") return {{"value", connectivity(g).weak}};
  if (k == "strongly_connected") return {{"value", connectivity(g).strong}};
  if (k == "avg_degree") return exact_entry(average_degree(g));
  if (k == "moment2out") return exact_entry(degree_moment(g, Side::Out, 2));
  if (k == "moment2in") return exact_entry(degree_moment(g, Side::In, 2));
  if (k == "variance_in") return exact_entry(degree_variance(g, Side::In));
  if (k == "variance_out") return exact_entry(degree_variance(g, Side::Out));
  if (k == "efficiency") return real_entry(graph_efficiency(g));
  if (k == "avg_communicability") return real_entry(avg_communicability(g));
  if (k == "max_deg_in") return real_entry(max_centrality(g, CentralityKind::DegIn));
  if (k == "max_deg_out") return real_entry(max_centrality(g, CentralityKind::DegOut));
  if (k == "max_close_in") return real_entry(max_centrality(g, CentralityKind::CloseIn));
  if (k == "max_close_out") return real_entry(max_centrality(g, CentralityKind::CloseOut));
  if (k == "max_betweenness") return real_entry(max_centrality(g, CentralityKind::Betweenness));
  if (k == "moment2total") {
    if (!g.is_undirected()) throw Error("DirectedUnsupported", "moment2total needs an undirected graph");
    return exact_entry(degree_moment(g, Side::Total, 2));
  }
  if (k == "epidemic_ratio") return exact_entry(epidemic_ratio(g));
  if (k == "spectral_radius") {
    if (!g.is_undirected()) throw Error("DirectedUnsupported", "spectral radius needs an undirected graph");
    return real_entry(spectral_radius(g));
  }
  throw Error("Malformed", "unknown metric '" + k + "'");
}

}  // namespace

Json metrics_report(const Graph& g, const std::vector<std::string>& kinds) {
  auto names = kinds.empty() ? metric_names() : kinds;
  Json out = Json::object();
  for (const auto& k : names) {
    try {
      out[k] = metric(g, k);
    } catch (const Error& e) {
      if (e.code() == "Malformed") throw;
      out[k] = {{"value", nullptr}, {"error", e.code()}};
    }
  }
  return out;
}

}  // namespace netres

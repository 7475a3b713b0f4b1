#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <functional>

#include "netres/io.hpp"

using namespace netres;

namespace {

std::string code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

ParseError parse_error(const std::string& text) {
  try {
    parse_graph(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("no parse error");
  return ParseError("", "", 0, 0);
}

}  // namespace

TEST_CASE("edge list text") {
  auto p = parse_graph("# example\ndirected\n0 1\n1 2   # trailing\nnode 7\n\n");
  CHECK(p.graph == [] {
    Graph g = make_graph(3, {{0, 1}, {1, 2}});
    g.add_node(7);
    return g;
  }());
  CHECK_FALSE(p.undirected);
  CHECK(p.warnings.empty());
  auto u = parse_graph("undirected\n0 1\n1 2\n");
  CHECK(u.undirected);
  CHECK(u.graph == families::undirected_line(3));
}

TEST_CASE("parse errors carry positions") {
  auto e = parse_error("directed\n0 1\n2 2\n");
  CHECK(e.code() == "SelfLoop");
  CHECK(e.line() == 3);
  CHECK(e.column() == 1);
  auto m = parse_error("directed\n0 x\n");
  CHECK(m.code() == "Malformed");
  CHECK(m.line() == 2);
  CHECK(std::string(m.what()).find(" at 2:") != std::string::npos);
  CHECK(parse_error("directed\n0 1 2\n").code() == "Malformed");
  CHECK(parse_error("{\"directed\": true, \"edges\": [[0,1]],").code() == "Malformed");
}

TEST_CASE("duplicate edges warn") {
  auto p = parse_graph("directed\n0 1\n0 1\n");
  REQUIRE(p.warnings.size() == 1);
  CHECK(p.warnings[0].code == "DuplicateEdge");
  CHECK(p.warnings[0].line == 3);
  CHECK(p.graph.edge_count() == 1);
}

TEST_CASE("JSON graphs") {
  auto p = parse_graph(R"({"directed": true, "nodes": [0, 1, 2, 5], "edges": [[0, 1], [1, 2]]})");
  CHECK(p.graph.size() == 4);
  CHECK(p.graph.has_edge(1, 2));
  CHECK(code_of([] { parse_graph(R"({"directed": true, "nodes": [0], "edges": [[0, 1]]})"); }) == "DanglingEdge");
  auto j = graph_to_json(families::undirected_line(3), true);
  CHECK(j["directed"] == false);
  auto back = graph_from_json(j);
  CHECK(back.undirected);
  CHECK(back.graph == families::undirected_line(3));
}

TEST_CASE("serialization is canonical and round-trips") {
  Graph g = make_graph(4, {{2, 1}, {0, 3}, {0, 1}});
  g.add_node(9);
  auto text = serialize_graph(g);
  CHECK(text == "directed\nnode 9\n0 1\n0 3\n2 1\n");
  CHECK(parse_graph(text).graph == g);
  auto u = serialize_graph(families::undirected_star(3), true);
  CHECK(u == "undirected\n0 1\n0 2\n");
  CHECK(code_of([] { serialize_graph(families::directed_line(2), true); }) == "Malformed");
  for (std::uint64_t s = 0; s < 20; ++s) {
    Graph r = random_digraph(6, 0.3, s);
    CHECK(parse_graph(serialize_graph(r)).graph == r);
    CHECK(graph_from_json(graph_to_json(r)).graph == r);
  }
}

TEST_CASE("files") {
  CHECK(code_of([] { read_file("/nonexistent/graph.txt"); }) == "FileNotFound");
  std::string path = "netres_io_test_graph.txt";
  std::ofstream(path) << "directed\n0 1\n";
  CHECK(read_graph_file(path).graph == families::directed_line(2));
  std::remove(path.c_str());
}

TEST_CASE("interventions and strategies in JSON") {
  std::vector<Intervention> all = {iv::EdgeDel{3, 7}, iv::NodeAdd{9}, iv::Isolate{{1, 2}},
                                   iv::EdgeShift{{1, 2}, {3, 4}}, iv::NodeSplit{{{2, 5}}, 2, 9},
                                   iv::NodeMerge{2, 9}, iv::NodeCopy{2, 9}, iv::UEdgeDel{0, 1},
                                   iv::USplit{{{1, 0}, {0, 1}}, 0, 5}, iv::Kelmans{1, 2}};
  for (const auto& k : all) CHECK(to_text(intervention_from_json(to_json(k))) == to_text(k));
  CHECK(to_json(Intervention{iv::EdgeDel{3, 7}})["kind"] == "edge_del");
  CHECK(to_text(intervention_from_json("node_del 4")) == "node_del 4");
  Strategy s = {iv::EdgeDel{0, 1}, iv::NodeDel{2}};
  CHECK(encode(strategy_from_json(to_json(s))) == encode(s));
  CHECK(encode(strategy_from_json("edge_del 0 1; node_del 2")) == encode(s));
  CHECK(code_of([] { intervention_from_json(Json{{"kind", "warp"}}); }) != "");
}

TEST_CASE("intervention sets") {
  auto a = iset_from_json("edge_del,node_split");
  CHECK(a.kinds.size() == 2);
  auto b = iset_from_json(Json::parse(R"({"kinds": ["edge_del"], "scope": [0, 1], "max_split_edges": 2})"));
  REQUIRE(b.scope);
  CHECK(*b.scope == std::set<NodeId>{0, 1});
  CHECK(b.max_split_edges == 2);
  auto c = iset_from_json(to_json(b));
  CHECK(c.kinds == b.kinds);
  CHECK(c.scope == b.scope);
}

TEST_CASE("thresholds, schedules and rationals") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(code_of([] { parse_rational("1/0"); }) != "");
  CHECK(code_of([] { parse_rational("abc"); }) != "");
  auto t = threshold_from_json("9/4");
  CHECK(*t.exact == Rational(9, 4));
  CHECK(threshold_from_json(0.5).value == 0.5);
  auto f = schedule_from_json(Json::parse(R"({"formula": "out2-star-gap", "params": {"c": 1}})"));
  CHECK(*f.at(4).exact == Rational(2));
  auto tab = schedule_from_json(Json::parse(R"({"table": {"3": "1/2"}, "default": 1})"));
  CHECK(*tab.at(3).exact == Rational(1, 2));
  CHECK(tab.at(5).value == 1.0);
  CHECK(*schedule_from_json(to_json(f)).at(6).exact == *f.at(6).exact);
}

TEST_CASE("stress configuration") {
  auto c = stress_config_from_json(
      Json::parse(R"({"tau": 2, "gamma": 1, "alpha": 0.4, "lambda": 0.2, "samples": 50, "seed": 3,
                      "shock": {"kind": "fixed", "nodes": [1, 2]}})"));
  CHECK(c.params.tau == 2.0);
  CHECK(c.samples == 50);
  CHECK(std::get<shock::FixedSet>(c.shock).nodes == std::set<NodeId>{1, 2});
  auto d = stress_config_from_json(to_json(c));
  CHECK(d.seed == 3);
  CHECK(std::holds_alternative<shock::FixedSet>(d.shock));
  CHECK(engine_from_string("gillespie") == Engine::Gillespie);
  CHECK(code_of([] { engine_from_string("euler"); }) != "");
  CHECK(code_of([] { stress_config_from_json(Json::parse(R"({"alpha": 2})")); }) == "InvalidConfig");
}

TEST_CASE("acceptance and cost models") {
  auto a = acceptance_from_json("prop-6.1-out2");
  CHECK(a.q.kind == QKind::Moment2Out);
  auto b = acceptance_from_json(Json::parse(R"({"q": "max_deg_out", "threshold": 1})"));
  CHECK(b.q.kind == QKind::MaxDegOut);
  auto c = acceptance_from_json(to_json(a));
  CHECK(*c.schedule.at(5).exact == *a.schedule.at(5).exact);
  CostModel m = cost_model_from_json(
      Json::parse(R"j({"model": "monetary", "prices": {"edge_del": 2, "edge_del:(0,1)": 0.5, "default": 7}})j"));
  REQUIRE(std::holds_alternative<cost::Monetary>(m));
  const auto& pt = std::get<cost::Monetary>(m).prices;
  CHECK(*pt.price(iv::EdgeDel{0, 1}) == 0.5);
  CHECK(*pt.price(iv::NodeDel{3}) == 7.0);
  CHECK(model_name(cost_model_from_json("unit")) == "unit");
  auto e = cost_model_from_json(Json::parse(R"({"model": "efficiency", "h": {"kind": "softcap", "a": 2, "cap": 1}})"));
  CHECK(std::get<cost::Efficiency>(e).h.kind == MonotoneMap::Kind::SoftCap);
  CHECK(code_of([] { cost_model_from_json(Json::parse(R"({"model": "monetary", "prices": {"edge_del": -1}})")); }) ==
        "InvalidPrice");
  auto p = preset_from_json(Json::parse(
      R"({"acceptance": "prop-6.1-out2", "iset": "edge_del", "cost": "unit", "budget": {"depth": 3}})"));
  CHECK(p.budget.depth == 3);
  CHECK(preset_from_json(to_json(p)).budget.depth == 3);
}

TEST_CASE("result JSON") {
  auto v = is_acceptable(acceptance_preset("prop-6.1-out2"), families::directed_star(4));
  auto j = to_json(v);
  CHECK(j["decision"] == "reject");
  CHECK(j["accepted"] == false);
  CHECK(j["q_text"] == "9/4");
  CHECK(j["margin_exact"] == "-1/4");
  CHECK(number_or_null(kInf).is_null());
  CHECK(number_or_null(2.5) == 2.5);
  CostResult r;
  CHECK(to_json(r)["value"].is_null());
}

TEST_CASE("metrics report") {
  auto j = metrics_report(families::directed_star(4), {"moment2out", "epidemic_ratio"});
  CHECK(j["moment2out"]["exact"] == "9/4");
  CHECK(j["epidemic_ratio"]["value"].is_null());
  CHECK(j["epidemic_ratio"]["error"] == "DirectedUnsupported");
  CHECK(code_of([] { metrics_report(families::directed_star(4), {"nope"}); }) == "Malformed");
  auto all = metrics_report(families::undirected_star(4));
  CHECK(all.size() == metric_names().size());
}

#include "netres/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "netres/io.hpp"
#include "netres/service.hpp"

namespace netres {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Json load_json_arg(const std::string& s) {
  if (!s.empty() && (s[0] == '{' || s[0] == '[' || s[0] == '"')) return Json::parse(s);
  if (std::filesystem::is_regular_file(s)) {
    std::string text = read_file(s);
    try {
      return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error("Malformed", "invalid JSON in '" + s + "': " + e.what());
    }
  }
  return Json(s);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("NETRES_SEED")) {
    try {
      std::size_t used = 0;
      std::uint64_t v = std::stoull(env, &used);
      if (used == std::strlen(env)) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("NETRES_SEED must be a non-negative integer");
  }
  throw UsageError("this command is randomized and requires --seed (or NETRES_SEED)");
}

std::string csv_cell(const Json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

// key,value rows for the top-level fields
std::string csv_from_json(const Json& j) {
  std::string out = "key,value\n";
  for (const auto& [k, v] : j.items()) out += csv_cell(k) + "," + csv_cell(v) + "\n";
  return out;
}

void emit(std::ostream& out, const Json& j, const std::string& format) {
  if (format == "csv")
    out << csv_from_json(j);
  else
    out << j.dump(2) << "\n";
}

std::vector<std::size_t> parse_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto dash = tok.find("..");
    try {
      if (dash != std::string::npos) {
        std::size_t a = std::stoul(tok.substr(0, dash)), b = std::stoul(tok.substr(dash + 2));
        for (std::size_t n = a; n <= b; ++n) out.push_back(n);
      } else if (!tok.empty()) {
        out.push_back(std::stoul(tok));
      }
    } catch (const std::exception&) {
      throw UsageError("sizes must look like 2,3,4 or 2..6");
    }
  }
  return out;
}

std::vector<Graph> sample_population(std::size_t count, std::size_t max_n, std::uint64_t seed, bool undirected) {
  std::vector<Graph> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t n = 1 + hash_key(seed, {i, 1}) % max_n;
    double p = 0.2 + 0.6 * to_unit(hash_key(seed, {i, 2}));
    out.push_back(undirected ? random_undirected(n, p, hash_key(seed, {i, 3}))
                             : random_digraph(n, p, hash_key(seed, {i, 3})));
  }
  return out;
}

bool is_stress(const AcceptanceSpec& a) { return a.q.kind == QKind::StressProbability; }

struct Opts {
  std::string graph, format = "json", preset, spec, iset, model, target, strategy, config, engine = "epn", kinds,
                     q, check, sizes = "2..6", mode = "witness", host = "127.0.0.1", acceptance;
  std::vector<std::string> steps;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::size_t depth = 0, max_states = 0, trials = 1000, min_n = 1, max_n = 8, graphs = 200, perms = 5,
              samples = 50, beam = 5, max_steps = 3, sample_n = 4;
  bool canonical = false;
  int port = 8080;
};

AcceptanceSpec load_acceptance(const Opts& o) {
  if (!o.spec.empty()) return acceptance_from_json(load_json_arg(o.spec));
  if (!o.preset.empty()) return acceptance_preset(o.preset);
  throw UsageError("give --preset NAME or --spec FILE");
}

PresetFile load_preset(const Opts& o) {
  PresetFile p;
  if (!o.preset.empty()) {
    p = preset_from_json(load_json_arg(o.preset));
  } else {
    if (o.acceptance.empty() || o.iset.empty()) throw UsageError("give --preset FILE or --acceptance with --iset");
    p.preset.acceptance = acceptance_from_json(load_json_arg(o.acceptance));
    p.preset.iset = iset_from_string(o.iset);
    if (!o.model.empty()) p.preset.cost = cost_model_from_json(load_json_arg(o.model));
  }
  if (o.depth) p.budget.depth = o.depth;
  if (o.max_states) p.budget.max_states = o.max_states;
  return p;
}

void prepare_stress(AcceptanceSpec& a, const Opts& o) {
  if (!is_stress(a)) return;
  a.q.stress.seed = resolve_seed(o.seed);
  a.q.workers = o.workers;
}

int cmd_metrics(const Opts& o, std::ostream& out) {
  auto pg = read_graph_file(o.graph);
  std::vector<std::string> kinds;
  if (!o.kinds.empty()) {
    std::stringstream ss(o.kinds);
    std::string k;
    while (std::getline(ss, k, ','))
      if (!k.empty()) kinds.push_back(k);
  }
  Json m = metrics_report(pg.graph, kinds);
  if (o.format == "csv") {
    out << "metric,value,exact\n";
    for (const auto& [k, v] : m.items())
      out << k << "," << csv_cell(v["value"]) << "," << (v.contains("exact") ? csv_cell(v["exact"]) : "") << "\n";
    return 0;
  }
  out << Json{{"graph", graph_to_json(pg.graph, pg.undirected)}, {"metrics", m}}.dump(2) << "\n";
  return 0;
}

int cmd_accept(const Opts& o, std::ostream& out) {
  auto pg = read_graph_file(o.graph);
  auto a = load_acceptance(o);
  prepare_stress(a, o);
  emit(out, to_json(is_acceptable(a, pg.graph)), o.format);
  return 0;
}

Strategy load_strategy(const Opts& o) {
  Strategy s;
  if (!o.strategy.empty()) {
    std::string text = std::filesystem::is_regular_file(o.strategy) ? read_file(o.strategy) : o.strategy;
    auto first = text.find_first_not_of(" \t\r\n");
    s = first != std::string::npos && (text[first] == '[' || text[first] == '{')
            ? strategy_from_json(Json::parse(text))
            : strategy_from_text(text);
  }
  for (const auto& step : o.steps) s.push_back(intervention_from_text(step));
  return s;
}

int cmd_apply(const Opts& o, std::ostream& out) {
  auto pg = read_graph_file(o.graph);
  Strategy s = load_strategy(o);
  for (const auto& k : s) validate(k);
  Graph h = apply_strategy(s, pg.graph);
  bool und = pg.undirected && h.is_undirected();
  if (o.format == "json")
    out << Json{{"graph", graph_to_json(h, und)}, {"strategy", to_json(s)}}.dump(2) << "\n";
  else
    out << serialize_graph(h, und);
  return 0;
}

int cmd_reach(const Opts& o, std::ostream& out) {
  auto pg = read_graph_file(o.graph);
  auto iset = iset_from_string(o.iset);
  auto r = reachable_set(pg.graph, iset, o.depth ? o.depth : 2, o.max_states ? o.max_states : 10000, o.canonical);
  if (o.format == "csv") {
    out << "index,depth,nodes,edges,strategy\n";
    for (std::size_t i = 0; i < r.states.size(); ++i)
      out << i << "," << r.paths[i].size() << "," << r.states[i].size() << "," << r.states[i].edge_count() << ","
          << csv_cell(encode(r.paths[i])) << "\n";
    return 0;
  }
  Json states = Json::array();
  for (std::size_t i = 0; i < r.states.size(); ++i)
    states.push_back({{"graph", graph_to_json(r.states[i])}, {"strategy", encode(r.paths[i])}});
  Json j = {{"count", r.states.size()}, {"incomplete", r.incomplete}, {"states", states}};
  if (o.canonical) j["isomorphism_classes"] = r.canonical().size();
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_cost(const Opts& o, std::ostream& out) {
  auto pg = read_graph_file(o.graph);
  CostModel m = o.model.empty() ? CostModel{cost::UnitCount{}} : cost_model_from_json(load_json_arg(o.model));
  SearchBudget b;
  if (o.depth) b.depth = o.depth;
  if (o.max_states) b.max_states = o.max_states;
  if (!o.strategy.empty() || !o.steps.empty()) {
    Strategy s = load_strategy(o);
    double c = strategy_cost(m, s, pg.graph);
    emit(out, {{"model", model_name(m)}, {"value", number_or_null(c)}, {"strategy", encode(s)}}, o.format);
    return 0;
  }
  if (o.target.empty()) throw UsageError("cost needs --target FILE or --strategy");
  auto target = read_graph_file(o.target);
  auto r = transformation_cost(m, pg.graph, target.graph, o.iset.empty() ? InterventionSet{} : iset_from_string(o.iset), b);
  Json j = to_json(r);
  j["model"] = model_name(m);
  emit(out, j, o.format);
  return 0;
}

int cmd_rho(const Opts& o, std::ostream& out) {
  auto pg = read_graph_file(o.graph);
  auto p = load_preset(o);
  prepare_stress(p.preset.acceptance, o);
  emit(out, to_json(rho(pg.graph, p.preset, p.budget)), o.format);
  return 0;
}

int cmd_suggest(const Opts& o, std::ostream& out) {
  auto pg = read_graph_file(o.graph);
  auto p = load_preset(o);
  prepare_stress(p.preset.acceptance, o);
  out << to_json(suggest_greedy(pg.graph, p.preset, o.beam, o.max_steps)).dump(2) << "\n";
  return 0;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int cmd_stress(const Opts& o, std::ostream& out) {
  auto pg = read_graph_file(o.graph);
  StressConfig cfg = o.config.empty() ? StressConfig{} : stress_config_from_json(load_json_arg(o.config));
  cfg.seed = resolve_seed(o.seed);
  Engine engine = engine_from_string(o.engine);
  auto e = estimate_systemic_probability(pg.graph, cfg, engine, o.workers);
  if (o.format == "json") {
    Json j = to_json(e);
    j["engine"] = o.engine;
    j["config"] = to_json(cfg);
    out << j.dump(2) << "\n";
    return 0;
  }
  out << "key,value\n";
  out << "engine," << o.engine << "\n";
  out << "seed," << e.seed << "\n";
  out << "samples," << e.samples << "\n";
  out << "hits," << e.hits << "\n";
  out << "p_hat," << fmt17(e.p_hat) << "\n";
  out << "ci_low," << fmt17(e.ci_low) << "\n";
  out << "ci_high," << fmt17(e.ci_high) << "\n";
  out << "final_size,count\n";
  for (std::size_t k = 0; k < e.histogram.size(); ++k) out << k << "," << e.histogram[k] << "\n";
  return 0;
}

int cmd_props(const Opts& o, std::ostream& out) {
  std::string check = o.check.empty() ? (o.q.empty() ? "" : "mono") : o.check;
  if (check.empty()) throw UsageError("props needs --check or --q");
  Json j;
  if (check == "mono") {
    if (o.q.empty() || o.iset.empty()) throw UsageError("monotonicity needs --q and --iset");
    QSpec q;
    q.kind = q_from_name(o.q);
    std::uint64_t seed = resolve_seed(o.seed);
    if (q.kind == QKind::StressProbability) {
      q.stress.seed = seed;
      q.stress.samples = 2000;
    }
    auto v = falsify_monotonicity(q, iset_from_string(o.iset), o.trials, o.min_n, o.max_n, seed, o.workers);
    j = to_json(v);
    j["q"] = o.q;
    j["iset"] = o.iset;
  } else if (check == "P1" || check == "P2" || check == "P3" || check == "P4") {
    auto a = load_acceptance(o);
    if (check == "P4" || is_stress(a)) prepare_stress(a, o);
    CheckMode mode = o.mode == "closed" ? CheckMode::ClosedForm : CheckMode::WitnessSearch;
    PropertyReport r;
    if (check == "P1") r = check_P1(a, o.max_n);
    if (check == "P2") r = check_P2(a, parse_sizes(o.sizes), mode);
    if (check == "P3") r = check_P3(a, parse_sizes(o.sizes), mode);
    if (check == "P4") r = check_P4(a, o.graphs, o.perms, resolve_seed(o.seed), o.max_n, o.workers);
    j = to_json(r);
  } else if (check == "axioms") {
    CostModel m = o.model.empty() ? CostModel{cost::UnitCount{}} : cost_model_from_json(load_json_arg(o.model));
    SearchBudget b{o.depth ? o.depth : 3, o.max_states ? o.max_states : 20000};
    std::uint64_t seed = resolve_seed(o.seed);
    auto pop = sample_population(o.samples, o.sample_n, seed, false);
    j = to_json(check_cost_axioms(m, iset_from_string(o.iset), pop, b, 20, seed));
    j["model"] = model_name(m);
  } else if (check == "rho") {
    auto p = load_preset(o);
    std::uint64_t seed = resolve_seed(o.seed);
    prepare_stress(p.preset.acceptance, o);
    auto pop = sample_population(o.samples, o.sample_n, seed, q_requires_undirected(p.preset.acceptance.q.kind));
    j = to_json(verify_rho_properties(p.preset, pop, p.budget));
  } else {
    throw UsageError("unknown check '" + check + "' (mono, P1, P2, P3, P4, axioms, rho)");
  }
  j["check"] = check;
  emit(out, j, o.format);
  return 0;
}

int cmd_serve(const Opts& o, std::ostream& out) {
  Service svc(o.workers);
  int port = svc.bind(o.host, o.port);
  if (port < 0) throw Error("BindFailed", "cannot listen on " + o.host + ":" + std::to_string(o.port));
  out << "listening on " << o.host << ":" << port << std::endl;
  svc.listen();
  return 0;
}

Json diagnostic(const Error& e) {
  Json j = {{"error", e.code()}, {"message", e.what()}};
  if (auto* pe = dynamic_cast<const ParseError*>(&e)) {
    j["line"] = pe->line();
    j["column"] = pe->column();
  }
  return j;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"netres: network resilience toolkit"};
  app.require_subcommand(1);
  Opts o;
  auto formats = CLI::IsMember({"json", "csv", "text"});

  auto graph_opt = [&](CLI::App* c) { c->add_option("--graph", o.graph, "graph file (edge list or JSON)")->required(); };
  auto common = [&](CLI::App* c) {
    c->add_option("--format", o.format, "json, csv or text")->check(formats);
    c->add_option("--workers", o.workers, "worker threads")->check(CLI::Range(1u, 256u));
  };
  auto seed_opt = [&](CLI::App* c) { c->add_option("--seed", o.seed, "random seed"); };
  auto budget = [&](CLI::App* c) {
    c->add_option("--depth", o.depth, "strategy length bound");
    c->add_option("--max-states", o.max_states, "state cap");
  };

  auto* metrics = app.add_subcommand("metrics", "graph metrics");
  graph_opt(metrics);
  common(metrics);
  metrics->add_option("--kinds", o.kinds, "comma separated metric names");

  auto* accept = app.add_subcommand("accept", "acceptance verdict");
  graph_opt(accept);
  common(accept);
  seed_opt(accept);
  accept->add_option("--preset", o.preset, "acceptance preset name");
  accept->add_option("--spec", o.spec, "acceptance spec JSON file");

  auto* apply_cmd = app.add_subcommand("apply", "apply a strategy");
  graph_opt(apply_cmd);
  apply_cmd->add_option("--strategy", o.strategy, "strategy file (text or JSON)");
  apply_cmd->add_option("--step", o.steps, "a single step in text form");
  apply_cmd->add_option("--format", o.format, "text or json")->check(formats);

  auto* reach = app.add_subcommand("reach", "reachable set");
  graph_opt(reach);
  common(reach);
  budget(reach);
  reach->add_option("--iset", o.iset, "admissible interventions")->required();
  reach->add_flag("--canonical", o.canonical, "count isomorphism classes");

  auto* cost_cmd = app.add_subcommand("cost", "transformation or strategy cost");
  graph_opt(cost_cmd);
  common(cost_cmd);
  budget(cost_cmd);
  cost_cmd->add_option("--model", o.model, "cost model JSON file or name");
  cost_cmd->add_option("--iset", o.iset, "admissible interventions");
  cost_cmd->add_option("--target", o.target, "target graph file");
  cost_cmd->add_option("--strategy", o.strategy, "strategy file");
  cost_cmd->add_option("--step", o.steps, "a single step in text form");

  auto preset_opts = [&](CLI::App* c) {
    c->add_option("--preset", o.preset, "preset JSON file");
    c->add_option("--acceptance", o.acceptance, "acceptance preset name or spec file");
    c->add_option("--iset", o.iset, "admissible interventions");
    c->add_option("--model", o.model, "cost model");
  };
  auto* rho_cmd = app.add_subcommand("rho", "induced risk measure");
  graph_opt(rho_cmd);
  common(rho_cmd);
  seed_opt(rho_cmd);
  budget(rho_cmd);
  preset_opts(rho_cmd);

  auto* suggest = app.add_subcommand("suggest", "greedy strategy suggestions");
  graph_opt(suggest);
  common(suggest);
  seed_opt(suggest);
  preset_opts(suggest);
  suggest->add_option("--beam", o.beam, "beam width");
  suggest->add_option("--steps", o.max_steps, "maximum strategy length");

  auto* stress = app.add_subcommand("stress", "SIR stress test");
  graph_opt(stress);
  common(stress);
  seed_opt(stress);
  stress->add_option("--config", o.config, "stress config JSON file");
  stress->add_option("--engine", o.engine, "epn or gillespie")->check(CLI::IsMember({"epn", "gillespie"}));

  auto* props = app.add_subcommand("props", "property checks");
  common(props);
  seed_opt(props);
  budget(props);
  props->add_option("--check", o.check, "mono, P1, P2, P3, P4, axioms or rho");
  props->add_option("--q", o.q, "Q name for monotonicity");
  props->add_option("--iset", o.iset, "admissible interventions");
  props->add_option("--trials", o.trials, "random trials");
  props->add_option("--min-n", o.min_n, "smallest random graph");
  props->add_option("--max-n", o.max_n, "largest random graph");
  props->add_option("--preset", o.preset, "acceptance preset name, or preset file for rho");
  props->add_option("--spec", o.spec, "acceptance spec JSON file");
  props->add_option("--acceptance", o.acceptance, "acceptance for rho checks");
  props->add_option("--model", o.model, "cost model");
  props->add_option("--sizes", o.sizes, "sizes such as 2..6");
  props->add_option("--mode", o.mode, "witness or closed")->check(CLI::IsMember({"witness", "closed"}));
  props->add_option("--graphs", o.graphs, "random graphs for P4");
  props->add_option("--perms", o.perms, "relabelings per graph for P4");
  props->add_option("--samples", o.samples, "sample graphs for axioms and rho");
  props->add_option("--sample-n", o.sample_n, "largest sample graph");

  auto* serve = app.add_subcommand("serve", "HTTP service");
  serve->add_option("--port", o.port, "port (0 picks one)");
  serve->add_option("--host", o.host, "bind address");
  serve->add_option("--workers", o.workers, "worker threads")->check(CLI::Range(1u, 256u));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (o.format == "text" && !apply_cmd->parsed()) o.format = "json";
  if (apply_cmd->parsed() && apply_cmd->count("--format") == 0) o.format = "text";
  if (stress->parsed() && stress->count("--format") == 0) o.format = "csv";

  try {
    if (metrics->parsed()) return cmd_metrics(o, out);
    if (accept->parsed()) return cmd_accept(o, out);
    if (apply_cmd->parsed()) return cmd_apply(o, out);
    if (reach->parsed()) return cmd_reach(o, out);
    if (cost_cmd->parsed()) return cmd_cost(o, out);
    if (rho_cmd->parsed()) return cmd_rho(o, out);
    if (suggest->parsed()) return cmd_suggest(o, out);
    if (stress->parsed()) return cmd_stress(o, out);
    if (props->parsed()) return cmd_props(o, out);
    if (serve->parsed()) return cmd_serve(o, out);
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    out << diagnostic(e).dump(2) << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    out << Json{{"error", "Malformed"}, {"message", e.what()}}.dump(2) << "\n";
    return 1;
  }
  return 2;
}

}  // namespace netres

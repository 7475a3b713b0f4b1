#include "netres/service.hpp"

#include <httplib.h>

#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <thread>

namespace netres {

namespace {

int status_for(const std::string& code) {
  if (code == "UnknownId") return 404;
  if (code == "EmptyHistory") return 409;
  static const std::set<std::string> bad = {"Malformed",       "SelfLoop",     "DanglingEdge",  "InvalidConfig",
                                            "MalformedIntervention", "UnknownPreset", "InvalidPrice", "MissingSeed",
                                            "UnknownRoute",    "NoClosedForm"};
  if (code == "MethodNotAllowed") return 405;
  return bad.count(code) ? 400 : 422;
}

Service::Response error_response(const Error& e) {
  Json j = {{"error", e.code()}, {"message", e.what()}};
  if (auto* pe = dynamic_cast<const ParseError*>(&e)) {
    j["line"] = pe->line();
    j["column"] = pe->column();
  }
  int status = e.code() == "UnknownRoute" ? 404 : status_for(e.code());
  return {status, j};
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string p;
  while (std::getline(ss, p, '/'))
    if (!p.empty()) parts.push_back(p);
  return parts;
}

std::uint64_t seed_of(const Json& body) {
  if (!body.is_object() || !body.contains("seed") || !body["seed"].is_number_unsigned())
    throw Error("MissingSeed", "randomized requests need a non-negative integer 'seed'");
  return body["seed"].get<std::uint64_t>();
}

Json graph_view(const std::string& id, const GraphEntry& e) {
  bool und = e.undirected && e.head.is_undirected();
  Json hist = Json::array();
  for (const auto& h : e.history) hist.push_back(to_json(h.step));
  return {{"id", id},
          {"graph", graph_to_json(e.head, und)},
          {"serialization", serialize_graph(e.head, und)},
          {"hash", std::to_string(graph_hash(e.head))},
          {"undirected", und},
          {"history", hist}};
}

}  // namespace

struct Service::Impl {
  unsigned workers;
  Workspace ws;
  std::shared_mutex ws_mutex;

  struct Job {
    std::string status = "running";
    Json result;
    Json error;
  };
  std::mutex jobs_mutex;
  std::map<std::string, Job> jobs;
  std::map<std::string, Json> cache;
  std::uint64_t next_job = 1;
  std::vector<std::thread> threads;

  httplib::Server server;

  explicit Impl(unsigned w) : workers(w ? w : 1) {}

  GraphEntry snapshot(const std::string& id) {
    std::shared_lock lock(ws_mutex);
    return ws.entry(id);
  }

  PresetFile resolve_preset(const Json& body) {
    if (body.contains("preset_id")) {
      std::shared_lock lock(ws_mutex);
      auto it = ws.presets.find(body["preset_id"].get<std::string>());
      if (it == ws.presets.end()) throw Error("UnknownId", "no preset '" + body["preset_id"].get<std::string>() + "'");
      return preset_from_json(it->second);
    }
    if (body.contains("preset") && body["preset"].is_object()) return preset_from_json(body["preset"]);
    return preset_from_json(body);
  }

  void seed_stress(AcceptanceSpec& a, const Json& body) {
    if (a.q.kind != QKind::StressProbability) return;
    a.q.stress.seed = seed_of(body);
    a.q.workers = workers;
  }

  AcceptanceSpec resolve_acceptance(const Json& body) {
    if (body.is_string()) return acceptance_preset(body.get<std::string>());
    if (body.contains("preset_id")) return resolve_preset(body).preset.acceptance;
    if (body.contains("acceptance")) return acceptance_from_json(body["acceptance"]);
    return acceptance_from_json(body);
  }

  Json do_evaluate(const Graph& g, const Json& body) {
    auto a = resolve_acceptance(body);
    seed_stress(a, body);
    return to_json(is_acceptable(a, g));
  }

  Json do_cost(const Graph& g, const Json& body) {
    CostModel m = body.contains("model") ? cost_model_from_json(body["model"]) : CostModel{cost::UnitCount{}};
    if (body.contains("strategy")) {
      Strategy s = strategy_from_json(body["strategy"]);
      return {{"model", model_name(m)}, {"value", number_or_null(strategy_cost(m, s, g))}, {"strategy", encode(s)}};
    }
    if (!body.contains("target")) throw Error("Malformed", "cost needs 'target' or 'strategy'");
    auto target = graph_from_json(body["target"]);
    InterventionSet iset = body.contains("iset") ? iset_from_json(body["iset"]) : InterventionSet{};
    auto r = transformation_cost(m, g, target.graph, iset, budget_from_json(body.value("budget", Json())));
    Json j = to_json(r);
    j["model"] = model_name(m);
    return j;
  }

  Json do_stress(const Graph& g, const Json& body) {
    StressConfig cfg = stress_config_from_json(body.value("config", body));
    cfg.seed = seed_of(body);
    std::string engine = body.value("engine", std::string("epn"));
    auto e = estimate_systemic_probability(g, cfg, engine_from_string(engine), workers);
    Json j = to_json(e);
    j["engine"] = engine;
    j["config"] = to_json(cfg);
    return j;
  }

  Json do_rho(const Graph& g, const Json& body) {
    auto p = resolve_preset(body);
    seed_stress(p.preset.acceptance, body);
    if (body.contains("budget")) p.budget = budget_from_json(body["budget"], p.budget);
    return to_json(rho(g, p.preset, p.budget));
  }

  Json do_suggest(const Graph& g, const Json& body) {
    auto p = resolve_preset(body);
    seed_stress(p.preset.acceptance, body);
    std::size_t beam = body.value("beam", std::size_t{5});
    std::size_t steps = body.value("steps", std::size_t{3});
    return to_json(suggest_greedy(g, p.preset, beam, steps));
  }

  // cached by (graph hash, request); async requests return a job id
  Service::Response run(const std::string& kind, const std::string& id, const Json& body,
                        Json (Impl::*fn)(const Graph&, const Json&)) {
    GraphEntry e = snapshot(id);
    Json key_body = body;
    if (key_body.is_object()) key_body.erase("async");
    std::string key = kind + "|" + std::to_string(graph_hash(e.head)) + "|" + key_body.dump();
    bool async = body.is_object() && body.value("async", false);
    {
      std::lock_guard lock(jobs_mutex);
      auto it = cache.find(key);
      if (it != cache.end() && !async) return {200, it->second};
      if (async) {
        std::string jid = "j" + std::to_string(next_job++);
        if (it != cache.end()) {
          jobs[jid] = {"done", it->second, nullptr};
          return {202, {{"job", jid}, {"status", "done"}}};
        }
        jobs[jid] = {};
        threads.emplace_back([this, jid, key, g = e.head, body, fn] {
          Job done;
          try {
            done.result = (this->*fn)(g, body);
            done.status = "done";
          } catch (const Error& err) {
            done.status = "failed";
            done.error = error_response(err).body;
          } catch (const std::exception& err) {
            done.status = "failed";
            done.error = {{"error", "Malformed"}, {"message", err.what()}};
          }
          std::lock_guard lock(jobs_mutex);
          if (done.status == "done") cache[key] = done.result;
          jobs[jid] = std::move(done);
        });
        return {202, {{"job", jid}, {"status", "running"}}};
      }
    }
    Json result = (this->*fn)(e.head, body);
    std::lock_guard lock(jobs_mutex);
    cache[key] = result;
    return {200, result};
  }

  Service::Response job(const std::string& jid) {
    std::lock_guard lock(jobs_mutex);
    auto it = jobs.find(jid);
    if (it == jobs.end()) throw Error("UnknownId", "no job '" + jid + "'");
    Json j = {{"job", jid}, {"status", it->second.status}};
    if (it->second.status == "done") j["result"] = it->second.result;
    if (it->second.status == "failed") j["error"] = it->second.error;
    return {200, j};
  }

  Service::Response post_graph(const std::string& body) {
    ParsedGraph pg;
    auto first = body.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && body[first] == '{') {
      Json j = Json::parse(body);
      pg = j.contains("text") ? parse_graph(j["text"].get<std::string>())
                              : graph_from_json(j.contains("graph") ? j["graph"] : j);
    } else {
      pg = parse_graph(body);
    }
    Json warnings = Json::array();
    for (const auto& w : pg.warnings)
      warnings.push_back({{"code", w.code}, {"line", w.line}, {"column", w.column}, {"message", w.message}});
    std::unique_lock lock(ws_mutex);
    std::string id = ws.add_graph(pg.graph, pg.undirected);
    Json j = graph_view(id, ws.entry(id));
    j["warnings"] = warnings;
    return {201, j};
  }

  Service::Response apply(const std::string& id, const Json& body) {
    Strategy steps;
    if (body.is_object() && body.contains("strategy"))
      steps = strategy_from_json(body["strategy"]);
    else
      steps.push_back(intervention_from_json(body.is_object() && body.contains("intervention") ? body["intervention"]
                                                                                               : body));
    std::unique_lock lock(ws_mutex);
    auto& e = ws.entry(id);
    bool effective = false;
    for (const auto& k : steps) {
      Graph before = e.head;
      ws.apply(id, k);
      effective = effective || ws.entry(id).head != before;
    }
    Json j = graph_view(id, ws.entry(id));
    j["effective"] = effective;
    return {200, j};
  }

  Service::Response undo(const std::string& id) {
    std::unique_lock lock(ws_mutex);
    Intervention k = ws.undo(id);
    Json j = graph_view(id, ws.entry(id));
    j["undone"] = to_json(k);
    return {200, j};
  }

  Service::Response put_preset(const std::string& pid, const Json& body) {
    auto p = preset_from_json(body);
    Json evidence;
    if (p.preset.acceptance.q.kind == QKind::StressProbability) {
      evidence = {{"checked", false}, {"reason", "stress acceptance is not sampled at registration"}};
    } else {
      bool und = q_requires_undirected(p.preset.acceptance.q.kind);
      std::vector<Graph> pop;
      for (std::uint64_t i = 0; i < 12; ++i) {
        std::size_t n = 2 + i % 3;
        pop.push_back(und ? random_undirected(n, 0.5, hash_key(17, {i})) : random_digraph(n, 0.5, hash_key(17, {i})));
      }
      auto v = is_risk_reducing(p.preset.iset, p.preset.acceptance, pop, 2, 2000);
      evidence = {{"checked", true}, {"graphs", v.checked_graphs}, {"counterexample", v.counterexample}};
      if (v.counterexample) {
        evidence["graph"] = graph_to_json(v.graph);
        evidence["strategy"] = to_json(v.strategy);
      }
    }
    std::unique_lock lock(ws_mutex);
    ws.presets[pid] = body;
    return {200, {{"id", pid}, {"risk_reducing", evidence}}};
  }
};

Service::Service(unsigned workers) : impl_(std::make_unique<Impl>(workers)) {
  auto fwd = [this](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> q;
    for (const auto& [k, v] : req.params) q[k] = v;
    auto r = handle(req.method, req.path, q, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  impl_->server.Get(".*", fwd);
  impl_->server.Post(".*", fwd);
  impl_->server.Put(".*", fwd);
  impl_->server.Delete(".*", fwd);
}

Service::~Service() {
  stop();
  drain();
}

void Service::drain() {
  std::vector<std::thread> ts;
  {
    std::lock_guard lock(impl_->jobs_mutex);
    ts.swap(impl_->threads);
  }
  for (auto& t : ts)
    if (t.joinable()) t.join();
}

int Service::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

void Service::listen() { impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
}

Service::Response Service::handle(const std::string& method, const std::string& path,
                                  const std::map<std::string, std::string>& query, const std::string& body) {
  auto& I = *impl_;
  try {
    auto parts = split_path(path);
    auto json_body = [&]() -> Json {
      if (body.find_first_not_of(" \t\r\n") == std::string::npos) return Json::object();
      return Json::parse(body);
    };
    auto route = [&](std::size_t n, const char* m) { return parts.size() == n && method == m; };
    if (parts.empty()) throw Error("UnknownRoute", "no route for " + method + " " + path);
    const std::string& root = parts[0];

    if (root == "spec" && route(1, "GET")) return {200, openapi()};
    if (root == "workspace") {
      if (route(1, "GET")) {
        std::shared_lock lock(I.ws_mutex);
        return {200, I.ws.to_json()};
      }
      if (route(1, "PUT")) {
        Workspace w = Workspace::from_json(json_body());
        std::unique_lock lock(I.ws_mutex);
        I.ws = std::move(w);
        return {200, {{"graphs", I.ws.graphs.size()}, {"presets", I.ws.presets.size()}}};
      }
    }
    if (root == "jobs" && route(2, "GET")) return I.job(parts[1]);
    if (root == "presets") {
      if (route(1, "GET")) {
        std::shared_lock lock(I.ws_mutex);
        Json ids = Json::array();
        for (const auto& [id, p] : I.ws.presets) ids.push_back(id);
        Json names = Json::array();
        for (const auto& n : acceptance_preset_names()) names.push_back(n);
        return {200, {{"presets", ids}, {"acceptance_presets", names}}};
      }
      if (route(2, "PUT")) return I.put_preset(parts[1], json_body());
      if (route(2, "GET")) {
        std::shared_lock lock(I.ws_mutex);
        auto it = I.ws.presets.find(parts[1]);
        if (it == I.ws.presets.end()) throw Error("UnknownId", "no preset '" + parts[1] + "'");
        return {200, it->second};
      }
    }
    if (root == "graphs") {
      if (route(1, "POST")) return I.post_graph(body);
      if (route(1, "GET")) {
        std::shared_lock lock(I.ws_mutex);
        Json ids = Json::array();
        for (const auto& [id, e] : I.ws.graphs) ids.push_back(id);
        return {200, {{"graphs", ids}}};
      }
      if (parts.size() >= 2) {
        const std::string& id = parts[1];
        if (route(2, "GET")) {
          auto e = I.snapshot(id);
          return {200, graph_view(id, e)};
        }
        if (parts.size() == 3) {
          const std::string& op = parts[2];
          if (op == "metrics" && method == "GET") {
            auto e = I.snapshot(id);
            std::vector<std::string> kinds;
            if (auto it = query.find("kinds"); it != query.end()) {
              std::stringstream ss(it->second);
              std::string k;
              while (std::getline(ss, k, ','))
                if (!k.empty()) kinds.push_back(k);
            }
            return {200, {{"id", id}, {"metrics", metrics_report(e.head, kinds)}}};
          }
          if (method == "POST") {
            if (op == "apply") return I.apply(id, json_body());
            if (op == "undo") return I.undo(id);
            if (op == "evaluate") return I.run("evaluate", id, json_body(), &Impl::do_evaluate);
            if (op == "cost") return I.run("cost", id, json_body(), &Impl::do_cost);
            if (op == "stress") return I.run("stress", id, json_body(), &Impl::do_stress);
            if (op == "rho") return I.run("rho", id, json_body(), &Impl::do_rho);
            if (op == "suggest") return I.run("suggest", id, json_body(), &Impl::do_suggest);
          }
        }
      }
    }
    throw Error("UnknownRoute", "no route for " + method + " " + path);
  } catch (const Error& e) {
    return error_response(e);
  } catch (const nlohmann::json::exception& e) {
    return {400, {{"error", "Malformed"}, {"message", e.what()}}};
  }
}

Json Service::openapi() {
  auto op = [](const std::string& summary, bool body) {
    Json o = {{"summary", summary},
              {"responses",
               {{"200", {{"description", "ok"}}},
                {"400", {{"description", "validation error"}}},
                {"404", {{"description", "unknown id"}}},
                {"422", {{"description", "domain error with machine-readable code"}}}}}};
    if (body)
      o["requestBody"] = {{"content", {{"application/json", {{"schema", {{"type", "object"}}}}}}}};
    return o;
  };
  Json paths = {
      {"/graphs", {{"post", op("upload a graph (JSON or edge-list text)", true)}, {"get", op("list graph ids", false)}}},
      {"/graphs/{id}", {{"get", op("current graph, serialization and history", false)}}},
      {"/graphs/{id}/metrics", {{"get", op("metrics; ?kinds=a,b selects a subset", false)}}},
      {"/graphs/{id}/apply", {{"post", op("apply an intervention or a strategy", true)}}},
      {"/graphs/{id}/undo", {{"post", op("undo the last applied step (409 when history is empty)", false)}}},
      {"/graphs/{id}/evaluate", {{"post", op("acceptance verdict for a spec or preset name", true)}}},
      {"/graphs/{id}/cost", {{"post", op("cost of a strategy or of reaching a target", true)}}},
      {"/graphs/{id}/stress", {{"post", op("SIR stress estimate; needs seed; async with \"async\": true", true)}}},
      {"/graphs/{id}/rho", {{"post", op("risk measure for a preset; async with \"async\": true", true)}}},
      {"/graphs/{id}/suggest", {{"post", op("ranked greedy strategies", true)}}},
      {"/jobs/{id}", {{"get", op("poll an async job", false)}}},
      {"/presets", {{"get", op("registered presets and built-in acceptance presets", false)}}},
      {"/presets/{id}", {{"put", op("register a preset with risk-reducing evidence", true)},
                         {"get", op("a registered preset", false)}}},
      {"/workspace", {{"get", op("save the workspace", false)}, {"put", op("load a workspace", true)}}},
      {"/spec", {{"get", op("this document", false)}}}};
  return {{"openapi", "3.0.3"}, {"info", {{"title", "netres service"}, {"version", "1.0.0"}}}, {"paths", paths}};
}

}  // namespace netres

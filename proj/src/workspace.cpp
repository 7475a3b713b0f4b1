#include "netres/workspace.hpp"

namespace netres {

std::uint64_t graph_hash(const Graph& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_graph(g)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string Workspace::add_graph(const Graph& g, bool undirected) {
  std::string id = "g" + std::to_string(next_id++);
  graphs[id] = GraphEntry{g, g, undirected, {}};
  return id;
}

GraphEntry& Workspace::entry(const std::string& id) {
  auto it = graphs.find(id);
  if (it == graphs.end()) throw Error("UnknownId", "no graph '" + id + "'");
  return it->second;
}

const GraphEntry& Workspace::entry(const std::string& id) const {
  auto it = graphs.find(id);
  if (it == graphs.end()) throw Error("UnknownId", "no graph '" + id + "'");
  return it->second;
}

const Graph& Workspace::apply(const std::string& id, const Intervention& k) {
  auto& e = entry(id);
  validate(k);
  Graph next = netres::apply(k, e.head);
  e.history.push_back({k, graph_hash(e.head)});
  e.head = std::move(next);
  return e.head;
}

Intervention Workspace::undo(const std::string& id) {
  auto& e = entry(id);
  if (e.history.empty()) throw Error("EmptyHistory", "nothing to undo on '" + id + "'");
  Intervention last = e.history.back().step;
  std::uint64_t want = e.history.back().prior_hash;
  e.history.pop_back();
  Graph g = e.base;
  for (const auto& h : e.history) g = netres::apply(h.step, g);
  if (graph_hash(g) != want) throw Error("CorruptHistory", "replay of '" + id + "' does not match its record");
  e.head = std::move(g);
  return last;
}

Json Workspace::to_json() const {
  Json gs = Json::object();
  for (const auto& [id, e] : graphs) {
    Json hist = Json::array();
    for (const auto& h : e.history) hist.push_back(netres::to_json(h.step));
    gs[id] = {{"base", graph_to_json(e.base, e.undirected)},
              {"history", hist},
              {"head_hash", std::to_string(graph_hash(e.head))}};
  }
  Json ps = Json::object();
  for (const auto& [id, p] : presets) ps[id] = p;
  return {{"graphs", gs}, {"presets", ps}, {"next_id", next_id}};
}

Workspace Workspace::from_json(const Json& j) {
  if (!j.is_object()) throw Error("Malformed", "workspace must be an object");
  Workspace w;
  w.next_id = j.value("next_id", std::uint64_t{1});
  if (j.contains("graphs")) {
    if (!j["graphs"].is_object()) throw Error("Malformed", "graphs must be an object");
    for (const auto& [id, gj] : j["graphs"].items()) {
      if (!gj.is_object() || !gj.contains("base")) throw Error("Malformed", "graph '" + id + "' lacks a base");
      auto pg = graph_from_json(gj["base"]);
      GraphEntry e{pg.graph, pg.graph, pg.undirected, {}};
      for (const auto& step : strategy_from_json(gj.value("history", Json::array()))) {
        e.history.push_back({step, graph_hash(e.head)});
        e.head = netres::apply(step, e.head);
      }
      if (gj.contains("head_hash") && gj["head_hash"] != std::to_string(graph_hash(e.head)))
        throw Error("CorruptHistory", "history of '" + id + "' does not reproduce its head");
      w.graphs[id] = std::move(e);
    }
  }
  if (j.contains("presets")) {
    if (!j["presets"].is_object()) throw Error("Malformed", "presets must be an object");
    for (const auto& [id, p] : j["presets"].items()) {
      preset_from_json(p);
      w.presets[id] = p;
    }
  }
  return w;
}

}  // namespace netres

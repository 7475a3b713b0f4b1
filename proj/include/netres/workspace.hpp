#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "netres/io.hpp"

namespace netres {

// FNV-1a over the canonical serialization
std::uint64_t graph_hash(const Graph& g);

struct HistoryEntry {
  Intervention step;
  std::uint64_t prior_hash = 0;
};

struct GraphEntry {
  Graph base;
  Graph head;
  bool undirected = false;
  std::vector<HistoryEntry> history;
};

// Graphs by id with their applied history, plus named presets kept as JSON.
struct Workspace {
  std::map<std::string, GraphEntry> graphs;
  std::map<std::string, Json> presets;
  std::uint64_t next_id = 1;

  std::string add_graph(const Graph& g, bool undirected);
  GraphEntry& entry(const std::string& id);
  const GraphEntry& entry(const std::string& id) const;
  const Graph& apply(const std::string& id, const Intervention& k);
  // throws EmptyHistory
  Intervention undo(const std::string& id);

  Json to_json() const;
  // replays every history and checks the recorded heads
  static Workspace from_json(const Json& j);
};

}  // namespace netres

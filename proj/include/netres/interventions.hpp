#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "netres/graph.hpp"

namespace netres {

namespace iv {
struct Identity {};
struct EdgeDel { NodeId v, w; };
struct EdgeAdd { NodeId v, w; };
struct NodeDel { NodeId v; };
struct NodeAdd { NodeId v; };
struct Isolate { std::set<NodeId> nodes; };
struct EdgeShift { Edge from, to; };
struct NodeSplit { std::set<Edge> edges; NodeId v, fresh; };
struct NodeMerge { NodeId v, other; };
struct NodeCopy { NodeId v, fresh; };
struct UEdgeDel { NodeId v, w; };
struct UEdgeAdd { NodeId v, w; };
struct UEdgeShift { Edge from, to; };
struct USplit { std::set<Edge> edges; NodeId v, fresh; };
struct Kelmans { NodeId v, u; };
}  // namespace iv

using Intervention = std::variant<iv::Identity, iv::EdgeDel, iv::EdgeAdd, iv::NodeDel, iv::NodeAdd, iv::Isolate,
                                  iv::EdgeShift, iv::NodeSplit, iv::NodeMerge, iv::NodeCopy, iv::UEdgeDel,
                                  iv::UEdgeAdd, iv::UEdgeShift, iv::USplit, iv::Kelmans>;

// same order as the variant alternatives
enum class Kind {
  Identity, EdgeDel, EdgeAdd, NodeDel, NodeAdd, Isolate, EdgeShift, NodeSplit,
  NodeMerge, NodeCopy, UEdgeDel, UEdgeAdd, UEdgeShift, USplit, Kelmans
};

Kind kind_of(const Intervention& k);
std::string kind_name(Kind k);
Kind kind_from_name(const std::string& s);

using Strategy = std::vector<Intervention>;

// Throws MalformedIntervention for structurally invalid values; semantic
// no-ops return g unchanged.
Graph apply(const Intervention& k, const Graph& g);
Graph apply_strategy(const Strategy& s, const Graph& g);
void validate(const Intervention& k);
bool is_effective(const Intervention& k, const Graph& g);

// text form, e.g. "edge_del 3 7" or "node_split v=2 new=9 edges=[(2,5),(5,2)]"
std::string to_text(const Intervention& k);
Intervention intervention_from_text(const std::string& line);
std::string to_text(const Strategy& s);  // one step per line
Strategy strategy_from_text(const std::string& text);
// compact "a; b; c" form used for tie-breaking and reports
std::string encode(const Strategy& s);

// Which interventions are admissible. Generated candidates draw new labels
// from the smallest unused one.
struct InterventionSet {
  std::set<Kind> kinds;
  std::optional<std::set<NodeId>> scope;  // non-fresh node arguments must lie here
  std::size_t max_split_edges = 10;       // skip splits of nodes with more incident edges
  std::size_t max_isolate_nodes = 10;     // subsets only enumerated up to this graph size
  std::optional<std::size_t> max_nodes;   // no growth beyond this many nodes

  bool contains(const Intervention& k) const;
  bool empty() const { return kinds.empty(); }
  std::string to_string() const;
};

InterventionSet iset_from_string(const std::string& csv);

// all admissible interventions that change g, in a fixed order
std::vector<Intervention> candidates(const Graph& g, const InterventionSet& iset);

struct ReachResult {
  std::vector<Graph> states;   // BFS order, states[0] == g
  std::vector<Strategy> paths; // a shortest strategy reaching each state
  bool incomplete = false;     // budget hit before exhausting depth
  bool depth_limited = false;  // frontier still had unseen successors (probe_frontier only)
  std::set<std::string> canonical() const;
};

ReachResult reachable_set(const Graph& g, const InterventionSet& iset, std::size_t max_depth,
                          std::size_t max_states, bool canonical_dedup = false, bool probe_frontier = false);

struct SelfReverseVerdict {
  bool counterexample = false;
  Graph graph;
  Strategy alpha, kappa;  // kappa(alpha(graph)) == graph, alpha(graph) != graph
};

SelfReverseVerdict check_not_partially_self_reverse(const InterventionSet& iset, const std::vector<Graph>& samples,
                                                    std::size_t depth, std::size_t max_states = 20000);

}  // namespace netres

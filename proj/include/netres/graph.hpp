#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace netres {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// Domain error carrying a machine-readable code such as "NodeAbsent".
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Finite directed graph without self-loops. Undirected graphs are the
// symmetric ones.
class Graph {
 public:
  Graph() = default;

  bool has_node(NodeId v) const { return nodes_.count(v) != 0; }
  bool has_edge(NodeId v, NodeId w) const { return edges_.count({v, w}) != 0; }

  // returns false if v was already present
  bool add_node(NodeId v) { return nodes_.insert(v).second; }
  // throws SelfLoop / DanglingEdge; returns false on duplicates
  bool add_edge(NodeId v, NodeId w);
  bool remove_edge(NodeId v, NodeId w) { return edges_.erase({v, w}) != 0; }
  bool remove_node(NodeId v);

  const std::set<NodeId>& nodes() const { return nodes_; }
  const std::set<Edge>& edges() const { return edges_; }
  std::size_t size() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return nodes_.empty(); }

  std::vector<NodeId> out_neighbors(NodeId v) const;
  std::vector<NodeId> in_neighbors(NodeId v) const;

  // smallest label not in use
  NodeId fresh_label() const;
  bool is_undirected() const;

  friend bool operator==(const Graph&, const Graph&) = default;
  friend auto operator<=>(const Graph& a, const Graph& b) {
    if (auto c = a.nodes_ <=> b.nodes_; c != 0) return c;
    return a.edges_ <=> b.edges_;
  }

 private:
  std::set<NodeId> nodes_;
  std::set<Edge> edges_;
};

struct Degrees {
  std::size_t in = 0;
  std::size_t out = 0;
  double total = 0.0;  // (in + out) / 2
};

Degrees degrees(const Graph& g, NodeId v);

struct Connectivity {
  bool weak = false;
  bool strong = false;
};

Connectivity connectivity(const Graph& g);

// Dense index over the node set, used by the numeric kernels.
struct Indexed {
  std::vector<NodeId> label;
  std::map<NodeId, int> pos;
  std::vector<std::vector<int>> out;
  std::vector<std::vector<int>> in;
  explicit Indexed(const Graph& g);
  int n() const { return static_cast<int>(label.size()); }
};

struct PathMatrix {
  static constexpr int kInfinite = std::numeric_limits<int>::max();
  std::vector<NodeId> label;
  std::vector<std::vector<int>> len;

  int at(NodeId v, NodeId w) const;
  bool finite(int i, int j) const { return len[i][j] != kInfinite; }
};

PathMatrix shortest_paths(const Graph& g);
std::vector<int> bfs_lengths(const Indexed& ix, int source, bool reverse = false);

Graph undirected_closure(const Graph& g);

constexpr std::size_t kIsoCap = 12;

// Equal strings iff the graphs are isomorphic. Throws TooLarge above cap.
std::string canonical_form(const Graph& g, std::size_t cap = kIsoCap);
bool isomorphic(const Graph& a, const Graph& b, std::size_t cap = kIsoCap);

std::set<NodeId> out_component(const Graph& g, NodeId v);

Graph relabel(const Graph& g, const std::map<NodeId, NodeId>& perm);

// standard families on labels 0..n-1; star hubs are node 0
namespace families {
Graph edgeless(std::size_t n);
Graph directed_star(std::size_t n);
Graph directed_line(std::size_t n);
Graph directed_ring(std::size_t n);
Graph bidirectional_ring(std::size_t n);
Graph complete(std::size_t n);
Graph undirected_line(std::size_t n);
Graph undirected_star(std::size_t n);
}  // namespace families

// nodes 0..n-1 (or the given labels) with the given directed edges
Graph make_graph(std::size_t n, const std::vector<Edge>& edges);
Graph make_undirected(std::size_t n, const std::vector<Edge>& edges);

// disjoint union; labels of b are shifted past a's maximum
Graph disjoint_union(const Graph& a, const Graph& b);

std::string describe(const Graph& g);

}  // namespace netres

#include "netres/graph.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace netres {

bool Graph::add_edge(NodeId v, NodeId w) {
  if (v == w) throw Error("SelfLoop", "self-loop on node " + std::to_string(v));
  if (!has_node(v) || !has_node(w))
    throw Error("DanglingEdge", "edge (" + std::to_string(v) + "," + std::to_string(w) +
                                    ") has an endpoint outside the node set");
  return edges_.insert({v, w}).second;
}

bool Graph::remove_node(NodeId v) {
  if (!nodes_.erase(v)) return false;
  for (auto it = edges_.begin(); it != edges_.end();) {
    if (it->first == v || it->second == v)
      it = edges_.erase(it);
    else
      ++it;
  }
  return true;
}

std::vector<NodeId> Graph::out_neighbors(NodeId v) const {
  std::vector<NodeId> r;
  for (auto it = edges_.lower_bound({v, 0}); it != edges_.end() && it->first == v; ++it)
    r.push_back(it->second);
  return r;
}

std::vector<NodeId> Graph::in_neighbors(NodeId v) const {
  std::vector<NodeId> r;
  for (const auto& e : edges_)
    if (e.second == v) r.push_back(e.first);
  return r;
}

NodeId Graph::fresh_label() const {
  NodeId c = 0;
  for (NodeId v : nodes_) {
    if (v != c) break;
    ++c;
  }
  return c;
}

bool Graph::is_undirected() const {
  for (const auto& e : edges_)
    if (!edges_.count({e.second, e.first})) return false;
  return true;
}

Degrees degrees(const Graph& g, NodeId v) {
  if (!g.has_node(v)) throw Error("NodeAbsent", "node " + std::to_string(v) + " not in graph");
  Degrees d;
  for (const auto& e : g.edges()) {
    if (e.first == v) ++d.out;
    if (e.second == v) ++d.in;
  }
  d.total = (d.in + d.out) / 2.0;
  return d;
}

Indexed::Indexed(const Graph& g) {
  label.assign(g.nodes().begin(), g.nodes().end());
  for (int i = 0; i < static_cast<int>(label.size()); ++i) pos[label[i]] = i;
  out.resize(label.size());
  in.resize(label.size());
  for (const auto& e : g.edges()) {
    int a = pos.at(e.first), b = pos.at(e.second);
    out[a].push_back(b);
    in[b].push_back(a);
  }
}

std::vector<int> bfs_lengths(const Indexed& ix, int source, bool reverse) {
  std::vector<int> d(ix.n(), PathMatrix::kInfinite);
  std::deque<int> q{source};
  d[source] = 0;
  const auto& adj = reverse ? ix.in : ix.out;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int w : adj[u])
      if (d[w] == PathMatrix::kInfinite) {
        d[w] = d[u] + 1;
        q.push_back(w);
      }
  }
  return d;
}

Connectivity connectivity(const Graph& g) {
  if (g.empty()) throw Error("EmptyGraph", "connectivity of the empty graph");
  Indexed ix(g);
  auto reach_all = [](const std::vector<int>& d) {
    return std::all_of(d.begin(), d.end(), [](int x) { return x != PathMatrix::kInfinite; });
  };
  Connectivity c;
  c.strong = reach_all(bfs_lengths(ix, 0)) && reach_all(bfs_lengths(ix, 0, true));
  Indexed ux(undirected_closure(g));
  c.weak = reach_all(bfs_lengths(ux, 0));
  return c;
}

int PathMatrix::at(NodeId v, NodeId w) const {
  auto i = std::lower_bound(label.begin(), label.end(), v);
  auto j = std::lower_bound(label.begin(), label.end(), w);
  if (i == label.end() || *i != v || j == label.end() || *j != w)
    throw Error("NodeAbsent", "node not in path matrix");
  return len[i - label.begin()][j - label.begin()];
}

PathMatrix shortest_paths(const Graph& g) {
  Indexed ix(g);
  PathMatrix pm;
  pm.label = ix.label;
  for (int i = 0; i < ix.n(); ++i) pm.len.push_back(bfs_lengths(ix, i));
  return pm;
}

Graph undirected_closure(const Graph& g) {
  Graph r = g;
  for (const auto& e : g.edges()) r.add_edge(e.second, e.first);
  return r;
}

std::set<NodeId> out_component(const Graph& g, NodeId v) {
  if (!g.has_node(v)) throw Error("NodeAbsent", "node " + std::to_string(v) + " not in graph");
  std::set<NodeId> seen{v};
  std::vector<NodeId> stack{v};
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    for (NodeId w : g.out_neighbors(u))
      if (seen.insert(w).second) stack.push_back(w);
  }
  return seen;
}

Graph relabel(const Graph& g, const std::map<NodeId, NodeId>& perm) {
  auto map = [&](NodeId v) {
    auto it = perm.find(v);
    return it == perm.end() ? v : it->second;
  };
  Graph r;
  for (NodeId v : g.nodes()) r.add_node(map(v));
  if (r.size() != g.size()) throw Error("Malformed", "relabeling is not injective");
  for (const auto& e : g.edges()) r.add_edge(map(e.first), map(e.second));
  return r;
}

Graph make_graph(std::size_t n, const std::vector<Edge>& edges) {
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.add_node(static_cast<NodeId>(i));
  for (const auto& e : edges) g.add_edge(e.first, e.second);
  return g;
}

Graph make_undirected(std::size_t n, const std::vector<Edge>& edges) {
  Graph g = make_graph(n, edges);
  return undirected_closure(g);
}

namespace families {

Graph edgeless(std::size_t n) { return make_graph(n, {}); }

Graph directed_star(std::size_t n) {
  Graph g = edgeless(n);
  for (std::size_t i = 1; i < n; ++i) g.add_edge(0, static_cast<NodeId>(i));
  return g;
}

Graph directed_line(std::size_t n) {
  Graph g = edgeless(n);
  for (std::size_t i = 1; i < n; ++i) g.add_edge(static_cast<NodeId>(i - 1), static_cast<NodeId>(i));
  return g;
}

Graph directed_ring(std::size_t n) {
  Graph g = directed_line(n);
  if (n >= 2) g.add_edge(static_cast<NodeId>(n - 1), 0);
  return g;
}

Graph bidirectional_ring(std::size_t n) { return undirected_closure(directed_ring(n)); }

Graph complete(std::size_t n) {
  Graph g = edgeless(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) g.add_edge(static_cast<NodeId>(i), static_cast<NodeId>(j));
  return g;
}

Graph undirected_line(std::size_t n) { return undirected_closure(directed_line(n)); }
Graph undirected_star(std::size_t n) { return undirected_closure(directed_star(n)); }

}  // namespace families

Graph disjoint_union(const Graph& a, const Graph& b) {
  NodeId shift = a.empty() ? 0 : *a.nodes().rbegin() + 1;
  Graph r = a;
  for (NodeId v : b.nodes()) r.add_node(v + shift);
  for (const auto& e : b.edges()) r.add_edge(e.first + shift, e.second + shift);
  return r;
}

std::string describe(const Graph& g) {
  std::ostringstream os;
  os << "V={";
  bool first = true;
  for (NodeId v : g.nodes()) {
    os << (first ? "" : ",") << v;
    first = false;
  }
  os << "} E={";
  first = true;
  for (const auto& e : g.edges()) {
    os << (first ? "" : ",") << "(" << e.first << "," << e.second << ")";
    first = false;
  }
  os << "}";
  return os.str();
}

}  // namespace netres

#include "netres/interventions.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <sstream>

namespace netres {

namespace {

const char* const kNames[] = {"identity",  "edge_del",   "edge_add",  "node_del",   "node_add",
                              "isolate",   "edge_shift", "node_split", "node_merge", "node_copy",
                              "uedge_del", "uedge_add",  "uedge_shift", "usplit",    "kelmans"};

[[noreturn]] void malformed(const std::string& msg) { throw Error("MalformedIntervention", msg); }

void shift(Graph& g, const Edge& from, const Edge& to) {
  if (!g.has_edge(from.first, from.second)) return;
  if (to.first == to.second || !g.has_node(to.first) || !g.has_node(to.second)) return;
  if (g.has_edge(to.first, to.second)) return;
  g.remove_edge(from.first, from.second);
  g.add_edge(to.first, to.second);
}

Graph split(const Graph& g, const std::set<Edge>& l, NodeId v, NodeId fresh) {
  if (!g.has_node(v) || g.has_node(fresh)) return g;
  Graph r = g;
  r.add_node(fresh);
  for (const auto& e : l) {
    if (!g.has_edge(e.first, e.second)) continue;
    if (e.first == v) {
      r.remove_edge(v, e.second);
      r.add_edge(fresh, e.second);
    } else if (e.second == v) {
      r.remove_edge(e.first, v);
      r.add_edge(e.first, fresh);
    }
  }
  return r;
}

struct Applier {
  const Graph& g;
  Graph operator()(const iv::Identity&) const { return g; }
  Graph operator()(const iv::EdgeDel& k) const {
    Graph r = g;
    r.remove_edge(k.v, k.w);
    return r;
  }
  Graph operator()(const iv::EdgeAdd& k) const {
    Graph r = g;
    if (r.has_node(k.v) && r.has_node(k.w)) r.add_edge(k.v, k.w);
    return r;
  }
  Graph operator()(const iv::NodeDel& k) const {
    Graph r = g;
    r.remove_node(k.v);
    return r;
  }
  Graph operator()(const iv::NodeAdd& k) const {
    Graph r = g;
    r.add_node(k.v);
    return r;
  }
  Graph operator()(const iv::Isolate& k) const {
    Graph r;
    for (NodeId v : g.nodes()) r.add_node(v);
    for (const auto& e : g.edges())
      if (k.nodes.count(e.first) == k.nodes.count(e.second)) r.add_edge(e.first, e.second);
    return r;
  }
  Graph operator()(const iv::EdgeShift& k) const {
    Graph r = g;
    shift(r, k.from, k.to);
    return r;
  }
  Graph operator()(const iv::NodeSplit& k) const { return split(g, k.edges, k.v, k.fresh); }
  Graph operator()(const iv::NodeMerge& k) const {
    if (!g.has_node(k.v) || !g.has_node(k.other)) return g;
    Graph r = g;
    for (NodeId w : g.out_neighbors(k.other))
      if (w != k.v) r.add_edge(k.v, w);
    for (NodeId w : g.in_neighbors(k.other))
      if (w != k.v) r.add_edge(w, k.v);
    r.remove_node(k.other);
    return r;
  }
  Graph operator()(const iv::NodeCopy& k) const {
    if (!g.has_node(k.v) || g.has_node(k.fresh)) return g;
    Graph r = g;
    r.add_node(k.fresh);
    for (NodeId w : g.out_neighbors(k.v)) r.add_edge(k.fresh, w);
    for (NodeId w : g.in_neighbors(k.v)) r.add_edge(w, k.fresh);
    return r;
  }
  Graph operator()(const iv::UEdgeDel& k) const {
    Graph r = g;
    r.remove_edge(k.v, k.w);
    r.remove_edge(k.w, k.v);
    return r;
  }
  Graph operator()(const iv::UEdgeAdd& k) const {
    Graph r = g;
    if (r.has_node(k.v) && r.has_node(k.w)) {
      r.add_edge(k.v, k.w);
      r.add_edge(k.w, k.v);
    }
    return r;
  }
  Graph operator()(const iv::UEdgeShift& k) const {
    Graph r = g;
    shift(r, k.from, k.to);
    shift(r, {k.from.second, k.from.first}, {k.to.second, k.to.first});
    return r;
  }
  Graph operator()(const iv::USplit& k) const { return split(g, k.edges, k.v, k.fresh); }
  Graph operator()(const iv::Kelmans& k) const {
    if (k.v == k.u || !g.has_node(k.v) || !g.has_node(k.u)) return g;
    Graph r = g;
    for (NodeId w : g.out_neighbors(k.v)) {
      if (w == k.u || !g.has_edge(w, k.v)) continue;
      if (g.has_edge(k.u, w) || g.has_edge(w, k.u)) continue;
      r.remove_edge(k.v, w);
      r.remove_edge(w, k.v);
      r.add_edge(k.u, w);
      r.add_edge(w, k.u);
    }
    return r;
  }
};

std::string pair_text(const Edge& e) { return "(" + std::to_string(e.first) + "," + std::to_string(e.second) + ")"; }

std::string edges_text(const std::set<Edge>& l) {
  std::string s = "[";
  bool first = true;
  for (const auto& e : l) {
    s += (first ? "" : ",") + pair_text(e);
    first = false;
  }
  return s + "]";
}

std::vector<long long> integers(const std::string& s) {
  std::vector<long long> r;
  for (std::size_t i = 0; i < s.size();) {
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      r.push_back(std::stoll(s.substr(i, j - i)));
      i = j;
    } else if (s[i] == '-') {
      malformed("negative node label in '" + s + "'");
    } else {
      ++i;
    }
  }
  return r;
}

NodeId node_of(long long x) {
  if (x < 0 || x > 0xffffffffLL) malformed("node label out of range");
  return static_cast<NodeId>(x);
}

}  // namespace

Kind kind_of(const Intervention& k) { return static_cast<Kind>(k.index()); }
std::string kind_name(Kind k) { return kNames[static_cast<int>(k)]; }

Kind kind_from_name(const std::string& s) {
  for (int i = 0; i < 15; ++i)
    if (s == kNames[i]) return static_cast<Kind>(i);
  malformed("unknown intervention '" + s + "'");
}

void validate(const Intervention& k) {
  if (auto* a = std::get_if<iv::EdgeAdd>(&k); a && a->v == a->w) malformed("edge_add would create a self-loop");
  if (auto* a = std::get_if<iv::UEdgeAdd>(&k); a && a->v == a->w) malformed("uedge_add would create a self-loop");
  if (auto* m = std::get_if<iv::NodeMerge>(&k); m && m->v == m->other) malformed("node_merge of a node with itself");
  if (auto* u = std::get_if<iv::USplit>(&k))
    for (const auto& e : u->edges)
      if (!u->edges.count({e.second, e.first})) malformed("usplit edge set is not symmetric");
}

Graph apply(const Intervention& k, const Graph& g) {
  validate(k);
  return std::visit(Applier{g}, k);
}

Graph apply_strategy(const Strategy& s, const Graph& g) {
  Graph r = g;
  for (const auto& k : s) r = netres::apply(k, r);
  return r;
}

bool is_effective(const Intervention& k, const Graph& g) { return netres::apply(k, g) != g; }

std::string to_text(const Intervention& k) {
  std::string name = kind_name(kind_of(k));
  auto n = [](NodeId v) { return std::to_string(v); };
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, iv::Identity>) {
          return name;
        } else if constexpr (std::is_same_v<T, iv::NodeDel> || std::is_same_v<T, iv::NodeAdd>) {
          return name + " " + n(x.v);
        } else if constexpr (std::is_same_v<T, iv::Isolate>) {
          std::string s = name + " {";
          bool first = true;
          for (NodeId v : x.nodes) {
            s += (first ? "" : ",") + n(v);
            first = false;
          }
          return s + "}";
        } else if constexpr (std::is_same_v<T, iv::EdgeShift> || std::is_same_v<T, iv::UEdgeShift>) {
          return name + " " + pair_text(x.from) + " " + pair_text(x.to);
        } else if constexpr (std::is_same_v<T, iv::NodeSplit> || std::is_same_v<T, iv::USplit>) {
          return name + " v=" + n(x.v) + " new=" + n(x.fresh) + " edges=" + edges_text(x.edges);
        } else if constexpr (std::is_same_v<T, iv::NodeMerge>) {
          return name + " " + n(x.v) + " " + n(x.other);
        } else if constexpr (std::is_same_v<T, iv::NodeCopy>) {
          return name + " " + n(x.v) + " " + n(x.fresh);
        } else if constexpr (std::is_same_v<T, iv::Kelmans>) {
          return name + " " + n(x.v) + " " + n(x.u);
        } else {
          return name + " " + n(x.v) + " " + n(x.w);
        }
      },
      k);
}

Intervention intervention_from_text(const std::string& line) {
  std::istringstream is(line);
  std::string name;
  is >> name;
  std::string rest;
  std::getline(is, rest);
  Kind kind = kind_from_name(name);
  auto nums = integers(rest);
  auto need = [&](std::size_t c) {
    if (nums.size() != c) malformed("'" + line + "': expected " + std::to_string(c) + " node labels");
  };
  switch (kind) {
    case Kind::Identity: need(0); return iv::Identity{};
    case Kind::EdgeDel: need(2); return iv::EdgeDel{node_of(nums[0]), node_of(nums[1])};
    case Kind::EdgeAdd: need(2); return iv::EdgeAdd{node_of(nums[0]), node_of(nums[1])};
    case Kind::UEdgeDel: need(2); return iv::UEdgeDel{node_of(nums[0]), node_of(nums[1])};
    case Kind::UEdgeAdd: need(2); return iv::UEdgeAdd{node_of(nums[0]), node_of(nums[1])};
    case Kind::NodeDel: need(1); return iv::NodeDel{node_of(nums[0])};
    case Kind::NodeAdd: need(1); return iv::NodeAdd{node_of(nums[0])};
    case Kind::NodeMerge: need(2); return iv::NodeMerge{node_of(nums[0]), node_of(nums[1])};
    case Kind::NodeCopy: need(2); return iv::NodeCopy{node_of(nums[0]), node_of(nums[1])};
    case Kind::Kelmans: need(2); return iv::Kelmans{node_of(nums[0]), node_of(nums[1])};
    case Kind::Isolate: {
      iv::Isolate k;
      for (auto x : nums) k.nodes.insert(node_of(x));
      return k;
    }
    case Kind::EdgeShift:
    case Kind::UEdgeShift: {
      need(4);
      Edge a{node_of(nums[0]), node_of(nums[1])}, b{node_of(nums[2]), node_of(nums[3])};
      if (kind == Kind::EdgeShift) return iv::EdgeShift{a, b};
      return iv::UEdgeShift{a, b};
    }
    case Kind::NodeSplit:
    case Kind::USplit: {
      auto pv = rest.find("v="), pn = rest.find("new="), pe = rest.find("edges=");
      if (pv == std::string::npos || pn == std::string::npos || pe == std::string::npos || !(pv < pn && pn < pe))
        malformed("'" + line + "': expected v=<node> new=<node> edges=[...]");
      if (nums.size() < 2 || nums.size() % 2 != 0) malformed("'" + line + "': bad edge list");
      std::set<Edge> l;
      for (std::size_t i = 2; i < nums.size(); i += 2) l.insert({node_of(nums[i]), node_of(nums[i + 1])});
      if (kind == Kind::NodeSplit) return iv::NodeSplit{l, node_of(nums[0]), node_of(nums[1])};
      return iv::USplit{l, node_of(nums[0]), node_of(nums[1])};
    }
  }
  malformed("unhandled intervention");
}

std::string to_text(const Strategy& s) {
  std::string r;
  for (const auto& k : s) r += to_text(k) + "\n";
  return r;
}

Strategy strategy_from_text(const std::string& text) {
  Strategy s;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream parts(line);
    std::string step;
    while (std::getline(parts, step, ';'))
      if (step.find_first_not_of(" \t\r") != std::string::npos) s.push_back(intervention_from_text(step));
  }
  return s;
}

std::string encode(const Strategy& s) {
  std::string r;
  for (std::size_t i = 0; i < s.size(); ++i) r += (i ? "; " : "") + to_text(s[i]);
  return r;
}

namespace {

std::vector<NodeId> node_args(const Intervention& k) {
  return std::visit(
      [](const auto& x) -> std::vector<NodeId> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, iv::Identity>) return {};
        else if constexpr (std::is_same_v<T, iv::NodeDel> || std::is_same_v<T, iv::NodeAdd>) return {x.v};
        else if constexpr (std::is_same_v<T, iv::Isolate>) return {x.nodes.begin(), x.nodes.end()};
        else if constexpr (std::is_same_v<T, iv::EdgeShift> || std::is_same_v<T, iv::UEdgeShift>)
          return {x.from.first, x.from.second, x.to.first, x.to.second};
        else if constexpr (std::is_same_v<T, iv::NodeSplit> || std::is_same_v<T, iv::USplit> ||
                           std::is_same_v<T, iv::NodeCopy>)
          return {x.v};
        else if constexpr (std::is_same_v<T, iv::NodeMerge>) return {x.v, x.other};
        else if constexpr (std::is_same_v<T, iv::Kelmans>) return {x.v, x.u};
        else return {x.v, x.w};
      },
      k);
}

}  // namespace

bool InterventionSet::contains(const Intervention& k) const {
  if (std::holds_alternative<iv::Identity>(k)) return true;
  if (!kinds.count(kind_of(k))) return false;
  if (scope)
    for (NodeId v : node_args(k))
      if (!scope->count(v)) return false;
  return true;
}

std::string InterventionSet::to_string() const {
  std::string s;
  for (Kind k : kinds) s += (s.empty() ? "" : ",") + kind_name(k);
  return s;
}

InterventionSet iset_from_string(const std::string& csv) {
  InterventionSet s;
  std::istringstream is(csv);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok.erase(0, tok.find_first_not_of(" \t"));
    tok.erase(tok.find_last_not_of(" \t") + 1);
    if (tok.empty()) continue;
    s.kinds.insert(kind_from_name(tok));
  }
  return s;
}

std::vector<Intervention> candidates(const Graph& g, const InterventionSet& iset) {
  std::vector<Intervention> out;
  auto push = [&](Intervention k) {
    if (iset.contains(k) && netres::apply(k, g) != g) out.push_back(std::move(k));
  };
  const std::vector<NodeId> nodes(g.nodes().begin(), g.nodes().end());
  const NodeId fresh = g.fresh_label();
  const bool can_grow = !iset.max_nodes || g.size() < *iset.max_nodes;
  auto has = [&](Kind k) { return iset.kinds.count(k) != 0; };

  if (has(Kind::EdgeDel))
    for (const auto& e : g.edges()) push(iv::EdgeDel{e.first, e.second});
  if (has(Kind::EdgeAdd))
    for (NodeId v : nodes)
      for (NodeId w : nodes)
        if (v != w && !g.has_edge(v, w)) push(iv::EdgeAdd{v, w});
  if (has(Kind::NodeDel))
    for (NodeId v : nodes) push(iv::NodeDel{v});
  if (has(Kind::NodeAdd) && can_grow) push(iv::NodeAdd{fresh});
  if (has(Kind::Isolate) && nodes.size() <= iset.max_isolate_nodes && nodes.size() >= 2) {
    const std::size_t n = nodes.size();
    for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
      iv::Isolate k;
      for (std::size_t i = 0; i < n; ++i)
        if (mask >> i & 1) k.nodes.insert(nodes[i]);
      push(std::move(k));
    }
  }
  if (has(Kind::EdgeShift))
    for (const auto& e : g.edges())
      for (NodeId q : nodes)
        for (NodeId r : nodes)
          if (q != r && !g.has_edge(q, r)) push(iv::EdgeShift{e, {q, r}});
  if (has(Kind::NodeSplit) && can_grow)
    for (NodeId v : nodes) {
      std::vector<Edge> inc;
      for (const auto& e : g.edges())
        if (e.first == v || e.second == v) inc.push_back(e);
      if (inc.size() > iset.max_split_edges) continue;
      for (std::size_t mask = 0; mask < (std::size_t{1} << inc.size()); ++mask) {
        iv::NodeSplit k{{}, v, fresh};
        for (std::size_t i = 0; i < inc.size(); ++i)
          if (mask >> i & 1) k.edges.insert(inc[i]);
        push(std::move(k));
      }
    }
  if (has(Kind::NodeMerge))
    for (NodeId v : nodes)
      for (NodeId w : nodes)
        if (v != w) push(iv::NodeMerge{v, w});
  if (has(Kind::NodeCopy) && can_grow)
    for (NodeId v : nodes) push(iv::NodeCopy{v, fresh});
  if (has(Kind::UEdgeDel))
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i + 1; j < nodes.size(); ++j) push(iv::UEdgeDel{nodes[i], nodes[j]});
  if (has(Kind::UEdgeAdd))
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i + 1; j < nodes.size(); ++j) push(iv::UEdgeAdd{nodes[i], nodes[j]});
  if (has(Kind::UEdgeShift))
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        NodeId v = nodes[i], w = nodes[j];
        if (!g.has_edge(v, w) || !g.has_edge(w, v)) continue;
        for (std::size_t a = 0; a < nodes.size(); ++a)
          for (std::size_t b = a + 1; b < nodes.size(); ++b) {
            NodeId q = nodes[a], r = nodes[b];
            if (g.has_edge(q, r) || g.has_edge(r, q)) continue;
            push(iv::UEdgeShift{{v, w}, {q, r}});
          }
      }
  if (has(Kind::USplit) && can_grow)
    for (NodeId v : nodes) {
      std::set<NodeId> nb;
      for (NodeId w : g.out_neighbors(v)) nb.insert(w);
      for (NodeId w : g.in_neighbors(v)) nb.insert(w);
      std::vector<NodeId> nbv(nb.begin(), nb.end());
      if (nbv.size() > iset.max_split_edges) continue;
      for (std::size_t mask = 0; mask < (std::size_t{1} << nbv.size()); ++mask) {
        iv::USplit k{{}, v, fresh};
        for (std::size_t i = 0; i < nbv.size(); ++i)
          if (mask >> i & 1) {
            k.edges.insert({v, nbv[i]});
            k.edges.insert({nbv[i], v});
          }
        push(std::move(k));
      }
    }
  if (has(Kind::Kelmans))
    for (NodeId v : nodes)
      for (NodeId u : nodes)
        if (v != u) push(iv::Kelmans{v, u});
  return out;
}

std::set<std::string> ReachResult::canonical() const {
  std::set<std::string> r;
  for (const auto& g : states) r.insert(canonical_form(g));
  return r;
}

ReachResult reachable_set(const Graph& g, const InterventionSet& iset, std::size_t max_depth,
                          std::size_t max_states, bool canonical_dedup, bool probe_frontier) {
  ReachResult res;
  std::set<Graph> seen;
  std::set<std::string> seen_canon;
  auto admit = [&](const Graph& h) {
    if (canonical_dedup) return seen_canon.insert(canonical_form(h)).second;
    return seen.insert(h).second;
  };
  admit(g);
  res.states.push_back(g);
  res.paths.push_back({});
  std::size_t level_begin = 0;
  for (std::size_t depth = 0; depth < max_depth; ++depth) {
    std::size_t level_end = res.states.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      const Graph cur = res.states[i];
      const Strategy path = res.paths[i];
      for (const auto& k : candidates(cur, iset)) {
        Graph h = netres::apply(k, cur);
        if (!admit(h)) continue;
        if (res.states.size() >= max_states) {
          res.incomplete = true;
          return res;
        }
        Strategy p = path;
        p.push_back(k);
        res.states.push_back(std::move(h));
        res.paths.push_back(std::move(p));
      }
    }
    if (res.states.size() == level_end) return res;
    level_begin = level_end;
  }
  if (probe_frontier)
    for (std::size_t i = level_begin; i < res.states.size() && !res.depth_limited; ++i)
      for (const auto& k : candidates(res.states[i], iset)) {
        Graph h = netres::apply(k, res.states[i]);
        if (canonical_dedup ? !seen_canon.count(canonical_form(h)) : !seen.count(h)) {
          res.depth_limited = true;
          break;
        }
      }
  return res;
}

SelfReverseVerdict check_not_partially_self_reverse(const InterventionSet& iset, const std::vector<Graph>& samples,
                                                    std::size_t depth, std::size_t max_states) {
  SelfReverseVerdict v;
  for (const auto& g : samples) {
    auto fwd = reachable_set(g, iset, depth, max_states);
    for (std::size_t i = 1; i < fwd.states.size(); ++i) {
      auto back = reachable_set(fwd.states[i], iset, depth, max_states);
      for (std::size_t j = 1; j < back.states.size(); ++j)
        if (back.states[j] == g) {
          v.counterexample = true;
          v.graph = g;
          v.alpha = fwd.paths[i];
          v.kappa = back.paths[j];
          return v;
        }
    }
  }
  return v;
}

}  // namespace netres

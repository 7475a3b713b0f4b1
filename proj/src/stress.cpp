#include "netres/stress.hpp"

#include <algorithm>
#include <cmath>

namespace netres {

namespace {
enum Tag : std::uint64_t { kRecovery = 1, kTransmit = 2, kShock = 3, kGillespie = 4 };
}

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_key(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = mix64(seed);
  for (auto p : parts) h = mix64(h ^ mix64(p + 0x5851f42d4c957f2dULL));
  return h;
}

double to_unit(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

double CounterStream::exponential(double rate) { return -std::log1p(-uniform()) / rate; }

void StressConfig::validate() const {
  if (!(params.tau > 0) || !(params.gamma > 0)) throw Error("InvalidConfig", "tau and gamma must be positive");
  if (!(alpha > 0 && alpha < 1)) throw Error("InvalidConfig", "alpha must lie in (0,1)");
  if (!(lambda > 0 && lambda < 1)) throw Error("InvalidConfig", "lambda must lie in (0,1)");
  if (samples < 1) throw Error("InvalidConfig", "samples must be at least 1");
  if (auto* f = std::get_if<shock::FixedSet>(&shock); f && f->nodes.empty())
    throw Error("InvalidConfig", "fixed shock set is empty");
  if (auto* b = std::get_if<shock::PerNodeBernoulli>(&shock); b && !(b->p >= 0 && b->p <= 1))
    throw Error("InvalidConfig", "shock probability must lie in [0,1]");
}

Interval wilson_interval(std::size_t hits, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  double nn = static_cast<double>(n);
  double p = hits / nn;
  double z2 = z * z;
  double denom = 1.0 + z2 / nn;
  double centre = (p + z2 / (2 * nn)) / denom;
  double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

Graph sample_epn(const Graph& g, const SirParams& p, std::uint64_t seed, std::uint64_t sample) {
  Graph epn;
  for (NodeId v : g.nodes()) epn.add_node(v);
  for (NodeId v : g.nodes()) {
    auto out = g.out_neighbors(v);
    if (out.empty()) continue;
    double r = -std::log1p(-to_unit(hash_key(seed, {kRecovery, sample, v}))) / p.gamma;
    for (NodeId w : out) {
      double t = -std::log1p(-to_unit(hash_key(seed, {kTransmit, sample, v, w}))) / p.tau;
      if (t < r) epn.add_edge(v, w);
    }
  }
  return epn;
}

std::set<NodeId> epn_final_set(const Graph& epn, const std::set<NodeId>& shocked) {
  std::set<NodeId> r;
  for (NodeId v : shocked) {
    if (!epn.has_node(v)) throw Error("ShockOutsideGraph", "shocked node " + std::to_string(v) + " not in graph");
    if (r.count(v)) continue;
    auto c = out_component(epn, v);
    r.insert(c.begin(), c.end());
  }
  return r;
}

// Direct-method simulation of the S->I (rate tau per infected in-neighbour)
// and I->R (rate gamma) chain. Only the jump chain matters for the final set.
std::set<NodeId> gillespie_final_set(const Graph& g, const SirParams& p, const std::set<NodeId>& shocked,
                                     CounterStream& rng) {
  for (NodeId v : shocked)
    if (!g.has_node(v)) throw Error("ShockOutsideGraph", "shocked node " + std::to_string(v) + " not in graph");
  Indexed ix(g);
  enum State : char { S, I, R };
  std::vector<char> st(ix.n(), S);
  std::vector<int> infected;
  for (NodeId v : shocked) {
    st[ix.pos.at(v)] = I;
    infected.push_back(ix.pos.at(v));
  }
  std::vector<std::pair<int, int>> si;
  while (!infected.empty()) {
    si.clear();
    for (int v : infected)
      for (int w : ix.out[v])
        if (st[w] == S) si.emplace_back(v, w);
    double rate_inf = p.tau * static_cast<double>(si.size());
    double rate_rec = p.gamma * static_cast<double>(infected.size());
    double u = rng.uniform() * (rate_inf + rate_rec);
    if (u < rate_inf) {
      std::size_t k = std::min(si.size() - 1, static_cast<std::size_t>(u / p.tau));
      int w = si[k].second;
      st[w] = I;
      infected.push_back(w);
    } else {
      std::size_t k = std::min(infected.size() - 1, static_cast<std::size_t>((u - rate_inf) / p.gamma));
      st[infected[k]] = R;
      infected.erase(infected.begin() + static_cast<long>(k));
    }
  }
  std::set<NodeId> r;
  for (int i = 0; i < ix.n(); ++i)
    if (st[i] != S) r.insert(ix.label[i]);
  return r;
}

std::set<NodeId> draw_shock(const Graph& g, const InitialShock& s, std::uint64_t seed, std::uint64_t sample) {
  if (auto* f = std::get_if<shock::FixedSet>(&s)) {
    for (NodeId v : f->nodes)
      if (!g.has_node(v)) throw Error("ShockOutsideGraph", "shocked node " + std::to_string(v) + " not in graph");
    return f->nodes;
  }
  std::vector<NodeId> nodes(g.nodes().begin(), g.nodes().end());
  if (nodes.empty()) return {};
  if (std::holds_alternative<shock::UniformSingleNode>(s)) {
    auto h = hash_key(seed, {kShock, sample});
    return {nodes[static_cast<std::size_t>(to_unit(h) * static_cast<double>(nodes.size()))]};
  }
  double p = std::get<shock::PerNodeBernoulli>(s).p;
  std::set<NodeId> r;
  for (NodeId v : nodes)
    if (to_unit(hash_key(seed, {kShock, sample, v})) < p) r.insert(v);
  return r;
}

StressEstimate estimate_systemic_probability(const Graph& g, const StressConfig& cfg, Engine engine,
                                             unsigned workers) {
  cfg.validate();
  if (g.empty()) throw Error("EmptyGraph", "stress test on the empty graph");
  const std::size_t n = g.size();
  std::vector<std::size_t> sizes(cfg.samples);
  parallel_for(cfg.samples, workers, [&](std::size_t i) {
    auto shocked = draw_shock(g, cfg.shock, cfg.seed, i);
    if (engine == Engine::EPN) {
      sizes[i] = epn_final_set(sample_epn(g, cfg.params, cfg.seed, i), shocked).size();
    } else {
      CounterStream rng(hash_key(cfg.seed, {kGillespie}), i);
      sizes[i] = shocked.empty() ? 0 : gillespie_final_set(g, cfg.params, shocked, rng).size();
    }
  });
  StressEstimate est;
  est.samples = cfg.samples;
  est.seed = cfg.seed;
  est.histogram.assign(n + 1, 0);
  const double need = cfg.alpha * static_cast<double>(n);
  for (auto s : sizes) {
    ++est.histogram[s];
    if (static_cast<double>(s) >= need - 1e-12) ++est.hits;
  }
  est.p_hat = static_cast<double>(est.hits) / static_cast<double>(est.samples);
  auto ci = wilson_interval(est.hits, est.samples);
  est.ci_low = std::min(ci.low, est.p_hat);
  est.ci_high = std::max(ci.high, est.p_hat);
  return est;
}

CouplingVerdict coupled_edge_deletion_check(const Graph& g, const Edge& e, const StressConfig& cfg,
                                            unsigned workers) {
  cfg.validate();
  if (!g.has_edge(e.first, e.second))
    throw Error("EdgeAbsent", "edge (" + std::to_string(e.first) + "," + std::to_string(e.second) + ") not in graph");
  Graph h = g;
  h.remove_edge(e.first, e.second);
  std::vector<char> bad(cfg.samples, 0), grew(cfg.samples, 0), same(cfg.samples, 0);
  parallel_for(cfg.samples, workers, [&](std::size_t i) {
    auto shocked = draw_shock(g, cfg.shock, cfg.seed, i);
    auto before = epn_final_set(sample_epn(g, cfg.params, cfg.seed, i), shocked);
    auto after = epn_final_set(sample_epn(h, cfg.params, cfg.seed, i), shocked);
    bad[i] = !std::includes(before.begin(), before.end(), after.begin(), after.end());
    grew[i] = after.size() > before.size();
    same[i] = after == before;
  });
  CouplingVerdict v;
  v.samples = cfg.samples;
  for (std::size_t i = 0; i < cfg.samples; ++i) {
    if ((bad[i] || grew[i]) && v.violations == 0 && v.size_increases == 0) v.first_violation = i;
    v.violations += bad[i];
    v.size_increases += grew[i];
    v.identical += same[i];
  }
  return v;
}

}  // namespace netres

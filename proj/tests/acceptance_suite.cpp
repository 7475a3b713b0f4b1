// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// usage: acceptance_suite <path-to-netres-cli>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "netres/acceptance.hpp"
#include "netres/costs.hpp"
#include "netres/metrics.hpp"
#include "netres/search.hpp"
#include "netres/stress.hpp"
#include "oracle.hpp"

using namespace netres;

namespace {

constexpr double kSpectralTol = 1e-9;
constexpr double kFloatTol = 1e-12;   // closed forms only available as doubles
constexpr double kStrictTol = 1e-12;  // a strict decrease must beat this
constexpr double kBandZ = 2.5758293035489004;  // 99% two-sided
constexpr double kMaxTv = 0.02;
constexpr double kCostTol = 1e-9;
constexpr std::size_t kFuzzTrials = 10000;
constexpr std::size_t kEpnSamples = 100000;
constexpr std::size_t kCoupledSamples = 10000;
constexpr std::size_t kCoupledGraphs = 20;

constexpr double kLimit1 = 1.0, kLimit2 = 30.0, kLimit5 = 60.0, kLimit6 = 300.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

void fail(Outcome& o, const std::string& why) {
  if (o.pass) o.detail = why;
  o.pass = false;
}

bool same(const Rational& r, const oracle::Frac& f) { return r.numerator() == f.p && r.denominator() == f.q; }

std::string frac_text(const oracle::Frac& f) { return std::to_string(f.p) + "/" + std::to_string(f.q); }

Graph from_adj(const oracle::Adj& a) {
  Graph g;
  for (int v = 0; v < a.n; ++v) g.add_node(v);
  for (int v = 0; v < a.n; ++v)
    for (int w = 0; w < a.n; ++w)
      if (a.has(v, w)) g.add_edge(v, w);
  return g;
}

QSpec qs(QKind k) {
  QSpec q;
  q.kind = k;
  return q;
}

// 1 -----------------------------------------------------------------------

Outcome closed_forms() {
  Outcome o;
  std::size_t checks = 0;
  auto exact = [&](const std::string& what, std::size_t n, const Rational& got, oracle::Frac want) {
    ++checks;
    if (!same(got, want))
      fail(o, what + " at N=" + std::to_string(n) + ": got " + to_string(got) + ", want " + frac_text(want));
  };
  auto approx = [&](const std::string& what, std::size_t n, double got, double want, double tol) {
    ++checks;
    if (!(std::abs(got - want) <= tol))
      fail(o, what + " at N=" + std::to_string(n) + ": got " + std::to_string(got) + ", want " + std::to_string(want));
  };
  for (std::size_t n = 2; n <= 10; ++n) {
    const long long N = static_cast<long long>(n);
    Graph ds = families::directed_star(n), dl = families::directed_line(n);
    Graph ul = families::undirected_line(n), us = families::undirected_star(n);
    exact("star E[(K^out)^2]", n, degree_moment(ds, Side::Out, 2), {(N - 1) * (N - 1), N});
    exact("star E[(K^in)^2]", n, degree_moment(ds, Side::In, 2), {N - 1, N});
    exact("star max out-degree", n, *evaluate_q(qs(QKind::MaxDegOut), ds).exact, {N - 1, 1});
    approx("star hub out-closeness", n, centrality(ds, CentralityKind::CloseOut, 0), 1.0, kFloatTol);
    for (NodeId v = 1; v < n; ++v)
      approx("star satellite in-closeness", n, centrality(ds, CentralityKind::CloseIn, v), 1.0 / (N - 1), kFloatTol);
    exact("line E[(K^out)^2]", n, degree_moment(dl, Side::Out, 2), {N - 1, N});
    exact("undirected line E[K^2]", n, degree_moment(ul, Side::Total, 2), oracle::Frac(4) - oracle::Frac(6, N));
    exact("undirected line epidemic ratio", n, epidemic_ratio(ul), {2 * N - 3, N - 1});
    double rho = 0;
    for (long long j = 1; j <= N; ++j) rho = std::max(rho, 2 * std::cos(std::numbers::pi * j / (N + 1)));
    approx("undirected line spectral radius", n, spectral_radius(ul), rho, kSpectralTol);
    exact("undirected star E[K^2]", n, degree_moment(us, Side::Total, 2), {N - 1, 1});
    approx("undirected star spectral radius", n, spectral_radius(us), std::sqrt(N - 1.0), kSpectralTol);
  }
  if (o.pass) o.detail = std::to_string(checks) + " values for N=2..10";
  return o;
}

// 2 -----------------------------------------------------------------------

Outcome exhaustive_minimality() {
  Outcome o;
  oracle::Frac best_m2(1000);
  int best_deg = 1000;
  std::optional<Rational> lib_m2, lib_deg;
  std::size_t connected = 0, mismatches = 0;
  bool line_m2 = false, line_deg = false;
  const Graph line = families::directed_line(4);
  for (std::uint64_t m = 0; m < 4096; ++m) {
    auto a = oracle::from_mask(4, m);
    Graph g = from_adj(a);
    bool weak = oracle::weakly_connected(a);
    if (connectivity(g).weak != weak) ++mismatches;
    if (!weak) continue;
    ++connected;
    std::vector<long long> outs;
    int mx = 0;
    for (int v = 0; v < 4; ++v) {
      outs.push_back(oracle::outdeg(a, v));
      mx = std::max(mx, oracle::outdeg(a, v));
    }
    auto m2 = oracle::moment2(outs);
    Rational q2 = *evaluate_q(qs(QKind::Moment2Out), g).exact;
    Rational qd = *evaluate_q(qs(QKind::MaxDegOut), g).exact;
    if (!same(q2, m2) || qd != Rational(mx)) ++mismatches;
    if (m2 < best_m2) best_m2 = m2;
    best_deg = std::min(best_deg, mx);
    lib_m2 = lib_m2 ? std::min(*lib_m2, q2) : q2;
    lib_deg = lib_deg ? std::min(*lib_deg, qd) : qd;
    if (g == line) {
      line_m2 = same(q2, oracle::Frac(3, 4));
      line_deg = qd == Rational(1);
    }
  }
  if (mismatches) fail(o, std::to_string(mismatches) + " graphs disagree with the oracle");
  if (!(best_m2 == oracle::Frac(3, 4))) fail(o, "oracle minimum E[(K^out)^2] is " + frac_text(best_m2));
  if (!lib_m2 || !same(*lib_m2, oracle::Frac(3, 4))) fail(o, "min E[(K^out)^2] != 3/4");
  if (best_deg != 1 || !lib_deg || *lib_deg != Rational(1)) fail(o, "min max-out-degree != 1");
  if (!line_m2 || !line_deg) fail(o, "directed line does not attain the minimum");
  if (o.pass) o.detail = std::to_string(connected) + " weakly connected graphs; min 3/4 and 1, attained by the line";
  return o;
}

// 3 -----------------------------------------------------------------------

enum class Move { EdgeDel, NodeSplit, Isolate, UEdgeDel, USplit };

const char* move_name(Move m) {
  switch (m) {
    case Move::EdgeDel: return "EdgeDel";
    case Move::NodeSplit: return "NodeSplit";
    case Move::Isolate: return "Isolate";
    case Move::UEdgeDel: return "UEdgeDel";
    case Move::USplit: return "USplit";
  }
  return "?";
}

// random effective intervention of the given type, nullopt if there is none
std::optional<Intervention> random_move(Move mv, const Graph& g, std::mt19937_64& rng) {
  std::vector<NodeId> nodes(g.nodes().begin(), g.nodes().end());
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  std::optional<Intervention> k;
  switch (mv) {
    case Move::EdgeDel:
    case Move::UEdgeDel: {
      if (edges.empty()) return std::nullopt;
      Edge e = edges[pick(edges.size())];
      if (mv == Move::EdgeDel)
        k = iv::EdgeDel{e.first, e.second};
      else
        k = iv::UEdgeDel{e.first, e.second};
      break;
    }
    case Move::NodeSplit: {
      NodeId v = nodes[pick(nodes.size())];
      iv::NodeSplit s{{}, v, g.fresh_label()};
      for (const auto& e : edges)
        if ((e.first == v || e.second == v) && rng() % 2) s.edges.insert(e);
      k = s;
      break;
    }
    case Move::USplit: {
      NodeId v = nodes[pick(nodes.size())];
      iv::USplit s{{}, v, g.fresh_label()};
      for (NodeId w : g.out_neighbors(v))
        if (rng() % 2) {
          s.edges.insert({v, w});
          s.edges.insert({w, v});
        }
      k = s;
      break;
    }
    case Move::Isolate: {
      iv::Isolate s;
      for (NodeId v : nodes)
        if (rng() % 2) s.nodes.insert(v);
      if (s.nodes.empty()) s.nodes.insert(nodes[pick(nodes.size())]);
      k = s;
      break;
    }
  }
  if (!is_effective(*k, g)) return std::nullopt;
  return k;
}

struct Claim {
  std::string name;
  Move move;
  bool undirected;
  std::function<double(const Graph&)> f;  // for strict claims
  std::optional<QKind> q;                 // for non-increasing claims
};

Outcome monotonicity_fuzz() {
  Outcome o;
  std::vector<Claim> claims;
  for (auto q : {QKind::Moment2Out, QKind::Moment2In, QKind::MaxDegOut, QKind::MaxDegIn})
    for (auto m : {Move::EdgeDel, Move::NodeSplit}) claims.push_back({q_name(q), m, false, {}, q});
  for (auto q : {QKind::MaxCloseOut, QKind::MaxCloseIn})
    for (auto m : {Move::EdgeDel, Move::Isolate}) claims.push_back({q_name(q), m, false, {}, q});
  for (auto m : {Move::EdgeDel, Move::NodeSplit})
    claims.push_back({"avg_communicability", m, false, [](const Graph& g) { return avg_communicability(g); }, {}});
  claims.push_back({"efficiency", Move::EdgeDel, false, [](const Graph& g) { return graph_efficiency(g); }, {}});
  for (auto m : {Move::UEdgeDel, Move::USplit})
    claims.push_back({q_name(QKind::SpectralRadius), m, true, {}, QKind::SpectralRadius});

  std::size_t total = 0;
  for (std::size_t c = 0; c < claims.size(); ++c) {
    const Claim& cl = claims[c];
    std::mt19937_64 rng(0x5eed0000 + c);
    std::size_t done = 0, violations = 0;
    std::string first;
    while (done < kFuzzTrials) {
      std::size_t n = 2 + rng() % 7;
      double p = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
      Graph g = cl.undirected ? random_undirected(n, p, rng()) : random_digraph(n, p, rng());
      auto k = random_move(cl.move, g, rng);
      if (!k) continue;
      ++done;
      Graph h = netres::apply(*k, g);
      bool bad;
      if (cl.q) {
        bad = q_increased(evaluate_q(qs(*cl.q), g), evaluate_q(qs(*cl.q), h));
      } else {
        double a = cl.f(g), b = cl.f(h);
        bad = !(b < a - kStrictTol * std::max(1.0, std::abs(a)));
      }
      if (bad && !violations++) first = to_text(*k) + " on " + describe(g);
    }
    total += done;
    if (violations)
      fail(o, cl.name + " under " + move_name(cl.move) + ": " + std::to_string(violations) + " violations, e.g. " +
                  first);
  }
  if (o.pass)
    o.detail = std::to_string(claims.size()) + " claims x " + std::to_string(kFuzzTrials) + " pairs, 0 violations";
  return o;
}

// 4 -----------------------------------------------------------------------

// pair sum of 1/d over ordered pairs as an exact fraction
oracle::Frac inverse_distance_sum(const Graph& g) {
  std::vector<NodeId> lab(g.nodes().begin(), g.nodes().end());
  int n = static_cast<int>(lab.size());
  std::vector<std::vector<int>> adj(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) adj[i][j] = g.has_edge(lab[i], lab[j]);
  oracle::Frac s(0);
  for (int i = 0; i < n; ++i) {
    auto d = oracle::bfs(adj, i);
    for (int j = 0; j < n; ++j)
      if (j != i && d[j] > 0) s = s + oracle::Frac(1, d[j]);
  }
  return s;
}

std::pair<Graph, Graph> split_triangle(std::size_t n) {
  Graph g = disjoint_union(families::bidirectional_ring(3), families::edgeless(n - 3));
  Graph h = netres::apply(iv::NodeSplit{{{1, 2}, {2, 1}}, 1, static_cast<NodeId>(n)}, g);
  return {g, h};
}

Outcome counterexamples() {
  Outcome o;
  // (a)
  {
    Graph ring = families::bidirectional_ring(5);
    Graph line = netres::apply(iv::NodeDel{0}, ring);
    auto b = evaluate_q(qs(QKind::VarianceOut), ring), a = evaluate_q(qs(QKind::VarianceOut), line);
    oracle::Frac m1(6, 4);
    oracle::Frac want = oracle::moment2({1, 2, 2, 1}) - m1 * m1;
    if (!same(*b.exact, oracle::Frac(0)) || !same(*a.exact, want) || !q_increased(b, a))
      fail(o, "(a) variance " + b.text() + " -> " + a.text());
  }
  // (b)
  std::size_t threshold = 0;
  {
    for (std::size_t n = 3; n <= 30 && !threshold; ++n) {
      auto [g, h] = split_triangle(n);
      const long long N = static_cast<long long>(n);
      oracle::Frac fg = inverse_distance_sum(g) / oracle::Frac(N * (N - 1));
      oracle::Frac fh = inverse_distance_sum(h) / oracle::Frac((N + 1) * N);
      if (fg < fh) threshold = n;
    }
    if (!threshold) {
      fail(o, "(b) no violation up to N=30");
    } else {
      auto [g, h] = split_triangle(threshold);
      auto [g0, h0] = split_triangle(threshold - 1);
      CostModel e = cost::Efficiency{};
      if (!(functional_cost(e, g, h) < 0)) fail(o, "(b) efficiency cost not negative at N=" + std::to_string(threshold));
      if (functional_cost(e, g0, h0) < 0) fail(o, "(b) violation already below the threshold");
      auto rep = check_cost_axioms(e, iset_from_string("node_split"), {g}, {1, 20000});
      if (rep.c2.violations == 0) fail(o, "(b) axiom check misses the C2 violation");
    }
  }
  // (c)
  for (std::size_t n = 3; n <= 12; ++n) {
    auto [g, h] = split_triangle(n);
    const long long N = static_cast<long long>(n);
    for (auto k : {QKind::MaxCloseOut, QKind::MaxCloseIn}) {
      auto b = evaluate_q(qs(k), g), a = evaluate_q(qs(k), h);
      bool values = std::abs(b.value - 2.0 / (N - 1)) <= kFloatTol && std::abs(a.value - 5.0 / (2.0 * N)) <= kFloatTol;
      if (!values || q_increased(b, a) != (N > 5))
        fail(o, "(c) " + q_name(k) + " at N=" + std::to_string(n) + ": " + b.text() + " -> " + a.text());
    }
  }
  // (d)
  {
    AcceptanceSpec spec{qs(QKind::MaxBetweenness), ThresholdSchedule::make_constant(Rational(0))};
    for (std::size_t n = 2; n <= 8; ++n)
      if (evaluate_q(spec.q, families::complete(n)).value != 0.0 ||
          evaluate_q(spec.q, families::edgeless(n)).value != 0.0)
        fail(o, "(d) betweenness not zero at N=" + std::to_string(n));
    std::vector<std::size_t> sizes{2, 3, 4, 5, 6};
    if (!check_P1(spec, 8).holds) fail(o, "(d) P1 fails");
    if (check_P3(spec, sizes, CheckMode::ClosedForm).holds) fail(o, "(d) P3 holds");
  }
  // (e)
  {
    Graph g = disjoint_union(families::undirected_star(5), families::undirected_line(2));
    Graph h = netres::apply(iv::UEdgeDel{5, 6}, g);
    auto b = evaluate_q(qs(QKind::EpidemicRatio), g), a = evaluate_q(qs(QKind::EpidemicRatio), h);
    oracle::Frac wb = oracle::moment2({4, 1, 1, 1, 1, 1, 1}) / oracle::Frac(10, 7);
    oracle::Frac wa = oracle::moment2({4, 1, 1, 1, 1, 0, 0}) / oracle::Frac(8, 7);
    if (!same(*b.exact, wb) || !same(*a.exact, wa) || !q_increased(b, a))
      fail(o, "(e) epidemic ratio " + b.text() + " -> " + a.text());
  }
  if (o.pass)
    o.detail = "(a) 0 -> 1/4, (b) first C2 violation at N=" + std::to_string(threshold) +
               ", (c) increase iff N>5, (d) P1 holds and P3 fails, (e) 11/5 -> 5/2";
  return o;
}

// 5 -----------------------------------------------------------------------

// Labelled digraphs on labels 0..3 as (node-3 present, 16 adjacency bits).
using State = std::uint32_t;
constexpr State kHas3 = 1u << 16;

bool has(State s, int v, int w) { return (s >> (4 * v + w)) & 1u; }
State with(State s, int v, int w, bool on) {
  State b = 1u << (4 * v + w);
  return on ? (s | b) : (s & ~b);
}
int size_of(State s) { return (s & kHas3) ? 4 : 3; }

Graph to_graph(State s) {
  Graph g;
  for (int v = 0; v < size_of(s); ++v) g.add_node(v);
  for (int v = 0; v < 4; ++v)
    for (int w = 0; w < 4; ++w)
      if (has(s, v, w)) g.add_edge(v, w);
  return g;
}

std::vector<State> oracle_moves(State s) {
  std::vector<State> out;
  int n = size_of(s);
  for (int v = 0; v < n; ++v)
    for (int w = 0; w < n; ++w)
      if (has(s, v, w)) out.push_back(with(s, v, w, false));
  if (n == 3)
    for (int v = 0; v < 3; ++v) {
      std::vector<std::pair<int, int>> inc;
      for (int w = 0; w < 3; ++w) {
        if (has(s, v, w)) inc.push_back({v, w});
        if (has(s, w, v)) inc.push_back({w, v});
      }
      for (std::uint32_t sub = 0; sub < (1u << inc.size()); ++sub) {
        State t = s | kHas3;
        for (std::size_t b = 0; b < inc.size(); ++b)
          if ((sub >> b) & 1u) {
            auto [x, y] = inc[b];
            t = with(t, x, y, false);
            t = x == v ? with(t, 3, y, true) : with(t, x, 3, true);
          }
        out.push_back(t);
      }
    }
  return out;
}

bool oracle_accepts(State s, bool moment) {
  int n = size_of(s), sq = 0, mx = 0;
  for (int v = 0; v < n; ++v) {
    int d = 0;
    for (int w = 0; w < n; ++w) d += has(s, v, w);
    sq += d * d;
    mx = std::max(mx, d);
  }
  // ((N-1)^2 - 1)/N: 1 at N=3, 2 at N=4
  if (moment) return n == 3 ? sq <= 3 : sq <= 8;
  return mx <= 1;
}

// fewest effective steps to an accepted state within the depth, -1 if none
int oracle_rho(State start, bool moment, int depth) {
  std::unordered_map<State, int> dist{{start, 0}};
  std::vector<State> level{start};
  for (int d = 0; d <= depth; ++d) {
    for (State s : level)
      if (oracle_accepts(s, moment)) return d;
    if (d == depth) break;
    std::vector<State> next;
    for (State s : level)
      for (State t : oracle_moves(s))
        if (dist.emplace(t, d + 1).second) next.push_back(t);
    level.swap(next);
  }
  return -1;
}

Outcome rho_oracle() {
  Outcome o;
  std::size_t graphs = 0, finite = 0;
  for (bool moment : {true, false}) {
    DmfnrPreset p;
    p.acceptance = acceptance_preset(moment ? "prop-6.1-out2" : "prop-6.2-maxoutdeg");
    p.iset = iset_from_string("edge_del,node_split");
    p.iset.max_nodes = 4;
    p.cost = cost::UnitCount{};
    SearchBudget budget{4, 1000000};
    std::vector<Graph> pop;
    for (State m = 0; m < 64; ++m) {
      // the 6 off-diagonal slots among labels 0..2
      State s = 0;
      int bit = 0;
      for (int v = 0; v < 3; ++v)
        for (int w = 0; w < 3; ++w)
          if (v != w) s = with(s, v, w, (m >> bit++) & 1u);
      Graph g = to_graph(s);
      pop.push_back(g);
      ++graphs;
      int want = oracle_rho(s, moment, 4);
      auto r = rho(g, p, budget);
      bool ok = want < 0 ? (std::isinf(r.value) && r.status != RhoStatus::Optimal)
                         : (r.value == want && r.status == RhoStatus::Optimal && r.result &&
                            apply_strategy(*r.witness, g) == *r.result &&
                            is_acceptable(p.acceptance, *r.result).accepted());
      if (want >= 0) ++finite;
      if (!ok)
        fail(o, std::string(moment ? "moment" : "max-degree") + " preset on " + describe(g) + ": rho " +
                    std::to_string(r.value) + ", brute force " + std::to_string(want));
    }
    auto props = verify_rho_properties(p, pop, budget);
    if (!props.ok()) fail(o, "rho properties: " + props.first_failure);
    if (props.nu != 1.0) fail(o, "rho lower bound is not 1");
  }
  if (o.pass)
    o.detail = std::to_string(graphs) + " (graph, preset) pairs agree with brute force (" + std::to_string(finite) +
               " finite); rho=0 iff accepted, rho>=1 otherwise";
  return o;
}

// 6 -----------------------------------------------------------------------

bool in_band(std::size_t k, std::size_t n, double p) {
  double mu = n * p, sd = std::sqrt(n * p * (1 - p));
  return std::abs(static_cast<double>(k) - mu) <= kBandZ * sd;
}

Outcome epn_validity() {
  Outcome o;
  std::size_t kept = 0;
  Graph edge = families::directed_line(2);
  for (std::size_t i = 0; i < kEpnSamples; ++i) kept += sample_epn(edge, {1.0, 1.0}, 101, i).has_edge(0, 1);
  if (!in_band(kept, kEpnSamples, 0.5))
    fail(o, "(a) retained " + std::to_string(kept) + " of " + std::to_string(kEpnSamples));

  // benchmark: 5-ring with a chord and a pendant
  Graph bench = families::bidirectional_ring(5);
  bench.add_edge(0, 2);
  bench.add_edge(2, 0);
  bench.add_node(5);
  bench.add_edge(3, 5);
  bench.add_edge(5, 3);
  StressConfig cfg;
  cfg.samples = kEpnSamples;
  cfg.seed = 202;
  cfg.shock = shock::FixedSet{{0}};
  auto a = estimate_systemic_probability(bench, cfg, Engine::EPN, 4);
  auto b = estimate_systemic_probability(bench, cfg, Engine::Gillespie, 4);
  double tv = 0;
  for (std::size_t i = 0; i < a.histogram.size(); ++i)
    tv += std::abs(static_cast<double>(a.histogram[i]) - static_cast<double>(b.histogram[i]));
  tv /= 2.0 * static_cast<double>(kEpnSamples);
  if (!(tv < kMaxTv)) fail(o, "(b) total variation " + std::to_string(tv));

  std::size_t violations = 0, graphs = 0;
  std::mt19937_64 rng(303);
  while (graphs < kCoupledGraphs) {
    Graph g = random_digraph(3 + rng() % 6, 0.35, rng());
    if (g.edges().empty()) continue;
    std::vector<Edge> es(g.edges().begin(), g.edges().end());
    StressConfig c;
    c.samples = kCoupledSamples;
    c.seed = rng();
    auto v = coupled_edge_deletion_check(g, es[rng() % es.size()], c, 4);
    violations += v.violations + v.size_increases;
    ++graphs;
  }
  if (violations) fail(o, "(c) " + std::to_string(violations) + " coupled violations");
  if (o.pass) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "(a) %zu/%zu retained, (b) TV %.4f, (c) 0 violations over %zux%zu", kept,
                  kEpnSamples, tv, kCoupledSamples, kCoupledGraphs);
    o.detail = buf;
  }
  return o;
}

// 7 -----------------------------------------------------------------------

// node mask in bits 16..19 plus 16 adjacency bits
using MState = std::uint32_t;

bool node_in(MState s, int v) { return (s >> (16 + v)) & 1u; }

double oracle_price(const std::string& op, int v, int w) {
  if (op == "edge_del") return v == 0 && w == 1 ? 0.4 : 1.0;
  if (op == "edge_add") return 1.7;
  return 2.2;  // node_del
}

std::vector<std::pair<MState, double>> priced_moves(MState s) {
  std::vector<std::pair<MState, double>> out;
  for (int v = 0; v < 4; ++v) {
    if (!node_in(s, v)) continue;
    for (int w = 0; w < 4; ++w) {
      if (w == v || !node_in(s, w)) continue;
      if (has(s, v, w))
        out.push_back({with(s, v, w, false), oracle_price("edge_del", v, w)});
      else
        out.push_back({with(s, v, w, true), oracle_price("edge_add", v, w)});
    }
    MState t = s & ~(1u << (16 + v));
    for (int w = 0; w < 4; ++w) t = with(with(t, v, w, false), w, v, false);
    out.push_back({t, oracle_price("node_del", v, v)});
  }
  return out;
}

std::map<MState, double> oracle_costs(MState start, int depth) {
  std::map<MState, double> best{{start, 0.0}};
  std::map<MState, double> frontier = best;
  for (int d = 0; d < depth; ++d) {
    std::map<MState, double> next;
    for (auto [s, c] : frontier)
      for (auto [t, p] : priced_moves(s)) {
        auto it = next.find(t);
        if (it == next.end() || c + p < it->second) next[t] = c + p;
      }
    for (auto [t, c] : next) {
      auto it = best.find(t);
      if (it == best.end() || c < it->second) best[t] = c;
    }
    frontier.swap(next);
  }
  return best;
}

MState to_mstate(const Graph& g) {
  MState s = 0;
  for (NodeId v : g.nodes()) s |= 1u << (16 + v);
  for (const auto& [v, w] : g.edges()) s = with(s, v, w, true);
  return s;
}

Outcome cost_axioms() {
  Outcome o;
  cost::Monetary mon;
  mon.prices.base = {{"edge_del", 1.0}, {"edge_add", 1.7}, {"node_del", 2.2}};
  mon.prices.scoped["edge_del:(0,1)"] = 0.4;
  CostModel m = mon;
  auto iset = iset_from_string("edge_del,edge_add,node_del");
  SearchBudget budget{3, 1000000};
  std::vector<Graph> samples;
  for (std::uint64_t mask = 0; mask < 64; ++mask) samples.push_back(from_adj(oracle::from_mask(3, mask)));
  std::mt19937_64 rng(707);
  for (int i = 0; i < 24; ++i) samples.push_back(from_adj(oracle::from_mask(4, rng() & 4095)));
  samples.push_back(families::directed_line(2));
  samples.push_back(families::edgeless(1));

  auto rep = check_cost_axioms(m, iset, samples, budget, 20, 9);
  auto axiom = [&](const char* name, const AxiomResult& r) {
    if (r.violations) fail(o, std::string(name) + ": " + std::to_string(r.violations) + " violations, " + r.witness);
  };
  axiom("C1", rep.c1);
  axiom("C2", rep.c2);
  axiom("C3", rep.c3);
  axiom("C4", rep.c4);

  std::size_t pairs = 0;
  for (const auto& g : samples) {
    auto want = oracle_costs(to_mstate(g), 3);
    auto got = cost_map(m, g, iset, budget);
    if (got.best.size() != want.size()) fail(o, "reachable states differ on " + describe(g));
    for (const auto& [h, e] : got.best) {
      ++pairs;
      auto it = want.find(to_mstate(h));
      if (it == want.end() || std::abs(it->second - e.cost) > kCostTol) {
        fail(o, "cost " + describe(g) + " -> " + describe(h) + " is " + std::to_string(e.cost));
        continue;
      }
      // the optimum is attained by a concrete strategy
      if (apply_strategy(e.path, g) != h || std::abs(strategy_cost(m, e.path, g) - e.cost) > kCostTol)
        fail(o, "witness does not attain the cost for " + describe(g) + " -> " + describe(h));
    }
  }
  if (o.pass)
    o.detail = std::to_string(samples.size()) + " graphs, " + std::to_string(rep.c4.checked) + " triples, " +
               std::to_string(pairs) + " optimal costs match exhaustive search";
  return o;
}

// 8 -----------------------------------------------------------------------

std::string capture(const std::string& cmd, int& rc) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    rc = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  rc = pclose(p);
  return out;
}

Outcome determinism(const std::string& cli) {
  Outcome o;
  if (cli.empty()) {
    fail(o, "no CLI path given");
    return o;
  }
  const std::string dir = "acceptance_tmp_";
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream(dir + name) << body;
    return dir + name;
  };
  std::string g = write("g.txt", "directed\n0 1\n0 2\n0 3\n1 2\n3 4\n4 0\n");
  std::string cfg = write("stress.json", R"({"samples": 4000, "alpha": 0.4, "lambda": 0.2})");
  std::string preset = write("preset.json", R"({"acceptance": "prop-6.1-out2", "iset": "edge_del,node_split",
                                                "cost": "unit", "budget": {"depth": 2}})");
  std::string model = write("model.json", R"({"model": "monetary", "prices": {"edge_del": 1, "edge_add": 2}})");
  const std::vector<std::string> cmds = {
      "stress --graph " + g + " --config " + cfg + " --seed 41",
      "stress --graph " + g + " --config " + cfg + " --seed 41 --engine gillespie",
      "stress --graph " + g + " --config " + cfg + " --seed 41 --format json",
      "props --check mono --q moment2out --iset edge_del,node_split --trials 300 --seed 42",
      "props --check P4 --preset prop-6.1-out2 --graphs 40 --perms 3 --seed 43",
      "props --check axioms --model " + model + " --iset edge_del,edge_add --samples 6 --sample-n 3 --depth 2 --seed 44",
      "props --check rho --preset " + preset + " --samples 6 --sample-n 4 --seed 45",
      "metrics --graph " + g,
      "accept --graph " + g + " --preset prop-6.1-out2",
      "rho --graph " + g + " --preset " + preset,
      "suggest --graph " + g + " --preset " + preset + " --beam 3 --steps 2",
      "reach --graph " + g + " --iset edge_del --depth 2 --canonical",
  };
  std::size_t runs = 0;
  for (const auto& c : cmds) {
    std::string ref;
    int ref_rc = 0;
    bool first = true;
    for (const char* w : {"1", "1", "1", "4", "8"}) {
      int rc = 0;
      std::string out = capture(cli + " " + c + " --workers " + w + " 2>/dev/null", rc);
      ++runs;
      if (first) {
        ref = out;
        ref_rc = rc;
        first = false;
        if (rc != 0) fail(o, "'" + c + "' exited with " + std::to_string(rc));
        if (out.empty()) fail(o, "'" + c + "' printed nothing");
      } else if (out != ref || rc != ref_rc) {
        fail(o, "'" + c + "' differs with --workers " + w);
      }
    }
  }
  for (const char* f : {"g.txt", "stress.json", "preset.json", "model.json"}) std::remove((dir + f).c_str());
  if (o.pass) o.detail = std::to_string(cmds.size()) + " commands, " + std::to_string(runs) + " runs byte-identical";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "";
  struct Item {
    int id;
    const char* title;
    double limit;  // seconds, 0 = none
    std::function<Outcome()> run;
  };
  std::vector<Item> items = {
      {1, "closed-form oracle suite", kLimit1, closed_forms},
      {2, "exhaustive minimality on 4 nodes", kLimit2, exhaustive_minimality},
      {3, "monotonicity fuzz", 0, monotonicity_fuzz},
      {4, "counterexample regressions", 0, counterexamples},
      {5, "rho oracle equivalence", kLimit5, rho_oracle},
      {6, "EPN validity", kLimit6, epn_validity},
      {7, "cost-axiom suite", 0, cost_axioms},
      {8, "determinism", 0, [&] { return determinism(cli); }},
  };
  int failed = 0;
  for (auto& it : items) {
    double t0 = now();
    Outcome o;
    try {
      o = it.run();
    } catch (const std::exception& e) {
      fail(o, std::string("exception: ") + e.what());
    }
    double dt = now() - t0;
    if (it.limit > 0 && dt > it.limit) fail(o, "took longer than " + std::to_string(it.limit) + " s");
    if (!o.pass) ++failed;
    std::printf("%s [%d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", it.id, it.title, o.detail.c_str(), dt);
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}

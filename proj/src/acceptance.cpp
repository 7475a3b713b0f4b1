#include "netres/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace netres {

namespace {

const char* const kQNames[] = {"avg_degree",     "moment2out",      "moment2in",   "variance_in",
                               "variance_out",   "max_deg_out",     "max_deg_in",  "max_close_out",
                               "max_close_in",   "max_betweenness", "epidemic_ratio", "spectral_radius",
                               "stress",         "max_total_deg",   "moment2total", "node_degree"};
constexpr int kQCount = 16;

std::optional<Rational> exact_param(double x) {
  for (long long d : {1LL, 2LL, 4LL, 5LL, 8LL, 10LL, 100LL, 1000LL, 10000LL, 100000LL, 1000000LL}) {
    double k = std::round(x * static_cast<double>(d));
    if (std::abs(x * static_cast<double>(d) - k) < 1e-9 && std::abs(k) < 1e15)
      return Rational(static_cast<long long>(k), d);
  }
  return std::nullopt;
}

Threshold from_rational(const Rational& r) { return {to_double(r), r}; }
Threshold from_double(double x) { return {x, std::nullopt}; }

double param(const std::map<std::string, double>& p, const std::string& k, double dflt) {
  auto it = p.find(k);
  return it == p.end() ? dflt : it->second;
}

Threshold minus(const Threshold& a, double eps) {
  auto e = exact_param(eps);
  if (a.exact && e) return from_rational(*a.exact - *e);
  return from_double(a.value - eps);
}

Rational max_degree(const Graph& g, Side side) {
  Rational best = 0;
  for (const auto& [k, c] : degree_distribution(g, side).counts) best = std::max(best, k);
  return best;
}

}  // namespace

std::string q_name(QKind k) { return kQNames[static_cast<int>(k)]; }

QKind q_from_name(const std::string& s) {
  for (int i = 0; i < kQCount; ++i)
    if (s == kQNames[i]) return static_cast<QKind>(i);
  throw Error("Malformed", "unknown Q kind '" + s + "'");
}

bool q_requires_undirected(QKind k) {
  return k == QKind::EpidemicRatio || k == QKind::SpectralRadius || k == QKind::MaxTotalDeg ||
         k == QKind::Moment2Total;
}

bool q_discouraged(QKind k) { return k == QKind::VarianceIn || k == QKind::VarianceOut; }

std::string QValue::text() const {
  if (exact) return to_string(*exact);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string Threshold::text() const {
  if (exact) return to_string(*exact);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

QValue evaluate_q(const QSpec& q, const Graph& g) {
  if (g.empty()) throw Error("EmptyGraph", "Q is undefined on the empty graph");
  if (q_requires_undirected(q.kind) && !g.is_undirected())
    throw Error("DirectedUnsupported", q_name(q.kind) + " requires an undirected graph");
  QValue v;
  auto set_exact = [&](Rational r) {
    v.exact = r;
    v.value = to_double(r);
  };
  switch (q.kind) {
    case QKind::AvgDegree: set_exact(average_degree(g)); break;
    case QKind::Moment2Out: set_exact(degree_moment(g, Side::Out, 2)); break;
    case QKind::Moment2In: set_exact(degree_moment(g, Side::In, 2)); break;
    case QKind::Moment2Total: set_exact(degree_moment(g, Side::Total, 2)); break;
    case QKind::VarianceIn: set_exact(degree_variance(g, Side::In)); break;
    case QKind::VarianceOut: set_exact(degree_variance(g, Side::Out)); break;
    case QKind::MaxDegOut: set_exact(max_degree(g, Side::Out)); break;
    case QKind::MaxDegIn: set_exact(max_degree(g, Side::In)); break;
    case QKind::MaxTotalDeg: set_exact(max_degree(g, Side::Total)); break;
    case QKind::MaxCloseOut: v.value = max_centrality(g, CentralityKind::CloseOut); break;
    case QKind::MaxCloseIn: v.value = max_centrality(g, CentralityKind::CloseIn); break;
    case QKind::MaxBetweenness: v.value = max_centrality(g, CentralityKind::Betweenness); break;
    case QKind::EpidemicRatio: set_exact(epidemic_ratio(g)); break;
    case QKind::SpectralRadius: v.value = spectral_radius(g); break;
    case QKind::StressProbability: {
      auto est = estimate_systemic_probability(g, q.stress, Engine::EPN, q.workers);
      v.value = est.p_hat;
      v.estimate = est;
      break;
    }
    case QKind::NodeDegree: {
      long long d = 0;
      if (g.has_node(q.node)) {
        auto dg = degrees(g, q.node);
        d = static_cast<long long>(dg.in + dg.out);
      }
      set_exact(d);
      break;
    }
  }
  return v;
}

Threshold ThresholdSchedule::at(std::size_t n) const {
  if (n == 0) throw Error("EmptyGraph", "threshold for size 0");
  switch (form) {
    case Form::Constant: return constant;
    case Form::Table: {
      auto it = table.find(n);
      return it == table.end() ? table_default : it->second;
    }
    case Form::Formula: break;
  }
  const long long N = static_cast<long long>(n);
  const double eps = param(params, "eps", 0.01);
  if (formula == "out2-star-gap") {
    auto c = exact_param(param(params, "c", 1.0));
    if (!c) throw Error("Malformed", "out2-star-gap needs a rational c");
    return from_rational((Rational((N - 1) * (N - 1)) - *c) / N);
  }
  if (formula == "line-out2") return from_rational(Rational(N - 1, N));
  if (formula == "line-epi") {
    if (N == 1) return from_double(param(params, "l1", -1.0));
    return from_rational(Rational(2 * N - 3, N - 1));
  }
  if (formula == "line-k2") return from_rational(Rational(4) - Rational(6, N));
  if (formula == "sqrt-gap") return minus(from_double(std::sqrt(static_cast<double>(N - 1))), eps);
  if (formula == "line-spectral") return from_double(2.0 * std::cos(std::numbers::pi / static_cast<double>(N + 1)));
  if (formula == "epi-star-bound") {
    if (N == 1) return from_double(param(params, "l1", -1.0));
    Rational b = N <= 6 ? Rational(N, 2) : Rational(4 * N - 1, N + 1);
    return minus(from_rational(b), eps);
  }
  throw Error("Malformed", "unknown threshold formula '" + formula + "'");
}

ThresholdSchedule ThresholdSchedule::make_constant(double c) {
  ThresholdSchedule s;
  s.form = Form::Constant;
  auto e = exact_param(c);
  s.constant = e ? from_rational(*e) : from_double(c);
  return s;
}

ThresholdSchedule ThresholdSchedule::make_constant(Rational c) {
  ThresholdSchedule s;
  s.form = Form::Constant;
  s.constant = from_rational(c);
  return s;
}

ThresholdSchedule ThresholdSchedule::make_formula(std::string id, std::map<std::string, double> params) {
  ThresholdSchedule s;
  s.form = Form::Formula;
  s.formula = std::move(id);
  s.params = std::move(params);
  s.at(2);  // reject unknown ids early
  return s;
}

std::vector<std::string> acceptance_preset_names() {
  return {"prop-6.1-out2", "prop-6.2-maxoutdeg", "prop-B-epi", "prop-B-spectral", "stress-sir"};
}

AcceptanceSpec acceptance_preset(const std::string& name) {
  AcceptanceSpec a;
  if (name == "prop-6.1-out2") {
    a.q.kind = QKind::Moment2Out;
    a.schedule = ThresholdSchedule::make_formula("out2-star-gap", {{"c", 1.0}});
  } else if (name == "prop-6.2-maxoutdeg") {
    a.q.kind = QKind::MaxDegOut;
    a.schedule = ThresholdSchedule::make_constant(Rational(1));
  } else if (name == "prop-B-epi") {
    a.q.kind = QKind::EpidemicRatio;
    a.schedule = ThresholdSchedule::make_formula("line-epi");
  } else if (name == "prop-B-spectral") {
    a.q.kind = QKind::SpectralRadius;
    a.schedule = ThresholdSchedule::make_formula("sqrt-gap", {{"eps", 0.01}});
  } else if (name == "stress-sir") {
    a.q.kind = QKind::StressProbability;
    a.schedule = ThresholdSchedule::make_constant(a.q.stress.lambda);
  } else {
    throw Error("UnknownPreset", "unknown acceptance preset '" + name + "'");
  }
  return a;
}

std::string to_string(Decision d) {
  switch (d) {
    case Decision::Accept: return "accept";
    case Decision::Reject: return "reject";
    case Decision::Indeterminate: return "indeterminate";
  }
  return "?";
}

Verdict is_acceptable(const AcceptanceSpec& spec, const Graph& g) {
  Verdict v;
  v.q = evaluate_q(spec.q, g);
  v.threshold = spec.schedule.at(g.size());
  v.margin = v.threshold.value - v.q.value;
  if (v.q.estimate) {
    const auto& e = *v.q.estimate;
    double l = v.threshold.value;
    if (l >= e.ci_low && l <= e.ci_high)
      v.decision = Decision::Indeterminate;
    else
      v.decision = e.ci_high < l ? Decision::Accept : Decision::Reject;
    return v;
  }
  if (v.q.exact && v.threshold.exact) {
    v.exact_margin = *v.threshold.exact - *v.q.exact;
    v.decision = *v.exact_margin >= Rational(0) ? Decision::Accept : Decision::Reject;
  } else {
    v.decision = v.q.value <= v.threshold.value + 1e-9 ? Decision::Accept : Decision::Reject;
  }
  return v;
}

namespace {

bool accepted_safe(const AcceptanceSpec& spec, const Graph& g) {
  try {
    return is_acceptable(spec, g).accepted();
  } catch (const Error& e) {
    if (e.code() == "DirectedUnsupported") return false;
    throw;
  }
}

Graph in_star(std::size_t n) {
  Graph g = families::edgeless(n);
  for (std::size_t i = 1; i < n; ++i) g.add_edge(static_cast<NodeId>(i), 0);
  return g;
}

template <class F>
bool enumerate_graphs(std::size_t n, bool undirected, F&& visit) {
  std::vector<Edge> slots;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (i != j && (!undirected || i < j)) slots.push_back({i, j});
  if (slots.size() > 24) throw Error("TooLarge", "exhaustive enumeration too large");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    Graph g = families::edgeless(n);
    for (std::size_t b = 0; b < slots.size(); ++b)
      if (mask >> b & 1) {
        g.add_edge(slots[b].first, slots[b].second);
        if (undirected) g.add_edge(slots[b].second, slots[b].first);
      }
    if (visit(g)) return true;
  }
  return false;
}

// super-spreader graphs: node 0 points at every other node (undirected: is
// adjacent to every other node); remaining edges free
template <class F>
bool enumerate_superspreader(std::size_t n, bool undirected, F&& visit) {
  std::vector<Edge> slots;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) {
      if (i == j || (undirected && i > j)) continue;
      if (i == 0) continue;
      if (undirected && j == 0) continue;
      slots.push_back({i, j});
    }
  if (slots.size() > 24) throw Error("TooLarge", "exhaustive enumeration too large");
  Graph base = undirected ? families::undirected_star(n) : families::directed_star(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    Graph g = base;
    for (std::size_t b = 0; b < slots.size(); ++b)
      if (mask >> b & 1) {
        g.add_edge(slots[b].first, slots[b].second);
        if (undirected) g.add_edge(slots[b].second, slots[b].first);
      }
    if (visit(g)) return true;
  }
  return false;
}

bool threshold_le(const Threshold& a, const Threshold& b) {
  if (a.exact && b.exact) return *a.exact <= *b.exact;
  return a.value <= b.value + 1e-9;
}

bool threshold_lt(const Threshold& a, const Threshold& b) {
  if (a.exact && b.exact) return *a.exact < *b.exact;
  return a.value < b.value - 1e-9;
}

}  // namespace

PropertyReport check_P1(const AcceptanceSpec& spec, std::size_t up_to_n) {
  PropertyReport r;
  r.property = "P1";
  r.holds = true;
  for (std::size_t n = 2; n <= up_to_n; ++n) {
    SizeCheck c;
    c.n = n;
    c.method = "edgeless";
    c.ok = accepted_safe(spec, families::edgeless(n));
    if (!c.ok) {
      r.holds = false;
      c.witness = families::edgeless(n);
      if (r.detail.empty()) r.detail = "edgeless graph rejected at N=" + std::to_string(n);
    }
    r.sizes.push_back(std::move(c));
  }
  if (r.holds) r.detail = "edgeless graphs accepted for N=2.." + std::to_string(up_to_n);
  return r;
}

std::optional<ClosedFormValue> min_connected_q(QKind q, std::size_t n) {
  const long long N = static_cast<long long>(n);
  auto ex = [](Rational r) { return ClosedFormValue{from_rational(r), false}; };
  switch (q) {
    case QKind::AvgDegree:
    case QKind::Moment2Out:
    case QKind::Moment2In: return ex(Rational(N - 1, N));
    case QKind::VarianceIn:
    case QKind::VarianceOut:
    case QKind::MaxBetweenness: return ex(0);
    case QKind::MaxDegOut:
    case QKind::MaxDegIn: return ex(N >= 2 ? 1 : 0);
    case QKind::MaxCloseOut:
    case QKind::MaxCloseIn: return ex(N >= 2 ? Rational(1, N - 1) : Rational(0));
    case QKind::EpidemicRatio: return ex(N >= 2 ? Rational(2 * N - 3, N - 1) : Rational(0));
    case QKind::Moment2Total: return ex(N >= 2 ? Rational(4) - Rational(6, N) : Rational(0));
    case QKind::MaxTotalDeg: return ex(N >= 3 ? 2 : N - 1);
    case QKind::SpectralRadius:
      return ClosedFormValue{from_double(2.0 * std::cos(std::numbers::pi / static_cast<double>(N + 1))), false};
    case QKind::StressProbability:
    case QKind::NodeDegree: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<ClosedFormValue> min_superspreader_q(QKind q, std::size_t n) {
  const long long N = static_cast<long long>(n);
  auto ex = [](Rational r) { return ClosedFormValue{from_rational(r), false}; };
  if (N == 1 && q != QKind::StressProbability && q != QKind::NodeDegree) return ex(0);
  switch (q) {
    case QKind::AvgDegree:
    case QKind::Moment2In: return ex(Rational(N - 1, N));
    case QKind::Moment2Out: return ex(Rational((N - 1) * (N - 1), N));
    case QKind::MaxDegOut: return ex(N - 1);
    case QKind::MaxDegIn: return ex(1);
    case QKind::MaxCloseOut: return ex(1);
    case QKind::MaxCloseIn: return ex(Rational(1, N - 1));
    case QKind::MaxBetweenness: return ex(0);
    case QKind::Moment2Total:
    case QKind::MaxTotalDeg: return ex(N - 1);
    case QKind::SpectralRadius: return ClosedFormValue{from_double(std::sqrt(static_cast<double>(N - 1))), false};
    case QKind::EpidemicRatio:
      return ClosedFormValue{from_rational(N <= 6 ? Rational(N, 2) : Rational(4 * N - 1, N + 1)), true};
    default: return std::nullopt;
  }
}

PropertyReport check_P2(const AcceptanceSpec& spec, const std::vector<std::size_t>& sizes, CheckMode mode,
                        std::size_t exhaustive_limit) {
  PropertyReport r;
  r.property = "P2";
  const bool ud = q_requires_undirected(spec.q.kind);
  for (std::size_t n : sizes) {
    SizeCheck c;
    c.n = n;
    if (mode == CheckMode::ClosedForm) {
      auto cf = min_connected_q(spec.q.kind, n);
      if (!cf) throw Error("NoClosedForm", "no closed form registered for " + q_name(spec.q.kind));
      c.method = "closed-form";
      c.ok = threshold_le(cf->value, spec.schedule.at(n));
      c.note = "min Q over weakly connected graphs = " + cf->value.text() + ", l_N = " + spec.schedule.at(n).text();
    } else {
      std::vector<Graph> wit;
      if (ud) {
        wit = {families::undirected_line(n), families::bidirectional_ring(n), families::undirected_star(n),
               families::complete(n)};
      } else {
        wit = {families::directed_line(n), in_star(n), families::directed_ring(n), families::bidirectional_ring(n),
               families::directed_star(n), families::complete(n)};
      }
      for (const auto& g : wit)
        if (connectivity(g).weak && accepted_safe(spec, g)) {
          c.ok = true;
          c.method = "witness";
          c.witness = g;
          break;
        }
      if (!c.ok && n <= exhaustive_limit) {
        c.method = "exhaustive";
        enumerate_graphs(n, ud, [&](const Graph& g) {
          if (!connectivity(g).weak || !accepted_safe(spec, g)) return false;
          c.ok = true;
          c.witness = g;
          return true;
        });
      }
      if (c.method.empty()) c.method = "witness";
    }
    r.sizes.push_back(std::move(c));
  }
  for (std::size_t i = r.sizes.size(); i-- > 0;) {
    if (!r.sizes[i].ok) break;
    r.first_size = r.sizes[i].n;
  }
  r.holds = r.first_size.has_value();
  r.detail = r.holds ? "acceptable weakly connected graphs for every size from N=" + std::to_string(*r.first_size) +
                           " in the window"
                     : "no acceptable weakly connected graph at the largest size checked";
  return r;
}

PropertyReport check_P3(const AcceptanceSpec& spec, const std::vector<std::size_t>& sizes, CheckMode mode,
                        std::size_t exhaustive_limit) {
  PropertyReport r;
  r.property = "P3";
  r.holds = true;
  const bool ud = q_requires_undirected(spec.q.kind);
  for (std::size_t n : sizes) {
    SizeCheck c;
    c.n = n;
    bool decided = false;
    if (mode == CheckMode::ClosedForm) {
      auto cf = min_superspreader_q(spec.q.kind, n);
      if (!cf) throw Error("NoClosedForm", "no closed form registered for " + q_name(spec.q.kind));
      Threshold l = spec.schedule.at(n);
      c.method = cf->lower_bound_only ? "closed-form-bound" : "closed-form";
      c.note = "min Q over super-spreader graphs " + std::string(cf->lower_bound_only ? ">= " : "= ") +
               cf->value.text() + ", l_N = " + l.text();
      if (threshold_lt(l, cf->value)) {
        c.ok = true;
        decided = true;
      } else if (!cf->lower_bound_only) {
        c.ok = false;
        decided = true;
      }
    }
    if (!decided) {
      Graph star = ud ? families::undirected_star(n) : families::directed_star(n);
      if (accepted_safe(spec, star)) {
        c.ok = false;
        c.witness = star;
        c.method = c.method.empty() ? "star" : c.method + "+star";
      } else if (n <= exhaustive_limit) {
        c.method = c.method.empty() ? "exhaustive" : c.method + "+exhaustive";
        c.ok = true;
        enumerate_superspreader(n, ud, [&](const Graph& g) {
          if (!accepted_safe(spec, g)) return false;
          c.ok = false;
          c.witness = g;
          return true;
        });
      } else {
        c.ok = true;
        c.method = c.method.empty() ? "star" : c.method + "+star";
        c.note = "only the star family was checked at this size";
      }
    }
    if (!c.ok) {
      if (r.holds) r.detail = "acceptable super-spreader graph at N=" + std::to_string(n);
      r.holds = false;
    }
    r.sizes.push_back(std::move(c));
  }
  if (r.holds) r.detail = "no acceptable super-spreader graph found at the checked sizes";
  return r;
}

Graph random_digraph(std::size_t n, double p, std::uint64_t seed) {
  Graph g = families::edgeless(n);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j)
      if (i != j && to_unit(hash_key(seed, {i, j})) < p) g.add_edge(i, j);
  return g;
}

Graph random_undirected(std::size_t n, double p, std::uint64_t seed) {
  Graph g = families::edgeless(n);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j)
      if (to_unit(hash_key(seed, {i, j})) < p) {
        g.add_edge(i, j);
        g.add_edge(j, i);
      }
  return g;
}

namespace {

bool same_q(const QValue& a, const QValue& b) {
  if (a.estimate && b.estimate)
    return a.estimate->ci_low <= b.estimate->ci_high && b.estimate->ci_low <= a.estimate->ci_high;
  if (a.exact && b.exact) return *a.exact == *b.exact;
  return std::abs(a.value - b.value) <= 1e-9 * std::max(1.0, std::abs(a.value));
}

}  // namespace

PropertyReport check_P4(const AcceptanceSpec& spec, std::size_t graphs, std::size_t perms, std::uint64_t seed,
                        std::size_t max_n, unsigned workers) {
  PropertyReport r;
  r.property = "P4";
  const bool ud = q_requires_undirected(spec.q.kind);
  std::vector<std::string> failure(graphs);
  std::vector<std::optional<Graph>> witness(graphs);
  parallel_for(graphs, workers, [&](std::size_t i) {
    std::mt19937_64 rng(hash_key(seed, {i}));
    std::size_t n = 1 + rng() % max_n;
    double p = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    Graph g = ud ? random_undirected(n, p, rng()) : random_digraph(n, p, rng());
    auto v0 = is_acceptable(spec, g);
    for (std::size_t k = 0; k < perms; ++k) {
      std::vector<NodeId> labels(2 * n);
      for (std::size_t j = 0; j < labels.size(); ++j) labels[j] = static_cast<NodeId>(j);
      std::shuffle(labels.begin(), labels.end(), rng);
      std::map<NodeId, NodeId> perm;
      for (NodeId j = 0; j < n; ++j) perm[j] = labels[j];
      Graph h = relabel(g, perm);
      auto v1 = is_acceptable(spec, h);
      if (!same_q(v0.q, v1.q) || (!v0.q.estimate && v0.decision != v1.decision)) {
        failure[i] = "Q changed under relabeling: " + v0.q.text() + " vs " + v1.q.text() + " on " + describe(g);
        witness[i] = g;
        return;
      }
    }
  });
  r.holds = true;
  for (std::size_t i = 0; i < graphs; ++i)
    if (!failure[i].empty()) {
      r.holds = false;
      r.detail = failure[i];
      SizeCheck c;
      c.n = witness[i]->size();
      c.method = "permutation";
      c.witness = witness[i];
      r.sizes.push_back(c);
      break;
    }
  if (r.holds)
    r.detail = std::to_string(graphs) + " graphs x " + std::to_string(perms) + " relabelings left Q unchanged";
  return r;
}

bool q_increased(const QValue& before, const QValue& after, double tol) {
  if (before.exact && after.exact) return *after.exact > *before.exact;
  return after.value > before.value + tol;
}

namespace {

std::vector<Graph> adversarial_library() {
  std::vector<Graph> lib;
  lib.push_back(families::bidirectional_ring(5));
  lib.push_back(disjoint_union(families::complete(3), families::edgeless(3)));
  lib.push_back(disjoint_union(families::undirected_star(5), families::undirected_line(2)));
  lib.push_back(families::directed_star(4));
  lib.push_back(families::undirected_star(4));
  lib.push_back(families::complete(4));
  lib.push_back(families::directed_line(4));
  lib.push_back(families::undirected_line(5));
  return lib;
}

struct Probe {
  bool hit = false;
  bool skipped = false;
  Graph g;
  Intervention k;
  QValue before, after;
};

Probe probe(const QSpec& q, const Graph& g, const Intervention& k) {
  Probe p;
  try {
    p.before = evaluate_q(q, g);
    Graph h = netres::apply(k, g);
    p.after = evaluate_q(q, h);
  } catch (const Error& e) {
    if (e.code() == "EmptyGraph" || e.code() == "DirectedUnsupported" || e.code() == "TooSmall") {
      p.skipped = true;
      return p;
    }
    throw;
  }
  p.hit = q_increased(p.before, p.after);
  p.g = g;
  p.k = k;
  return p;
}

}  // namespace

MonotonicityVerdict falsify_monotonicity(const QSpec& q, const InterventionSet& iset, std::size_t trials,
                                         std::size_t min_n, std::size_t max_n, std::uint64_t seed,
                                         unsigned workers) {
  MonotonicityVerdict v;
  const bool ud = q_requires_undirected(q.kind);
  for (const auto& g : adversarial_library()) {
    if (ud && !g.is_undirected()) continue;
    for (const auto& k : candidates(g, iset)) {
      auto p = probe(q, g, k);
      if (p.hit) {
        v.counterexample = true;
        v.graph = p.g;
        v.intervention = p.k;
        v.before = p.before;
        v.after = p.after;
        v.source = "adversarial";
        return v;
      }
    }
  }
  std::vector<Probe> res(trials);
  parallel_for(trials, workers, [&](std::size_t i) {
    std::mt19937_64 rng(hash_key(seed, {0x7a11, i}));
    std::size_t n = min_n + rng() % (max_n - min_n + 1);
    double p = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    Graph g = ud ? random_undirected(n, p, rng()) : random_digraph(n, p, rng());
    auto cands = candidates(g, iset);
    if (cands.empty()) {
      res[i].skipped = true;
      return;
    }
    res[i] = probe(q, g, cands[rng() % cands.size()]);
  });
  v.trials = trials;
  for (const auto& p : res) {
    if (p.skipped) ++v.skipped;
    if (p.hit && !v.counterexample) {
      v.counterexample = true;
      v.graph = p.g;
      v.intervention = p.k;
      v.before = p.before;
      v.after = p.after;
      v.source = "random";
    }
  }
  return v;
}

RiskReducingVerdict is_risk_reducing(const InterventionSet& iset, const AcceptanceSpec& spec,
                                     const std::vector<Graph>& samples, std::size_t depth, std::size_t max_states) {
  RiskReducingVerdict v;
  for (const auto& g : samples) {
    if (!accepted_safe(spec, g)) continue;
    ++v.checked_graphs;
    auto reach = reachable_set(g, iset, depth, max_states);
    for (std::size_t i = 1; i < reach.states.size(); ++i) {
      bool ok = false;
      try {
        ok = accepted_safe(spec, reach.states[i]);
      } catch (const Error&) {
        ok = false;
      }
      if (!ok) {
        v.counterexample = true;
        v.graph = g;
        v.strategy = reach.paths[i];
        v.result = reach.states[i];
        return v;
      }
    }
  }
  return v;
}

}  // namespace netres

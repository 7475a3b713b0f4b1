#include "netres/costs.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include "netres/metrics.hpp"
#include "netres/stress.hpp"

namespace netres {

std::string price_scope(const Intervention& k) {
  auto p1 = [](NodeId v) { return "(" + std::to_string(v) + ")"; };
  auto p2 = [](NodeId v, NodeId w) { return "(" + std::to_string(v) + "," + std::to_string(w) + ")"; };
  std::string args = std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, iv::Identity>) return "";
        else if constexpr (std::is_same_v<T, iv::NodeDel> || std::is_same_v<T, iv::NodeAdd> ||
                           std::is_same_v<T, iv::NodeSplit> || std::is_same_v<T, iv::USplit> ||
                           std::is_same_v<T, iv::NodeCopy>)
          return p1(x.v);
        else if constexpr (std::is_same_v<T, iv::Isolate>) {
          std::string s = "{";
          for (NodeId v : x.nodes) s += (s.size() > 1 ? "," : "") + std::to_string(v);
          return s + "}";
        } else if constexpr (std::is_same_v<T, iv::EdgeShift> || std::is_same_v<T, iv::UEdgeShift>)
          return p2(x.from.first, x.from.second);
        else if constexpr (std::is_same_v<T, iv::NodeMerge>) return p2(x.v, x.other);
        else if constexpr (std::is_same_v<T, iv::Kelmans>) return p2(x.v, x.u);
        else return p2(x.v, x.w);
      },
      k);
  return kind_name(kind_of(k)) + ":" + args;
}

std::optional<double> PriceTable::price(const Intervention& k) const {
  if (std::holds_alternative<iv::Identity>(k)) return 0.0;
  if (auto it = scoped.find(price_scope(k)); it != scoped.end()) return it->second;
  if (auto it = base.find(kind_name(kind_of(k))); it != base.end()) return it->second;
  return fallback;
}

double PriceTable::min_price() const {
  double m = kInf;
  for (const auto& [k, p] : base) m = std::min(m, p);
  for (const auto& [k, p] : scoped) m = std::min(m, p);
  if (fallback) m = std::min(m, *fallback);
  return m;
}

void PriceTable::validate() const {
  auto check = [](const std::string& k, double p) {
    if (!(p >= 0) || !std::isfinite(p)) throw Error("InvalidPrice", "price for '" + k + "' must be finite and >= 0");
  };
  for (const auto& [k, p] : base) {
    kind_from_name(k);
    check(k, p);
  }
  for (const auto& [k, p] : scoped) check(k, p);
  if (fallback) check("default", *fallback);
  if (auto it = base.find("identity"); it != base.end() && it->second != 0.0)
    throw Error("InvalidPrice", "identity must cost 0");
}

PriceTable PriceTable::unit(const InterventionSet& iset, double p) {
  PriceTable t;
  for (Kind k : iset.kinds) t.base[kind_name(k)] = p;
  return t;
}

double MonotoneMap::operator()(double x) const {
  switch (kind) {
    case Kind::Identity: return x;
    case Kind::Scale: return a * x;
    case Kind::SoftCap: return cap * std::tanh(a * x / cap);
  }
  return x;
}

std::string MonotoneMap::name() const {
  switch (kind) {
    case Kind::Identity: return "identity";
    case Kind::Scale: return "scale";
    case Kind::SoftCap: return "softcap";
  }
  return "?";
}

bool is_path_additive(const CostModel& m) {
  return std::holds_alternative<cost::Monetary>(m) || std::holds_alternative<cost::UnitCount>(m);
}

std::string model_name(const CostModel& m) {
  switch (m.index()) {
    case 0: return "monetary";
    case 1: return "efficiency";
    case 2: return "communicability";
    default: return "unit";
  }
}

double step_cost(const CostModel& m, const Intervention& k, const Graph& g) {
  if (auto* mon = std::get_if<cost::Monetary>(&m)) {
    auto p = mon->prices.price(k);
    if (!p) throw Error("Unpriced", "no price for '" + to_text(k) + "'");
    return *p;
  }
  if (std::holds_alternative<cost::UnitCount>(m))
    return !std::holds_alternative<iv::Identity>(k) && is_effective(k, g) ? 1.0 : 0.0;
  throw Error("Malformed", "step prices exist only for monetary and unit models");
}

double functionality(const CostModel& m, const Graph& g) {
  if (std::holds_alternative<cost::Efficiency>(m)) return graph_efficiency(g);
  if (std::holds_alternative<cost::Communicability>(m)) return avg_communicability(g);
  throw Error("Malformed", "functionality is defined only for efficiency and communicability models");
}

double functional_cost(const CostModel& m, const Graph& g, const Graph& h) {
  const MonotoneMap& map =
      std::holds_alternative<cost::Efficiency>(m) ? std::get<cost::Efficiency>(m).h : std::get<cost::Communicability>(m).h;
  return map(functionality(m, g) - functionality(m, h));
}

double strategy_cost(const CostModel& m, const Strategy& s, const Graph& g) {
  if (!is_path_additive(m)) return functional_cost(m, g, apply_strategy(s, g));
  double c = 0.0;
  Graph cur = g;
  for (const auto& k : s) {
    c += step_cost(m, k, cur);
    cur = netres::apply(k, cur);
  }
  return c;
}

std::string to_string(CostStatus s) {
  switch (s) {
    case CostStatus::Found: return "found";
    case CostStatus::BudgetLimited: return "budget-limited";
    case CostStatus::ProvenUnreachable: return "proven-unreachable";
  }
  return "?";
}

namespace {

struct Label {
  double cost;
  std::size_t depth;
  std::string enc;
  Graph g;
  Strategy path;
};

struct LabelOrder {
  bool operator()(const Label& a, const Label& b) const {
    if (a.cost != b.cost) return a.cost > b.cost;
    if (a.depth != b.depth) return a.depth > b.depth;
    return a.enc > b.enc;
  }
};

bool dominated(const std::vector<std::pair<double, std::size_t>>& labels, double c, std::size_t d) {
  return std::any_of(labels.begin(), labels.end(),
                     [&](const auto& l) { return l.first <= c + 1e-12 && l.second <= d; });
}

}  // namespace

CostMap cost_map(const CostModel& m, const Graph& g, const InterventionSet& iset, const SearchBudget& budget,
                 const std::function<bool(const Graph&)>& stop_at) {
  CostMap res;
  if (!is_path_additive(m)) {
    auto reach = reachable_set(g, iset, budget.depth, budget.max_states, false, true);
    res.truncated = reach.incomplete || reach.depth_limited;
    for (std::size_t i = 0; i < reach.states.size(); ++i) {
      res.best[reach.states[i]] = {functional_cost(m, g, reach.states[i]), reach.paths[i]};
      if (stop_at && !res.goal && stop_at(reach.states[i])) res.goal = reach.states[i];
    }
    return res;
  }
  if (auto* mon = std::get_if<cost::Monetary>(&m)) mon->prices.validate();
  std::priority_queue<Label, std::vector<Label>, LabelOrder> pq;
  std::map<Graph, std::vector<std::pair<double, std::size_t>>> settled;
  pq.push({0.0, 0, "", g, {}});
  while (!pq.empty()) {
    Label l = pq.top();
    pq.pop();
    auto it = settled.find(l.g);
    if (it != settled.end() && dominated(it->second, l.cost, l.depth)) continue;
    if (it == settled.end()) {
      if (settled.size() >= budget.max_states) {
        res.truncated = true;
        continue;
      }
      it = settled.emplace(l.g, std::vector<std::pair<double, std::size_t>>{}).first;
      res.best[l.g] = {l.cost, l.path};
    }
    it->second.emplace_back(l.cost, l.depth);
    if (stop_at && stop_at(l.g)) {
      res.goal = l.g;
      return res;
    }
    ++res.expanded;
    auto cands = candidates(l.g, iset);
    if (l.depth >= budget.depth) {
      if (!res.truncated)
        for (const auto& k : cands)
          if (!settled.count(netres::apply(k, l.g))) {
            res.truncated = true;
            break;
          }
      continue;
    }
    for (const auto& k : cands) {
      Graph h = netres::apply(k, l.g);
      double c = l.cost + step_cost(m, k, l.g);
      auto sit = settled.find(h);
      if (sit != settled.end() && dominated(sit->second, c, l.depth + 1)) continue;
      Strategy p = l.path;
      p.push_back(k);
      std::string enc = encode(p);
      pq.push({c, l.depth + 1, std::move(enc), std::move(h), std::move(p)});
    }
  }
  return res;
}

CostResult transformation_cost(const CostModel& m, const Graph& g, const Graph& target, const InterventionSet& iset,
                               const SearchBudget& budget) {
  CostResult r;
  if (!is_path_additive(m)) {
    r.value = functional_cost(m, g, target);
    r.status = CostStatus::Found;
    return r;
  }
  auto cm = cost_map(m, g, iset, budget, [&](const Graph& h) { return h == target; });
  r.expanded = cm.expanded;
  if (cm.goal) {
    const auto& e = cm.best.at(target);
    r.value = e.cost;
    r.witness = e.path;
    r.status = CostStatus::Found;
  } else {
    r.status = cm.truncated ? CostStatus::BudgetLimited : CostStatus::ProvenUnreachable;
  }
  return r;
}

AxiomReport check_cost_axioms(const CostModel& m, const InterventionSet& iset, const std::vector<Graph>& samples,
                              const SearchBudget& budget, std::size_t triples_per_graph, std::uint64_t seed) {
  AxiomReport rep;
  auto note = [](AxiomResult& a, const std::string& w) {
    ++a.violations;
    if (a.witness.empty()) a.witness = w;
  };
  SearchBudget twice = budget;
  twice.depth = 2 * budget.depth;
  for (std::size_t gi = 0; gi < samples.size(); ++gi) {
    const Graph& g = samples[gi];
    auto from_g = cost_map(m, g, iset, budget);
    ++rep.c1.checked;
    if (from_g.best.at(g).cost != 0.0) note(rep.c1, "C(G,G) != 0 for " + describe(g));
    for (const auto& [h, e] : from_g.best) {
      if (h == g) continue;
      ++rep.c2.checked;
      ++rep.c3.checked;
      if (e.cost < -1e-12) note(rep.c2, "C < 0 for " + describe(g) + " -> " + describe(h) + " via " + encode(e.path));
      if (std::abs(e.cost) <= 1e-15)
        note(rep.c3, "C = 0 but G != H for " + describe(g) + " -> " + describe(h) + " via " + encode(e.path));
    }
    if (triples_per_graph == 0 || from_g.best.size() < 2) continue;
    auto wide = is_path_additive(m) ? cost_map(m, g, iset, twice) : from_g;
    std::vector<const Graph*> mids;
    for (const auto& [h, e] : from_g.best) mids.push_back(&h);
    std::mt19937_64 rng(hash_key(seed, {gi}));
    for (std::size_t t = 0; t < triples_per_graph; ++t) {
      const Graph& mid = *mids[rng() % mids.size()];
      auto from_m = cost_map(m, mid, iset, budget);
      auto pick = from_m.best.begin();
      std::advance(pick, static_cast<long>(rng() % from_m.best.size()));
      const Graph& h = pick->first;
      double c_gm = from_g.best.at(mid).cost, c_mh = pick->second.cost;
      double c_gh;
      if (is_path_additive(m)) {
        auto it = wide.best.find(h);
        if (it == wide.best.end()) {
          if (wide.truncated) continue;
          note(rep.c4, "no strategy G -> H within twice the depth although G -> M -> H exists: " + describe(g));
          continue;
        }
        c_gh = it->second.cost;
      } else {
        c_gh = functional_cost(m, g, h);
      }
      ++rep.c4.checked;
      if (c_gh > c_gm + c_mh + 1e-9)
        note(rep.c4, "C(G,H) > C(G,M) + C(M,H) for G=" + describe(g) + " M=" + describe(mid) + " H=" + describe(h));
    }
  }
  return rep;
}

}  // namespace netres

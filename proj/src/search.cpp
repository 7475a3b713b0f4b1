#include "netres/search.hpp"

#include <algorithm>
#include <cmath>

namespace netres {

std::string to_string(RhoStatus s) {
  switch (s) {
    case RhoStatus::Optimal: return "optimal-within-budget";
    case RhoStatus::BudgetLimited: return "budget-limited";
    case RhoStatus::Unreachable: return "unreachable";
  }
  return "?";
}

namespace {

std::optional<Verdict> verdict_or_none(const AcceptanceSpec& spec, const Graph& g) {
  try {
    return is_acceptable(spec, g);
  } catch (const Error& e) {
    if (e.code() == "DirectedUnsupported" || e.code() == "EmptyGraph" || e.code() == "TooSmall") return std::nullopt;
    throw;
  }
}

bool acceptable(const AcceptanceSpec& spec, const Graph& g) {
  auto v = verdict_or_none(spec, g);
  return v && v->accepted();
}

}  // namespace

RhoResult rho(const Graph& g, const DmfnrPreset& preset, const SearchBudget& budget) {
  RhoResult r;
  const bool additive = is_path_additive(preset.cost);
  if (additive && acceptable(preset.acceptance, g)) {
    r.value = 0.0;
    r.witness = Strategy{};
    r.status = RhoStatus::Optimal;
    r.result = g;
    return r;
  }
  if (additive) {
    auto cm = cost_map(preset.cost, g, preset.iset, budget,
                       [&](const Graph& h) { return acceptable(preset.acceptance, h); });
    r.expanded = cm.expanded;
    if (cm.goal) {
      const auto& e = cm.best.at(*cm.goal);
      r.value = e.cost;
      r.witness = e.path;
      r.result = *cm.goal;
      r.status = RhoStatus::Optimal;
    } else {
      r.status = cm.truncated ? RhoStatus::BudgetLimited : RhoStatus::Unreachable;
    }
    return r;
  }
  auto reach = reachable_set(g, preset.iset, budget.depth, budget.max_states, false, true);
  r.expanded = reach.states.size();
  for (std::size_t i = 0; i < reach.states.size(); ++i) {
    if (!acceptable(preset.acceptance, reach.states[i])) continue;
    double c = functional_cost(preset.cost, g, reach.states[i]);
    if (c < r.value) {
      r.value = c;
      r.witness = reach.paths[i];
      r.result = reach.states[i];
    }
  }
  if (r.witness)
    r.status = RhoStatus::Optimal;
  else
    r.status = reach.incomplete || reach.depth_limited ? RhoStatus::BudgetLimited : RhoStatus::Unreachable;
  return r;
}

RhoPropertyReport verify_rho_properties(const DmfnrPreset& preset, const std::vector<Graph>& samples,
                                        const SearchBudget& budget) {
  RhoPropertyReport rep;
  if (std::holds_alternative<cost::UnitCount>(preset.cost)) {
    rep.nu_applicable = true;
    rep.nu = 1.0;
  } else if (auto* mon = std::get_if<cost::Monetary>(&preset.cost)) {
    rep.nu = mon->prices.min_price();
    rep.nu_applicable = rep.nu > 0 && std::isfinite(rep.nu);
  }
  auto fail = [&](const std::string& what, const Graph& g) {
    if (rep.first_failure.empty()) rep.first_failure = what + " on " + describe(g);
  };
  for (const auto& g : samples) {
    ++rep.graphs;
    bool acc = acceptable(preset.acceptance, g);
    auto r = rho(g, preset, budget);
    if (r.status == RhoStatus::BudgetLimited) ++rep.budget_limited;
    if (acc) {
      ++rep.zero_on_accepted;
      if (r.value != 0.0) {
        ++rep.zero_on_accepted_fail;
        fail("rho != 0 on an acceptable graph", g);
      }
    } else {
      if (r.value < 0) {
        ++rep.nonneg_fail;
        fail("rho < 0 off the acceptance set", g);
      }
      if (rep.nu_applicable && r.value < rep.nu - 1e-12) {
        ++rep.nu_fail;
        fail("rho below the minimal price off the acceptance set", g);
      }
    }
    if ((r.value == 0.0) != acc) {
      ++rep.zero_iff_accepted_fail;
      fail("{rho = 0} differs from the acceptance set", g);
    }
  }
  return rep;
}

SuggestResult suggest_greedy(const Graph& g, const DmfnrPreset& preset, std::size_t beam_width,
                             std::size_t max_steps) {
  SuggestResult res;
  auto v0 = verdict_or_none(preset.acceptance, g);
  if (v0 && v0->accepted()) {
    res.ranked.push_back({{}, 0.0, v0->margin, true});
    return res;
  }
  if (preset.iset.empty()) {
    res.diagnostic = "no admissible interventions";
    return res;
  }
  const bool additive = is_path_additive(preset.cost);
  struct Node {
    Strategy s;
    Graph g;
    double cost;
    double margin;
    std::string enc;
  };
  auto order = [](const Node& a, const Node& b) {
    if (a.margin != b.margin) return a.margin > b.margin;
    if (a.cost != b.cost) return a.cost < b.cost;
    return a.enc < b.enc;
  };
  std::vector<Node> beam{{{}, g, 0.0, v0 ? v0->margin : -kInf, ""}};
  std::map<Graph, Node> found;
  for (std::size_t step = 0; step < max_steps && !beam.empty(); ++step) {
    std::map<Graph, Node> next;
    for (const auto& b : beam)
      for (const auto& k : candidates(b.g, preset.iset)) {
        Graph h = netres::apply(k, b.g);
        Strategy s = b.s;
        s.push_back(k);
        double c = additive ? b.cost + step_cost(preset.cost, k, b.g) : functional_cost(preset.cost, g, h);
        auto v = verdict_or_none(preset.acceptance, h);
        Node n{s, h, c, v ? v->margin : -kInf, encode(s)};
        auto& pool = v && v->accepted() ? found : next;
        auto it = pool.find(h);
        if (it == pool.end() || n.cost < it->second.cost ||
            (n.cost == it->second.cost && n.enc < it->second.enc))
          pool[h] = std::move(n);
      }
    beam.clear();
    for (auto& [h, n] : next)
      if (!found.count(h)) beam.push_back(std::move(n));
    std::sort(beam.begin(), beam.end(), order);
    if (beam.size() > beam_width) beam.resize(beam_width);
  }
  std::vector<Node> acc;
  for (auto& [h, n] : found) acc.push_back(std::move(n));
  std::sort(acc.begin(), acc.end(), [](const Node& a, const Node& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.margin != b.margin) return a.margin > b.margin;
    return a.enc < b.enc;
  });
  for (std::size_t i = 0; i < acc.size() && i < beam_width; ++i)
    res.ranked.push_back({acc[i].s, acc[i].cost, acc[i].margin, true});
  if (res.ranked.empty()) res.diagnostic = "no acceptable state within " + std::to_string(max_steps) + " steps";
  return res;
}

}  // namespace netres

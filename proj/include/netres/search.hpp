#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netres/acceptance.hpp"
#include "netres/costs.hpp"
#include "netres/interventions.hpp"

namespace netres {

struct DmfnrPreset {
  AcceptanceSpec acceptance;
  InterventionSet iset;
  CostModel cost = cost::UnitCount{};
};

enum class RhoStatus { Optimal, BudgetLimited, Unreachable };
std::string to_string(RhoStatus s);

struct RhoResult {
  double value = kInf;
  std::optional<Strategy> witness;
  RhoStatus status = RhoStatus::BudgetLimited;
  std::optional<Graph> result;
  std::size_t expanded = 0;
};

// Indeterminate stress verdicts do not count as acceptable.
RhoResult rho(const Graph& g, const DmfnrPreset& preset, const SearchBudget& budget);

struct RhoPropertyReport {
  std::size_t graphs = 0;
  std::size_t zero_on_accepted = 0, zero_on_accepted_fail = 0;
  std::size_t nonneg_fail = 0;
  bool nu_applicable = false;
  double nu = 0.0;
  std::size_t nu_fail = 0;
  std::size_t zero_iff_accepted_fail = 0;
  std::size_t budget_limited = 0;
  std::string first_failure;
  bool ok() const { return !zero_on_accepted_fail && !nonneg_fail && !nu_fail && !zero_iff_accepted_fail; }
};

RhoPropertyReport verify_rho_properties(const DmfnrPreset& preset, const std::vector<Graph>& samples,
                                        const SearchBudget& budget);

struct Suggestion {
  Strategy strategy;
  double cost = 0.0;
  double margin = 0.0;
  bool accepted = false;
};

struct SuggestResult {
  std::vector<Suggestion> ranked;
  std::string diagnostic;
};

SuggestResult suggest_greedy(const Graph& g, const DmfnrPreset& preset, std::size_t beam_width,
                             std::size_t max_steps);

}  // namespace netres

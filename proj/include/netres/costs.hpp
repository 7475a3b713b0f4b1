#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "netres/graph.hpp"
#include "netres/interventions.hpp"

namespace netres {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Base prices by intervention name, with scoped overrides such as
// "edge_del:(3,7)". Identity is always free.
struct PriceTable {
  std::map<std::string, double> base;
  std::map<std::string, double> scoped;
  std::optional<double> fallback;

  std::optional<double> price(const Intervention& k) const;
  double min_price() const;  // smallest listed price
  void validate() const;
  static PriceTable unit(const InterventionSet& iset, double p = 1.0);
};

std::string price_scope(const Intervention& k);  // "edge_del:(3,7)", "node_del:(2)", ...

struct MonotoneMap {
  enum class Kind { Identity, Scale, SoftCap } kind = Kind::Identity;
  double a = 1.0;
  double cap = 1.0;
  double operator()(double x) const;
  bool subadditive() const { return kind != Kind::SoftCap; }
  std::string name() const;
};

namespace cost {
struct Monetary { PriceTable prices; };
struct Efficiency { MonotoneMap h; };
struct Communicability { MonotoneMap h; };
struct UnitCount {};
}  // namespace cost
using CostModel = std::variant<cost::Monetary, cost::Efficiency, cost::Communicability, cost::UnitCount>;

bool is_path_additive(const CostModel& m);  // Monetary or UnitCount
std::string model_name(const CostModel& m);

// price of a single step applied to g (UnitCount: 1 if effective)
double step_cost(const CostModel& m, const Intervention& k, const Graph& g);
double functionality(const CostModel& m, const Graph& g);
// h(F(g) - F(h)) for functionality models
double functional_cost(const CostModel& m, const Graph& g, const Graph& h);

double strategy_cost(const CostModel& m, const Strategy& s, const Graph& g);

struct SearchBudget {
  std::size_t depth = 4;
  std::size_t max_states = 200000;
};

enum class CostStatus { Found, BudgetLimited, ProvenUnreachable };
std::string to_string(CostStatus s);

struct CostResult {
  double value = kInf;
  std::optional<Strategy> witness;
  CostStatus status = CostStatus::BudgetLimited;
  std::size_t expanded = 0;
};

struct CostMap {
  struct Entry {
    double cost = 0.0;
    Strategy path;
  };
  std::map<Graph, Entry> best;  // cheapest strategy of at most `depth` steps
  bool truncated = false;       // some state or depth limit cut the search
  std::size_t expanded = 0;
  std::optional<Graph> goal;    // first state satisfying stop_at
};

// Labels are (cost, depth) pairs kept Pareto-minimal per state, so the depth
// bound does not hide a cheaper longer path. stop_at, when set, ends the
// search once that state is settled.
CostMap cost_map(const CostModel& m, const Graph& g, const InterventionSet& iset, const SearchBudget& budget,
                 const std::function<bool(const Graph&)>& stop_at = {});

// Uniform-cost search over labelled states; ties by strategy encoding.
CostResult transformation_cost(const CostModel& m, const Graph& g, const Graph& target, const InterventionSet& iset,
                               const SearchBudget& budget);

struct AxiomResult {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::string witness;
};

struct AxiomReport {
  AxiomResult c1, c2, c3, c4;  // c3 is the restricted form on sigma(G)
  bool all_pass() const { return !c1.violations && !c2.violations && !c3.violations && !c4.violations; }
};

AxiomReport check_cost_axioms(const CostModel& m, const InterventionSet& iset, const std::vector<Graph>& samples,
                              const SearchBudget& budget, std::size_t triples_per_graph = 50,
                              std::uint64_t seed = 1);

}  // namespace netres

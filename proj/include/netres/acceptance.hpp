#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netres/graph.hpp"
#include "netres/interventions.hpp"
#include "netres/metrics.hpp"
#include "netres/stress.hpp"

namespace netres {

enum class QKind {
  AvgDegree, Moment2Out, Moment2In, VarianceIn, VarianceOut, MaxDegOut, MaxDegIn, MaxCloseOut, MaxCloseIn,
  MaxBetweenness, EpidemicRatio, SpectralRadius, StressProbability, MaxTotalDeg, Moment2Total,
  NodeDegree  // total in+out degree of one labelled node; deliberately not relabeling invariant
};

std::string q_name(QKind k);
QKind q_from_name(const std::string& s);
bool q_requires_undirected(QKind k);
bool q_discouraged(QKind k);

struct QSpec {
  QKind kind = QKind::Moment2Out;
  StressConfig stress;   // StressProbability only
  NodeId node = 0;       // NodeDegree only
  unsigned workers = 1;  // StressProbability sampling
};

struct QValue {
  double value = 0.0;
  std::optional<Rational> exact;
  std::optional<StressEstimate> estimate;
  std::string text() const;  // exact fraction when available
};

QValue evaluate_q(const QSpec& q, const Graph& g);

struct Threshold {
  double value = 0.0;
  std::optional<Rational> exact;
  std::string text() const;
};

// Formula ids: "out2-star-gap" ((N-1)^2 - c)/N, "line-out2" (N-1)/N,
// "line-epi" 2 - 1/(N-1), "line-k2" 4 - 6/N, "sqrt-gap" sqrt(N-1) - eps,
// "line-spectral" 2cos(pi/(N+1)), "epi-star-bound" N/2 or (4N-1)/(N+1) minus eps.
struct ThresholdSchedule {
  enum class Form { Constant, Table, Formula } form = Form::Constant;
  Threshold constant;
  std::map<std::size_t, Threshold> table;
  Threshold table_default;
  std::string formula;
  std::map<std::string, double> params;

  Threshold at(std::size_t n) const;
  static ThresholdSchedule make_constant(double c);
  static ThresholdSchedule make_constant(Rational c);
  static ThresholdSchedule make_formula(std::string id, std::map<std::string, double> params = {});
};

struct AcceptanceSpec {
  QSpec q;
  ThresholdSchedule schedule;
};

AcceptanceSpec acceptance_preset(const std::string& name);
std::vector<std::string> acceptance_preset_names();

enum class Decision { Accept, Reject, Indeterminate };
std::string to_string(Decision d);

struct Verdict {
  Decision decision = Decision::Reject;
  QValue q;
  Threshold threshold;
  double margin = 0.0;  // l_N - Q(G)
  std::optional<Rational> exact_margin;
  bool accepted() const { return decision == Decision::Accept; }
};

Verdict is_acceptable(const AcceptanceSpec& spec, const Graph& g);

struct SizeCheck {
  std::size_t n = 0;
  bool ok = false;
  std::string method;  // "witness", "exhaustive", "closed-form", ...
  std::optional<Graph> witness;
  std::string note;
};

struct PropertyReport {
  std::string property;
  bool holds = false;
  std::vector<SizeCheck> sizes;
  std::string detail;
  std::optional<std::size_t> first_size;  // smallest size with a witness (P2)
};

enum class CheckMode { WitnessSearch, ClosedForm };

PropertyReport check_P1(const AcceptanceSpec& spec, std::size_t up_to_n);
PropertyReport check_P2(const AcceptanceSpec& spec, const std::vector<std::size_t>& sizes, CheckMode mode,
                        std::size_t exhaustive_limit = 4);
PropertyReport check_P3(const AcceptanceSpec& spec, const std::vector<std::size_t>& sizes, CheckMode mode,
                        std::size_t exhaustive_limit = 4);
PropertyReport check_P4(const AcceptanceSpec& spec, std::size_t graphs, std::size_t perms, std::uint64_t seed,
                        std::size_t max_n = 8, unsigned workers = 1);

// Registered extremal values of Q: minimum over weakly connected graphs of
// size n, and the smallest Q among graphs containing a super-spreader (star
// node on undirected graphs). A lower bound is flagged as such.
struct ClosedFormValue {
  Threshold value;
  bool lower_bound_only = false;
};
std::optional<ClosedFormValue> min_connected_q(QKind q, std::size_t n);
std::optional<ClosedFormValue> min_superspreader_q(QKind q, std::size_t n);

struct MonotonicityVerdict {
  bool counterexample = false;
  std::size_t trials = 0;
  std::size_t skipped = 0;  // graphs without any admissible candidate
  Graph graph;
  Intervention intervention;
  QValue before, after;
  std::string source;  // "adversarial" or "random"
};

MonotonicityVerdict falsify_monotonicity(const QSpec& q, const InterventionSet& iset, std::size_t trials,
                                         std::size_t min_n, std::size_t max_n, std::uint64_t seed,
                                         unsigned workers = 1);

// True iff Q(after) exceeds Q(before), exactly when both are exact.
bool q_increased(const QValue& before, const QValue& after, double tol = 1e-9);

struct RiskReducingVerdict {
  bool counterexample = false;
  std::size_t checked_graphs = 0;
  Graph graph;
  Strategy strategy;
  Graph result;
};

RiskReducingVerdict is_risk_reducing(const InterventionSet& iset, const AcceptanceSpec& spec,
                                     const std::vector<Graph>& samples, std::size_t depth,
                                     std::size_t max_states = 20000);

// random graph helpers shared with the fuzzers
Graph random_digraph(std::size_t n, double p, std::uint64_t seed);
Graph random_undirected(std::size_t n, double p, std::uint64_t seed);

}  // namespace netres

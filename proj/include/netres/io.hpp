#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "netres/acceptance.hpp"
#include "netres/costs.hpp"
#include "netres/graph.hpp"
#include "netres/interventions.hpp"
#include "netres/search.hpp"
#include "netres/stress.hpp"

namespace netres {

using Json = nlohmann::json;

// Parse failure with a 1-based position in the input.
class ParseError : public Error {
 public:
  ParseError(std::string code, const std::string& what, std::size_t line, std::size_t column)
      : Error(std::move(code), what + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

struct ParseWarning {
  std::string code;  // DuplicateEdge
  std::size_t line = 0, column = 0;
  std::string message;
};

struct ParsedGraph {
  Graph graph;
  bool undirected = false;
  std::vector<ParseWarning> warnings;
};

// edge-list text or JSON, detected by the first non-blank character
ParsedGraph parse_graph(const std::string& bytes);
ParsedGraph read_graph_file(const std::string& path);
std::string read_file(const std::string& path);

// Header, isolated nodes ascending, then edges in lexicographic order.
// Undirected output lists each pair once as u < v and requires symmetry.
std::string serialize_graph(const Graph& g, bool undirected = false);
Json graph_to_json(const Graph& g, bool undirected = false);
ParsedGraph graph_from_json(const Json& j);

// Intervention JSON carries "kind" plus its arguments; a plain string is
// read as the text form.
Json to_json(const Intervention& k);
Intervention intervention_from_json(const Json& j);
Json to_json(const Strategy& s);
Strategy strategy_from_json(const Json& j);

Json to_json(const InterventionSet& s);
InterventionSet iset_from_json(const Json& j);

Json to_json(const Threshold& t);
Threshold threshold_from_json(const Json& j);
Json to_json(const ThresholdSchedule& s);
ThresholdSchedule schedule_from_json(const Json& j);

Json to_json(const StressConfig& c);
StressConfig stress_config_from_json(const Json& j);
Engine engine_from_string(const std::string& s);

Json to_json(const QSpec& q);
QSpec qspec_from_json(const Json& j);
Json to_json(const AcceptanceSpec& a);
AcceptanceSpec acceptance_from_json(const Json& j);  // also accepts a preset name

Json to_json(const CostModel& m);
CostModel cost_model_from_json(const Json& j);
Json to_json(const SearchBudget& b);
SearchBudget budget_from_json(const Json& j, SearchBudget fallback = {});

struct PresetFile {
  DmfnrPreset preset;
  SearchBudget budget;
};
Json to_json(const PresetFile& p);
PresetFile preset_from_json(const Json& j);

Json to_json(const QValue& q);
Json to_json(const Verdict& v);
Json to_json(const StressEstimate& e);
Json to_json(const CostResult& r);
Json to_json(const RhoResult& r);
Json to_json(const SizeCheck& c);
Json to_json(const PropertyReport& r);
Json to_json(const MonotonicityVerdict& v);
Json to_json(const SuggestResult& r);
Json to_json(const AxiomReport& r);
Json to_json(const RhoPropertyReport& r);

// "inf" as null, other values as numbers
Json number_or_null(double x);

Rational parse_rational(const std::string& s);

// Named graph metrics; inapplicable ones carry an error code instead of a value.
std::vector<std::string> metric_names();
Json metrics_report(const Graph& g, const std::vector<std::string>& kinds = {});

}  // namespace netres

#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "netres/graph.hpp"
#include "netres/parallel.hpp"

namespace netres {

// splitmix64 finalizer, used as a counter-based generator
std::uint64_t mix64(std::uint64_t z);
std::uint64_t hash_key(std::uint64_t seed, std::initializer_list<std::uint64_t> parts);
double to_unit(std::uint64_t h);  // [0,1)

// Sequential stream over a counter; stream(i) replays identically.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream) : key_(hash_key(seed, {stream})) {}
  std::uint64_t next() { return mix64(key_ + 0x632be59bd9b4e019ULL * ++counter_); }
  double uniform() { return to_unit(next()); }
  double exponential(double rate);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

struct SirParams {
  double tau = 1.0;
  double gamma = 1.0;
};

namespace shock {
struct UniformSingleNode {};
struct FixedSet { std::set<NodeId> nodes; };
struct PerNodeBernoulli { double p = 0.1; };
}  // namespace shock
using InitialShock = std::variant<shock::UniformSingleNode, shock::FixedSet, shock::PerNodeBernoulli>;

struct StressConfig {
  SirParams params;
  double alpha = 0.5;
  double lambda = 0.1;
  InitialShock shock = shock::UniformSingleNode{};
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  void validate() const;
};

enum class Engine { EPN, Gillespie };

struct StressEstimate {
  double p_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t samples = 0;
  std::size_t hits = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> histogram;  // final size -> count, index 0..N
};

constexpr double kZ99 = 2.5758293035489004;

struct Interval {
  double low, high;
};
Interval wilson_interval(std::size_t hits, std::size_t n, double z = kZ99);

// EPN draws are keyed by (seed, sample, node label, neighbour label) so that
// deleting an edge leaves every other draw unchanged.
Graph sample_epn(const Graph& g, const SirParams& p, std::uint64_t seed, std::uint64_t sample);
std::set<NodeId> epn_final_set(const Graph& epn, const std::set<NodeId>& shocked);
std::set<NodeId> gillespie_final_set(const Graph& g, const SirParams& p, const std::set<NodeId>& shocked,
                                     CounterStream& rng);

std::set<NodeId> draw_shock(const Graph& g, const InitialShock& s, std::uint64_t seed, std::uint64_t sample);

StressEstimate estimate_systemic_probability(const Graph& g, const StressConfig& cfg, Engine engine = Engine::EPN,
                                             unsigned workers = 1);

struct CouplingVerdict {
  std::size_t samples = 0;
  std::size_t violations = 0;       // final set not contained in the original
  std::size_t size_increases = 0;
  std::size_t identical = 0;
  std::size_t first_violation = 0;
};

CouplingVerdict coupled_edge_deletion_check(const Graph& g, const Edge& e, const StressConfig& cfg,
                                            unsigned workers = 1);

}  // namespace netres

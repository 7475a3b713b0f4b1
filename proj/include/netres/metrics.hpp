#pragma once

#include <boost/rational.hpp>
#include <map>
#include <string>
#include <vector>

#include "netres/graph.hpp"

namespace netres {

using Rational = boost::rational<long long>;

std::string to_string(const Rational& r);
double to_double(const Rational& r);

enum class Side { In, Out, Total };

struct DegreeDistribution {
  Side side = Side::Out;
  std::map<Rational, std::size_t> counts;  // degree value -> node count
  std::size_t size = 0;
  Rational probability(const Rational& k) const;
};

DegreeDistribution degree_distribution(const Graph& g, Side side);

// (1/N) sum_v k_v^n, exact
Rational degree_moment(const Graph& g, Side side, int n);
Rational average_degree(const Graph& g);
Rational degree_variance(const Graph& g, Side side);

double graph_efficiency(const Graph& g);
// sum over ordered pairs v != w of 1/l_vw
double inverse_path_sum(const Graph& g);

struct CommunicabilityMatrix {
  std::vector<NodeId> label;
  std::vector<std::vector<double>> entries;
  double tolerance = 0.0;  // bound on absolute entrywise error
  double at(NodeId v, NodeId w) const;
  double sum() const;
};

CommunicabilityMatrix communicability(const Graph& g, double tol = 1e-12);
double avg_communicability(const Graph& g, double tol = 1e-12);

enum class CentralityKind { DegIn, DegOut, CloseIn, CloseOut, Betweenness, TotalDeg, CloseTotal };

std::string to_string(CentralityKind k);
CentralityKind centrality_kind_from_string(const std::string& s);

double centrality(const Graph& g, CentralityKind kind, NodeId v);
std::map<NodeId, double> centrality_all(const Graph& g, CentralityKind kind);
double max_centrality(const Graph& g, CentralityKind kind);

Rational epidemic_ratio(const Graph& g);
double spectral_radius(const Graph& g);
std::vector<double> adjacency_spectrum(const Graph& g);

}  // namespace netres

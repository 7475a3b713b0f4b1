#include "netres/metrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>

namespace netres {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

namespace {

void require_nonempty(const Graph& g) {
  if (g.empty()) throw Error("EmptyGraph", "quantity undefined on the empty graph");
}

void require_undirected(const Graph& g, const char* what) {
  if (!g.is_undirected()) throw Error("DirectedUnsupported", std::string(what) + " requires an undirected graph");
}

// degree values per node in sorted-label order; Total side is halved
std::vector<Rational> degree_values(const Graph& g, Side side) {
  Indexed ix(g);
  std::vector<Rational> k(ix.n());
  for (int i = 0; i < ix.n(); ++i) {
    long long in = static_cast<long long>(ix.in[i].size());
    long long out = static_cast<long long>(ix.out[i].size());
    switch (side) {
      case Side::In: k[i] = in; break;
      case Side::Out: k[i] = out; break;
      case Side::Total: k[i] = Rational(in + out, 2); break;
    }
  }
  return k;
}

}  // namespace

Rational DegreeDistribution::probability(const Rational& k) const {
  auto it = counts.find(k);
  if (it == counts.end() || size == 0) return 0;
  return Rational(static_cast<long long>(it->second), static_cast<long long>(size));
}

DegreeDistribution degree_distribution(const Graph& g, Side side) {
  DegreeDistribution d;
  d.side = side;
  d.size = g.size();
  for (const auto& k : degree_values(g, side)) ++d.counts[k];
  return d;
}

Rational degree_moment(const Graph& g, Side side, int n) {
  require_nonempty(g);
  if (n < 1) throw Error("Malformed", "moment order must be positive");
  Rational s = 0;
  for (const auto& k : degree_values(g, side)) {
    Rational p = 1;
    for (int i = 0; i < n; ++i) p *= k;
    s += p;
  }
  return s / static_cast<long long>(g.size());
}

Rational average_degree(const Graph& g) {
  require_nonempty(g);
  return Rational(static_cast<long long>(g.edge_count()), static_cast<long long>(g.size()));
}

Rational degree_variance(const Graph& g, Side side) {
  Rational m1 = degree_moment(g, side, 1);
  return degree_moment(g, side, 2) - m1 * m1;
}

double inverse_path_sum(const Graph& g) {
  Indexed ix(g);
  double s = 0.0;
  for (int i = 0; i < ix.n(); ++i) {
    auto d = bfs_lengths(ix, i);
    for (int j = 0; j < ix.n(); ++j)
      if (j != i && d[j] != PathMatrix::kInfinite) s += 1.0 / d[j];
  }
  return s;
}

double graph_efficiency(const Graph& g) {
  if (g.size() < 2) throw Error("TooSmall", "graph efficiency needs at least two nodes");
  double n = static_cast<double>(g.size());
  return inverse_path_sum(g) / (n * (n - 1));
}

double CommunicabilityMatrix::at(NodeId v, NodeId w) const {
  auto i = std::lower_bound(label.begin(), label.end(), v);
  auto j = std::lower_bound(label.begin(), label.end(), w);
  if (i == label.end() || *i != v || j == label.end() || *j != w)
    throw Error("NodeAbsent", "node not in communicability matrix");
  return entries[i - label.begin()][j - label.begin()];
}

double CommunicabilityMatrix::sum() const {
  double s = 0.0;
  for (const auto& row : entries)
    for (double x : row) s += x;
  return s;
}

// exp(A) by scaling and squaring with a Taylor series on A/2^s. The tail
// after k terms is bounded by b^(k+1)/(k+1)! / (1 - b/(k+2)) in the
// infinity norm, b = ||A/2^s||; the bound is then carried through squaring.
CommunicabilityMatrix communicability(const Graph& g, double tol) {
  Indexed ix(g);
  const int n = ix.n();
  CommunicabilityMatrix cm;
  cm.label = ix.label;
  if (n == 0) return cm;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j : ix.out[i]) a(i, j) = 1.0;
  double norm = 0.0;
  for (int i = 0; i < n; ++i) norm = std::max(norm, static_cast<double>(ix.out[i].size()));

  int s = 0;
  while (std::ldexp(norm, -s) > 0.5) ++s;
  Eigen::MatrixXd b = std::ldexp(1.0, -s) * a;
  double bn = std::ldexp(norm, -s);
  double target = std::max(tol / (std::ldexp(1.0, s) * std::exp(norm)), 1e-300);

  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  double err = 0.0;
  double tail_coef = 1.0;  // bn^k / k!
  for (int k = 1; k < 200; ++k) {
    term = (term * b) / static_cast<double>(k);
    x += term;
    tail_coef *= bn / k;
    if (term.isZero(0.0)) {
      err = 0.0;
      break;
    }
    double bound = tail_coef * bn / (k + 1) / (1.0 - bn / (k + 2));
    err = bound;
    if (bound <= target) break;
  }
  for (int i = 0; i < s; ++i) {
    double xn = x.cwiseAbs().rowwise().sum().maxCoeff();
    err = 2.0 * xn * err + err * err;
    x = x * x;
  }
  cm.tolerance = err;
  cm.entries.assign(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cm.entries[i][j] = x(i, j);
  return cm;
}

double avg_communicability(const Graph& g, double tol) {
  require_nonempty(g);
  double n = static_cast<double>(g.size());
  return communicability(g, tol).sum() / (n * n);
}

std::string to_string(CentralityKind k) {
  switch (k) {
    case CentralityKind::DegIn: return "deg_in";
    case CentralityKind::DegOut: return "deg_out";
    case CentralityKind::CloseIn: return "close_in";
    case CentralityKind::CloseOut: return "close_out";
    case CentralityKind::Betweenness: return "betweenness";
    case CentralityKind::TotalDeg: return "total_deg";
    case CentralityKind::CloseTotal: return "close_total";
  }
  return "?";
}

CentralityKind centrality_kind_from_string(const std::string& s) {
  for (auto k : {CentralityKind::DegIn, CentralityKind::DegOut, CentralityKind::CloseIn, CentralityKind::CloseOut,
                 CentralityKind::Betweenness, CentralityKind::TotalDeg, CentralityKind::CloseTotal})
    if (to_string(k) == s) return k;
  throw Error("Malformed", "unknown centrality kind '" + s + "'");
}

namespace {

// Brandes accumulation over ordered source/target pairs, endpoints excluded
std::vector<double> betweenness_all(const Indexed& ix) {
  const int n = ix.n();
  std::vector<double> cb(n, 0.0);
  for (int s = 0; s < n; ++s) {
    std::vector<int> order;
    std::vector<std::vector<int>> pred(n);
    std::vector<double> sigma(n, 0.0);
    std::vector<int> dist(n, -1);
    sigma[s] = 1.0;
    dist[s] = 0;
    std::deque<int> q{s};
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      order.push_back(v);
      for (int w : ix.out[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push_back(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          pred[w].push_back(v);
        }
      }
    }
    std::vector<double> delta(n, 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int w = *it;
      for (int v : pred[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) cb[w] += delta[w];
    }
  }
  return cb;
}

std::vector<double> closeness_all(const Indexed& ix, bool incoming) {
  const int n = ix.n();
  std::vector<double> c(n, 0.0);
  if (n < 2) return c;
  for (int v = 0; v < n; ++v) {
    auto d = bfs_lengths(ix, v, incoming);
    double s = 0.0;
    for (int w = 0; w < n; ++w)
      if (w != v && d[w] != PathMatrix::kInfinite) s += 1.0 / d[w];
    c[v] = s / (n - 1);
  }
  return c;
}

std::vector<double> centrality_vector(const Graph& g, CentralityKind kind, const Indexed& ix) {
  if (kind == CentralityKind::TotalDeg || kind == CentralityKind::CloseTotal)
    require_undirected(g, "total centrality");
  std::vector<double> c(ix.n());
  switch (kind) {
    case CentralityKind::DegIn:
      for (int i = 0; i < ix.n(); ++i) c[i] = static_cast<double>(ix.in[i].size());
      return c;
    case CentralityKind::DegOut:
      for (int i = 0; i < ix.n(); ++i) c[i] = static_cast<double>(ix.out[i].size());
      return c;
    case CentralityKind::TotalDeg:
      for (int i = 0; i < ix.n(); ++i) c[i] = (ix.in[i].size() + ix.out[i].size()) / 2.0;
      return c;
    case CentralityKind::CloseIn: return closeness_all(ix, true);
    case CentralityKind::CloseOut:
    case CentralityKind::CloseTotal: return closeness_all(ix, false);
    case CentralityKind::Betweenness: return betweenness_all(ix);
  }
  return c;
}

}  // namespace

double centrality(const Graph& g, CentralityKind kind, NodeId v) {
  if (!g.has_node(v)) throw Error("NodeAbsent", "node " + std::to_string(v) + " not in graph");
  Indexed ix(g);
  return centrality_vector(g, kind, ix)[ix.pos.at(v)];
}

std::map<NodeId, double> centrality_all(const Graph& g, CentralityKind kind) {
  Indexed ix(g);
  auto c = centrality_vector(g, kind, ix);
  std::map<NodeId, double> r;
  for (int i = 0; i < ix.n(); ++i) r[ix.label[i]] = c[i];
  return r;
}

double max_centrality(const Graph& g, CentralityKind kind) {
  require_nonempty(g);
  Indexed ix(g);
  auto c = centrality_vector(g, kind, ix);
  return *std::max_element(c.begin(), c.end());
}

Rational epidemic_ratio(const Graph& g) {
  require_nonempty(g);
  require_undirected(g, "epidemic ratio");
  Rational m1 = degree_moment(g, Side::Total, 1);
  if (m1 == Rational(0)) return 0;
  return degree_moment(g, Side::Total, 2) / m1;
}

std::vector<double> adjacency_spectrum(const Graph& g) {
  require_undirected(g, "adjacency spectrum");
  Indexed ix(g);
  const int n = ix.n();
  if (n == 0) return {};
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j : ix.out[i]) a(i, j) = 1.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

double spectral_radius(const Graph& g) {
  require_nonempty(g);
  auto ev = adjacency_spectrum(g);
  return std::max(0.0, ev.front());
}

}  // namespace netres

// Canonical labeling by individualization and refinement. Twins (vertices
// whose transposition is an automorphism) are branched on only once.
#include <algorithm>
#include <cstdint>
#include <tuple>

#include "netres/graph.hpp"

namespace netres {
namespace {

struct Adj {
  int n = 0;
  std::vector<std::uint32_t> out, in;
};

using Coloring = std::vector<int>;

int count_colors(const Coloring& c) {
  return c.empty() ? 0 : *std::max_element(c.begin(), c.end()) + 1;
}

Coloring refine(const Adj& a, Coloring c) {
  int k = count_colors(c);
  while (true) {
    using Sig = std::tuple<int, std::vector<int>, std::vector<int>>;
    std::vector<Sig> sig(a.n);
    for (int v = 0; v < a.n; ++v) {
      std::vector<int> o, i;
      for (int w = 0; w < a.n; ++w) {
        if (a.out[v] >> w & 1u) o.push_back(c[w]);
        if (a.in[v] >> w & 1u) i.push_back(c[w]);
      }
      std::sort(o.begin(), o.end());
      std::sort(i.begin(), i.end());
      sig[v] = {c[v], std::move(o), std::move(i)};
    }
    std::vector<Sig> uniq = sig;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (int v = 0; v < a.n; ++v)
      c[v] = static_cast<int>(std::lower_bound(uniq.begin(), uniq.end(), sig[v]) - uniq.begin());
    int k2 = static_cast<int>(uniq.size());
    if (k2 == k) return c;
    k = k2;
  }
}

bool twins(const Adj& a, int u, int w) {
  std::uint32_t mu = ~(1u << w), mw = ~(1u << u);
  return (a.out[u] & mu) == (a.out[w] & mw) && (a.in[u] & mu) == (a.in[w] & mw);
}

std::string leaf_code(const Adj& a, const Coloring& c) {
  std::vector<int> at(a.n);
  for (int v = 0; v < a.n; ++v) at[c[v]] = v;
  std::string s;
  s.reserve(a.n * a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) s.push_back((a.out[at[i]] >> at[j] & 1u) ? '1' : '0');
  return s;
}

void search(const Adj& a, const Coloring& c, std::string& best, bool& have) {
  int k = count_colors(c);
  if (k == a.n) {
    std::string code = leaf_code(a, c);
    if (!have || code < best) {
      best = std::move(code);
      have = true;
    }
    return;
  }
  std::vector<int> size(k, 0);
  for (int x : c) ++size[x];
  int cell = static_cast<int>(std::find_if(size.begin(), size.end(), [](int s) { return s > 1; }) - size.begin());
  std::vector<int> tried;
  for (int v = 0; v < a.n; ++v) {
    if (c[v] != cell) continue;
    if (std::any_of(tried.begin(), tried.end(), [&](int u) { return twins(a, u, v); })) continue;
    tried.push_back(v);
    Coloring d(a.n);
    for (int x = 0; x < a.n; ++x) d[x] = 2 * c[x] + (x == v ? 0 : 1);
    std::vector<int> keys(d);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (int x = 0; x < a.n; ++x)
      d[x] = static_cast<int>(std::lower_bound(keys.begin(), keys.end(), d[x]) - keys.begin());
    search(a, refine(a, d), best, have);
  }
}

}  // namespace

std::string canonical_form(const Graph& g, std::size_t cap) {
  if (g.size() > cap || g.size() > 31)
    throw Error("TooLarge", "canonical form limited to " + std::to_string(cap) + " nodes");
  Indexed ix(g);
  Adj a;
  a.n = ix.n();
  a.out.assign(a.n, 0);
  a.in.assign(a.n, 0);
  for (int v = 0; v < a.n; ++v) {
    for (int w : ix.out[v]) a.out[v] |= 1u << w;
    for (int w : ix.in[v]) a.in[v] |= 1u << w;
  }
  std::string best;
  bool have = false;
  if (a.n > 0) search(a, refine(a, Coloring(a.n, 0)), best, have);
  return std::to_string(a.n) + ":" + best;
}

bool isomorphic(const Graph& a, const Graph& b, std::size_t cap) {
  if (a.size() != b.size() || a.edge_count() != b.edge_count()) return false;
  return canonical_form(a, cap) == canonical_form(b, cap);
}

}  // namespace netres

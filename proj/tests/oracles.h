#pragma once

// Independent brute-force references used by the test suites. None of these
// call into the library's algorithms beyond plain data types.

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "hubway/graph.h"

namespace oracle {

using hubway::Vertex;
using hubway::VertexSet;
using hubway::WeightedGraph;

constexpr double kInf = std::numeric_limits<double>::infinity();

inline std::vector<std::vector<double>> floyd_warshall(const WeightedGraph& g) {
  const auto n = static_cast<std::size_t>(g.n);
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kInf));
  for (std::size_t v = 0; v < n; ++v) d[v][v] = 0.0;
  for (const auto& e : g.edges) {
    d[e.u][e.v] = std::min(d[e.u][e.v], e.length);
    d[e.v][e.u] = std::min(d[e.v][e.u], e.length);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

inline bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }

/// Every shortest u-v path as a vertex sequence (simple paths only).
inline std::vector<std::vector<Vertex>> all_shortest_paths(const WeightedGraph& g, Vertex u, Vertex v) {
  const auto d = floyd_warshall(g);
  std::vector<std::vector<std::pair<Vertex, double>>> adj(static_cast<std::size_t>(g.n));
  for (const auto& e : g.edges) {
    adj[e.u].push_back({e.v, e.length});
    adj[e.v].push_back({e.u, e.length});
  }
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> cur{u};
  std::function<void(Vertex, double)> go = [&](Vertex x, double len) {
    if (x == v) {
      if (close(len, d[u][v])) out.push_back(cur);
      return;
    }
    for (auto [y, w] : adj[x]) {
      if (std::find(cur.begin(), cur.end(), y) != cur.end()) continue;
      if (!close(len + w + d[y][v], d[u][v])) continue;
      cur.push_back(y);
      go(y, len + w);
      cur.pop_back();
    }
  };
  go(u, 0.0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline double tour_length(const std::vector<std::vector<double>>& d, const std::vector<Vertex>& order) {
  double s = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) s += d[order[i]][order[(i + 1) % order.size()]];
  return s;
}

/// Minimum TSP over all permutations fixing vertex 0.
inline double brute_tsp(const WeightedGraph& g) {
  const auto d = floyd_warshall(g);
  if (g.n <= 1) return 0.0;
  std::vector<Vertex> perm(static_cast<std::size_t>(g.n));
  std::iota(perm.begin(), perm.end(), 0);
  double best = kInf;
  do {
    best = std::min(best, tour_length(d, perm));
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return best;
}

inline double mst(const std::vector<std::vector<double>>& d, const std::vector<Vertex>& pts) {
  if (pts.size() <= 1) return 0.0;
  std::vector<double> best(pts.size(), kInf);
  std::vector<char> in(pts.size(), 0);
  best[0] = 0.0;
  double total = 0.0;
  for (std::size_t it = 0; it < pts.size(); ++it) {
    std::size_t u = pts.size();
    for (std::size_t v = 0; v < pts.size(); ++v)
      if (!in[v] && (u == pts.size() || best[v] < best[u])) u = v;
    in[u] = 1;
    total += best[u];
    for (std::size_t v = 0; v < pts.size(); ++v)
      if (!in[v]) best[v] = std::min(best[v], d[pts[u]][pts[v]]);
  }
  return total;
}

/// Steiner tree optimum: minimum over Steiner-point subsets of the metric MST.
inline double brute_steiner(const WeightedGraph& g, const VertexSet& terminals) {
  const auto d = floyd_warshall(g);
  if (terminals.size() <= 1) return 0.0;
  std::vector<Vertex> others;
  for (Vertex v = 0; v < g.n; ++v)
    if (!std::binary_search(terminals.begin(), terminals.end(), v)) others.push_back(v);
  double best = kInf;
  for (std::size_t mask = 0; mask < (std::size_t{1} << others.size()); ++mask) {
    std::vector<Vertex> pts(terminals.begin(), terminals.end());
    for (std::size_t i = 0; i < others.size(); ++i)
      if (mask & (std::size_t{1} << i)) pts.push_back(others[i]);
    best = std::min(best, mst(d, pts));
  }
  return best;
}

inline double brute_facility(const WeightedGraph& g, const std::vector<double>& open,
                             const std::vector<double>& phi) {
  const auto d = floyd_warshall(g);
  const auto n = static_cast<std::size_t>(g.n);
  double best = kInf;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    double c = 0.0;
    for (std::size_t f = 0; f < n; ++f)
      if (mask & (std::size_t{1} << f)) c += open[f];
    for (std::size_t v = 0; v < n; ++v) {
      double near = kInf;
      for (std::size_t f = 0; f < n; ++f)
        if (mask & (std::size_t{1} << f)) near = std::min(near, d[v][f]);
      c += (phi.empty() ? 1.0 : phi[v]) * near;
    }
    best = std::min(best, c);
  }
  return best;
}

}  // namespace oracle

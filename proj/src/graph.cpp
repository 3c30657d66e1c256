#include "hubway/graph.h"

#include <limits>
#include <queue>

namespace hubway {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void validate_graph(const WeightedGraph& g) {
  if (g.n < 0) throw Error("bad vertex count");
  for (const auto& e : g.edges) {
    if (e.u < 0 || e.v < 0 || e.u >= g.n || e.v >= g.n) throw Error("bad edge: vertex id out of range");
    if (e.u == e.v) throw Error("bad edge: self-loop");
    if (!(e.length > 0.0) || !std::isfinite(e.length)) throw Error("bad edge: length must be positive and finite");
  }
  if (g.n <= 1) return;
  std::vector<std::vector<Vertex>> adj(static_cast<std::size_t>(g.n));
  for (const auto& e : g.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<char> seen(static_cast<std::size_t>(g.n), 0);
  std::vector<Vertex> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    for (Vertex w : adj[u])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  if (count != g.n) throw Error("disconnected");
}

std::vector<double> dijkstra(const std::vector<std::vector<std::pair<Vertex, double>>>& adj,
                             Vertex source) {
  std::vector<double> d(adj.size(), kInf);
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  d[source] = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > d[u]) continue;
    for (auto [w, len] : adj[u]) {
      double nd = du + len;
      if (nd < d[w]) {
        d[w] = nd;
        pq.push({nd, w});
      }
    }
  }
  return d;
}

MetricInstance::MetricInstance(WeightedGraph g) : graph_(std::move(g)) {
  validate_graph(graph_);
  compute();
}

void MetricInstance::compute() {
  n_ = static_cast<std::size_t>(graph_.n);
  adj_.assign(n_, {});
  for (const auto& e : graph_.edges) {
    adj_[e.u].push_back({e.v, e.length});
    adj_[e.v].push_back({e.u, e.length});
  }
  for (auto& row : adj_) {
    std::sort(row.begin(), row.end());
    // keep the shortest of parallel edges
    std::vector<std::pair<Vertex, double>> dedup;
    for (const auto& p : row)
      if (dedup.empty() || dedup.back().first != p.first) dedup.push_back(p);
    row = std::move(dedup);
  }

  dist_.assign(n_ * n_, kInf);
  for (std::size_t s = 0; s < n_; ++s) {
    auto d = dijkstra(adj_, static_cast<Vertex>(s));
    std::copy(d.begin(), d.end(), dist_.begin() + static_cast<std::ptrdiff_t>(s * n_));
  }
  for (std::size_t u = 0; u < n_; ++u)
    for (std::size_t v = u + 1; v < n_; ++v) {
      double d = std::min(dist_[u * n_ + v], dist_[v * n_ + u]);
      dist_[u * n_ + v] = dist_[v * n_ + u] = d;
    }

  next_.assign(n_ * n_, -1);
  for (std::size_t u = 0; u < n_; ++u)
    for (std::size_t v = 0; v < n_; ++v) {
      if (u == v) continue;
      double duv = dist_[u * n_ + v];
      for (auto [x, len] : adj_[u]) {
        if (approx_equal(len + dist_[static_cast<std::size_t>(x) * n_ + v], duv)) {
          next_[u * n_ + v] = x;
          break;  // adjacency is sorted, so x is the smallest admissible hop
        }
      }
      assert(next_[u * n_ + v] >= 0);
    }

  diam_ = 0.0;
  min_dist_ = kInf;
  for (std::size_t u = 0; u < n_; ++u)
    for (std::size_t v = u + 1; v < n_; ++v) {
      diam_ = std::max(diam_, dist_[u * n_ + v]);
      min_dist_ = std::min(min_dist_, dist_[u * n_ + v]);
    }
  if (n_ <= 1) {
    min_dist_ = 0.0;
    aspect_ = 1.0;
  } else {
    aspect_ = diam_ / min_dist_;
  }
}

MetricInstance MetricInstance::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error("scale factor must be positive");
  MetricInstance out = *this;
  for (auto& e : out.graph_.edges) e.length *= factor;
  for (auto& row : out.adj_)
    for (auto& p : row) p.second *= factor;
  for (auto& d : out.dist_) d *= factor;
  out.diam_ *= factor;
  out.min_dist_ *= factor;
  return out;
}

MetricInstance build_metric(const WeightedGraph& g) { return MetricInstance(g); }

VertexSet ball(const MetricInstance& m, Vertex v, double r) {
  VertexSet out;
  for (Vertex u = 0; u < m.n(); ++u)
    if (leq(m.dist(v, u), r)) out.push_back(u);
  return out;
}

MetricInstance rescale_min_distance(const MetricInstance& m, double c, double* factor_out) {
  if (c < 4.0) throw Error("rescale requires c >= 4");
  double factor = 1.0;
  if (m.n() > 1) factor = (c / 2.0) * (1.0 + kRescaleEta) / m.min_distance();
  if (factor_out) *factor_out = factor;
  if (factor == 1.0) return m;
  return m.scaled(factor);
}

std::vector<Vertex> canonical_shortest_path(const MetricInstance& m, Vertex u, Vertex v) {
  std::vector<Vertex> path{u};
  while (u != v) {
    u = m.next_hop(u, v);
    path.push_back(u);
  }
  return path;
}

double dist_to_set(const MetricInstance& m, Vertex v, const VertexSet& s) {
  double best = kInf;
  for (Vertex x : s) best = std::min(best, m.dist(v, x));
  return best;
}

double set_distance(const MetricInstance& m, const VertexSet& a, const VertexSet& b) {
  double best = kInf;
  for (Vertex x : a) best = std::min(best, dist_to_set(m, x, b));
  return best;
}

double set_diameter(const MetricInstance& m, const VertexSet& s) {
  double best = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) best = std::max(best, m.dist(s[i], s[j]));
  return best;
}

}  // namespace hubway

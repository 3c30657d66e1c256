#pragma once

#include <cstddef>
#include <vector>

#include "hubway/common.h"

namespace hubway {

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double length = 0.0;
};

struct WeightedGraph {
  int n = 0;
  std::vector<Edge> edges;
};

/// Throws Error("bad edge") or Error("disconnected").
void validate_graph(const WeightedGraph& g);

/// Shortest-path metric of a connected graph with one canonical path per
/// ordered pair: the lexicographically smallest vertex sequence among all
/// shortest paths. Immutable after construction.
class MetricInstance {
 public:
  MetricInstance() = default;
  explicit MetricInstance(WeightedGraph g);

  int n() const { return graph_.n; }
  const WeightedGraph& graph() const { return graph_; }
  double dist(Vertex u, Vertex v) const {
    return dist_[static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v)];
  }
  double diam() const { return diam_; }
  double min_distance() const { return min_dist_; }
  double aspect_ratio() const { return aspect_; }

  /// First hop of the canonical u-v path; -1 when u == v.
  Vertex next_hop(Vertex u, Vertex v) const {
    return next_[static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v)];
  }
  const std::vector<std::vector<std::pair<Vertex, double>>>& adjacency() const {
    return adj_;
  }

  /// Multiplies every length by factor; canonical paths are unchanged.
  MetricInstance scaled(double factor) const;

 private:
  void compute();

  WeightedGraph graph_;
  std::size_t n_ = 0;
  std::vector<std::vector<std::pair<Vertex, double>>> adj_;
  std::vector<double> dist_;
  std::vector<Vertex> next_;
  double diam_ = 0.0;
  double min_dist_ = 0.0;
  double aspect_ = 1.0;
};

MetricInstance build_metric(const WeightedGraph& g);

/// Closed ball {u : dist(u, v) <= r}, sorted.
VertexSet ball(const MetricInstance& m, Vertex v, double r);

inline constexpr double kRescaleEta = 1e-6;

/// Scales so that the minimum pairwise distance is (c/2)(1+eta).
MetricInstance rescale_min_distance(const MetricInstance& m, double c,
                                    double* factor_out = nullptr);

std::vector<Vertex> canonical_shortest_path(const MetricInstance& m, Vertex u, Vertex v);

/// Single-source distances over an explicit adjacency list.
std::vector<double> dijkstra(const std::vector<std::vector<std::pair<Vertex, double>>>& adj,
                             Vertex source);

/// dist between a vertex and a set (infinity for an empty set).
double dist_to_set(const MetricInstance& m, Vertex v, const VertexSet& s);
double set_distance(const MetricInstance& m, const VertexSet& a, const VertexSet& b);
double set_diameter(const MetricInstance& m, const VertexSet& s);

}  // namespace hubway

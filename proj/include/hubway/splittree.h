#pragma once

#include <cstdint>
#include <vector>

#include "hubway/corehubs.h"
#include "hubway/decomposition.h"

namespace hubway {

struct Cluster {
  int level = 0;
  int parent = -1;
  std::vector<int> children;
  VertexSet points;
};

/// Hierarchical random partition; levels are in units of the minimum
/// pairwise distance of the point set.
struct SplitTree {
  VertexSet points;
  double unit = 1.0;
  int top_level = 0;
  std::vector<Cluster> clusters;
  int root = 0;
  std::vector<std::vector<int>> by_level;  // by_level[l] = cluster ids on level l
  std::uint64_t seed = 0;

  /// Cluster on `level` containing p, or -1.
  int cluster_of(Vertex p, int level) const;
  double level_radius(int level) const { return std::ldexp(unit, level); }
};

SplitTree build_split_tree(const VertexSet& points, const MetricInstance& m, std::uint64_t seed);

ValidationReport validate_split_tree(const SplitTree& st, const MetricInstance& m);

struct NetHierarchy {
  double beta = 1.0;
  std::vector<VertexSet> nets;  // per cluster
};

/// Net of each cluster at level l has spacing and covering radius beta 2^l
/// (in tree units) and contains the parent's net points that lie in it.
NetHierarchy build_hierarchical_nets(const SplitTree& st, double beta, const MetricInstance& m);

ValidationReport validate_nets(const SplitTree& st, const NetHierarchy& nets, const MetricInstance& m);

struct PortalEmbedding {
  VertexSet points;
  SplitTree tree;
  NetHierarchy nets;
  TreeDecomposition decomposition;  // bag per cluster (its net plus its children's nets), id == cluster id
  EmbeddedGraph graph;
  double beta = 1.0;
  double doubling = 0.0;

  int width() const { return decomposition.width(); }
};

/// beta = eps' / (4 d max(1, log2 alpha)), d the greedy doubling estimate floored at 1.
double talwar_beta(double eps_prime, double doubling, double aspect_ratio);

PortalEmbedding talwar_embed(const VertexSet& points, const MetricInstance& m, double eps_prime,
                             std::uint64_t seed);

/// Replaces every representative by all hubs it stands for, in clusters,
/// nets and bags, and rebuilds the per-bag complete graphs.
PortalEmbedding expand_representatives(const PortalEmbedding& pe, const Representatives& reps,
                                       const MetricInstance& m);

/// Rebuilds the complete graph of every bag at exact metric lengths.
EmbeddedGraph bag_cliques(const TreeDecomposition& d, const MetricInstance& m);

}  // namespace hubway

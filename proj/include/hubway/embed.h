#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "hubway/splittree.h"

namespace hubway {

struct ConnectorEdge {
  Vertex town_vertex = 0;
  Vertex bag_vertex = 0;
  double length = 0.0;
};

struct Embedding {
  EmbeddedGraph graph;
  TreeDecomposition decomposition;
  std::vector<ConnectorEdge> connectors;
  std::uint64_t seed = 0;

  int width() const { return decomposition.width(); }
};

struct ConnectingBagChoice {
  int child = -1;
  int sibling = -1;
  double sibling_dist = 0.0;
  int level = 0;  // i with dist(T', T'') in (r_i, r_{i+1}]
  Vertex hub = -1;
  int i_bar = 0;
  int j_bar = 0;
  int l_bar = 0;
  int bag = -1;
};

/// Per-town statistics gathered while embedding.
struct TownTrace {
  int town = -1;
  std::size_t hubs = 0;                      // |X_T|
  std::size_t representatives = 0;           // |Y_T|
  double doubling = 0.0;                     // greedy estimate for X_T
  int hub_width = 0;                         // width of D_X
  std::vector<std::size_t> hubs_per_child;   // |X_T ∩ T'|
  std::map<int, int> hub_children_per_bag;   // bag -> children with X_T ∩ T' nonempty
  std::vector<ConnectingBagChoice> choices;
};

struct EmbedTrace {
  std::vector<TownTrace> towns;
};

struct EmbedContext {
  const MetricInstance* metric = nullptr;  // rescaled
  const CoverLadder* ladder = nullptr;
  const TownsDecomposition* towns = nullptr;        // drives the recursion
  const TownsDecomposition* core_towns = nullptr;   // cores come from here via Town::origin
  HdConfig cfg;
  std::optional<HubShift> shift;
  std::uint64_t seed = 0;
  EmbedTrace* trace = nullptr;
  // When the (shifted) hub set of a town with children is empty, use the
  // town's own vertices instead of failing; counted in *hub_fallbacks.
  bool town_hub_fallback = false;
  int* hub_fallbacks = nullptr;
};

/// Level i >= 0 with d in (r_i, r_{i+1}], clamped to 0 for d <= r_0.
int level_of_distance(double c, double d);

ConnectingBagChoice connecting_bag(const MetricInstance& m, const TownsDecomposition& td, int town,
                                   int child, const VertexSet& x, const PortalEmbedding& px,
                                   const HdConfig& cfg, double doubling);

struct ChildAttachment {
  int child = -1;
  Embedding embedding;
  int bag = -1;
  VertexSet hubs;  // X_T ∩ T'
};

/// Hangs each child's decomposition under its connecting bag of d_x and
/// applies the two repair steps. Bags 0..|d_x|-1 of the result are d_x's.
TreeDecomposition merge_tree_decompositions(const TreeDecomposition& d_x,
                                            const std::vector<ChildAttachment>& children);

Embedding embed_town(const EmbedContext& ctx, int town);

struct GraphEmbedding {
  Embedding embedding;  // lengths in the input metric's units
  double scale_factor = 1.0;
  CoverLadder ladder;
  TownsDecomposition towns;
  EmbedTrace trace;
};

GraphEmbedding embed_graph(const MetricInstance& m, const HdConfig& cfg, std::uint64_t seed);

/// Tree-decomposition properties, exact connector lengths and non-contraction.
ValidationReport validate_embedding(const Embedding& e, const MetricInstance& m);

struct StretchStats {
  VertexSet vertices;
  std::vector<double> pair_mean;       // per unordered pair, row-major upper triangle order
  std::vector<double> per_seed_mean;   // global mean stretch for each seed
  double mean = 1.0;                   // mean over pairs of the per-pair mean
  double max = 1.0;
  std::vector<int> widths;
};

/// Stretch of H over G for one embedding: per unordered pair, in order.
std::vector<double> pair_stretches(const Embedding& e, const MetricInstance& m);

StretchStats measure_stretch(const MetricInstance& m, const HdConfig& cfg,
                             const std::vector<std::uint64_t>& seeds);

}  // namespace hubway

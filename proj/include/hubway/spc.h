#pragma once

#include <cstdint>
#include <vector>

#include "hubway/graph.h"

namespace hubway {

struct HdConfig {
  double c = 5.0;
  double epsilon = 0.5;
  std::uint64_t seed = 1;

  double lambda() const { return c - 4.0; }
  double epsilon_prime() const { return epsilon * epsilon; }
  void validate() const;
};

struct CoverLevel {
  int index = 0;
  double scale = 1.0;
  VertexSet hubs;
  int sparsity = 0;
};

struct CoverLadder {
  HdConfig config;
  int top_level = 0;
  std::vector<CoverLevel> levels;  // indices 0..top_level
  int sparsity = 0;

  double scale(int i) const;
  const VertexSet& hubs(int i) const { return levels.at(static_cast<std::size_t>(i)).hubs; }
};

/// Scale r_i = (c/4)^i.
double level_scale(double c, int i);

/// Smallest i with r_i >= diam (0 for a single vertex).
int top_level_for(double c, double diam);

/// Canonical paths (one per unordered pair, oriented from the smaller id)
/// whose length lies in (lo, hi].
std::vector<std::vector<Vertex>> paths_in_window(const MetricInstance& m, double lo, double hi);

/// Inclusion-wise minimal hub set hitting every canonical path with length
/// in (r, c*r/2]: greedy maximum coverage, then reverse-insertion pruning.
VertexSet compute_spc_level(const MetricInstance& m, double r, const HdConfig& cfg);

CoverLadder build_cover_ladder(const MetricInstance& m, const HdConfig& cfg);

/// max over v of |ball(v, c*r/2) ∩ hubs|.
int local_sparsity(const MetricInstance& m, const VertexSet& hubs, double r, const HdConfig& cfg);

/// Number of hubs within c*r/2 of ball(v, c*r/2).
int vicinity_hub_count(const MetricInstance& m, const VertexSet& hubs, Vertex v, double r,
                       const HdConfig& cfg);

enum class HdVariant { def1, def18, def19 };

const char* to_string(HdVariant v);
HdVariant parse_hd_variant(const std::string& s);

struct HdResult {
  int k = 0;
  double worst_scale = 0.0;
  Vertex worst_center = -1;
  std::size_t scales_checked = 0;
};

inline constexpr int kExactHdMaxN = 32;

/// Exact highway dimension on the critical scale grid; n <= kExactHdMaxN.
HdResult highway_dimension(const MetricInstance& m, const HdConfig& cfg, HdVariant variant);

/// Minimum hitting set size of a family of vertex masks (exhaustive).
int min_hitting_set_size(std::vector<std::uint64_t> family);

}  // namespace hubway

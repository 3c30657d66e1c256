#pragma once

#include <map>
#include <vector>

#include "hubway/towns.h"

namespace hubway {

struct CoreChain {
  int town = 0;
  int level = 0;               // recursion level j of the town
  std::vector<VertexSet> cores;  // cores[i] for i = 0..j; cores[j] is the town
};

CoreChain compute_cores(const TownsDecomposition& td, int town);

/// Core hubs of level i: cores[i] ∩ SPC(r_i), for 1 <= i <= j-1.
VertexSet core_hubs_at(const CoreChain& chain, const CoverLadder& ladder, int i);

struct HubShiftRecord {
  Vertex from = 0;
  Vertex to = 0;
  double dist = 0.0;
  int level = 0;
};

/// Replaces hubs by points of a subset (the QPTAS net). Hubs on levels
/// below floor_level are dropped; the rest move to the closest allowed
/// point of the town.
struct HubShift {
  int floor_level = 0;
  VertexSet allowed;
};

struct ApproxCoreHubs {
  int town = 0;
  int level = 0;
  std::vector<VertexSet> per_level;  // per_level[i] = X_T^i, index 0 unused
  VertexSet all;
  std::vector<HubShiftRecord> shifts;      // core hub -> approximate core hub
  std::vector<HubShiftRecord> net_shifts;  // core hub -> allowed point (shifted runs only)

  bool empty() const { return all.empty(); }
};

ApproxCoreHubs compute_approx_core_hubs(const MetricInstance& m, const CoverLadder& ladder,
                                        const CoreChain& chain, const HdConfig& cfg,
                                        const HubShift* shift = nullptr);

struct Representatives {
  VertexSet reps;
  std::map<Vertex, VertexSet> represents;
  std::map<Vertex, int> child_of;  // representative -> child town id
};

/// One hub (the smallest id) per child town that contains hubs of x.
Representatives select_representatives(const TownsDecomposition& td, int town,
                                       const VertexSet& x);

struct DoublingEstimate {
  double d = 0.0;
  Vertex center = -1;
  double radius = 0.0;
  std::vector<Vertex> cover;  // centres in selection order
};

DoublingEstimate estimate_doubling_dimension(const VertexSet& points, const MetricInstance& m);

/// Greedy cover of `target` by balls of radius r centred in `points`,
/// farthest uncovered point first; `first` (if in target) is the first centre.
std::vector<Vertex> greedy_ball_cover(const MetricInstance& m, const VertexSet& target, double r, Vertex first);

}  // namespace hubway

#pragma once

#include <vector>

#include "hubway/spc.h"

namespace hubway {

struct LevelTowns {
  VertexSet sprawl;
  std::vector<VertexSet> towns;  // in seed order
};

/// Towns are balls of radius r_i around seeds farther than 2 r_i from SPC(r_i).
LevelTowns sprawl_and_towns_at_level(const MetricInstance& m, const CoverLadder& ladder, int i);

struct Town {
  int id = 0;
  VertexSet vertices;
  std::vector<int> levels;  // descending; front is the level it was peeled at
  int parent = -1;
  std::vector<int> children;
  int origin = -1;  // id in the decomposition this one was derived from

  int top_level() const { return levels.front(); }
  int recursion_level() const { return levels.back(); }
  bool is_leaf() const { return children.empty(); }
};

struct TownsDecomposition {
  std::vector<Town> towns;
  int root = 0;
  int top_level = 0;
  std::vector<LevelTowns> per_level;  // indices 0..top_level

  const Town& town(int id) const { return towns.at(static_cast<std::size_t>(id)); }
  const VertexSet& sprawl(int i) const { return per_level.at(static_cast<std::size_t>(i)).sprawl; }
};

TownsDecomposition build_towns_decomposition(const MetricInstance& m, const CoverLadder& ladder);

ValidationReport validate_towns(const TownsDecomposition& td, const MetricInstance& m,
                                const CoverLadder& ladder);

/// Restricts every town to the given vertex subset: empty towns are removed
/// and towns left with a single child are replaced by that child.
TownsDecomposition restrict_decomposition(const TownsDecomposition& td, const VertexSet& keep);

}  // namespace hubway

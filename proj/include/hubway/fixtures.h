#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "hubway/graph.h"

namespace hubway {

WeightedGraph make_path(int n, double length = 1.0);
WeightedGraph make_star(int n);
WeightedGraph make_grid(int rows, int cols);
/// Centre u = 0; leg i (1-based) is u - v_i (length c-1), v_i - w_i (length 1)
/// with v_i = 2i-1, w_i = 2i.
WeightedGraph make_spider(int legs, double c);
/// Centre v = 0; leg i (0-based) has u, w, x, y = 4i+1..4i+4 with edges
/// v-u (4), u-w (2 eps), w-x (1), w-y (1 + eps).
WeightedGraph make_def19_star(int legs, double eps);
/// Complete graph on 1..n (ids 0..n-1); edge {i, j} has length c^min(i, j).
WeightedGraph make_complete_exp(int n, double c);
/// Three star clusters of `size` vertices (spoke length 0.5); centres of
/// clusters A-B at distance `near`, B-C at distance `far`.
WeightedGraph make_three_cluster(int size, double near = 50.0, double far = 2500.0);
/// Hubs placed uniformly in a square of side spacing*hubs, joined by a
/// Euclidean spanning tree plus a few extra long links; each hub carries a
/// small tree of spokes with short lengths.
WeightedGraph make_hub_and_spoke(int hubs, int spokes, double spacing, std::uint64_t seed);
/// Random spanning tree plus extra edges, lengths uniform in [lo, hi].
WeightedGraph make_random_connected(int n, int extra_edges, double lo, double hi, std::uint64_t seed);

struct FixtureSpec {
  std::string family;
  std::map<std::string, double> params;
  std::uint64_t seed = 1;

  double param(const std::string& key, double fallback) const;
  double required(const std::string& key) const;
  std::string label() const;
};

/// Families: path, star, grid, spider, def19_star, complete_exp,
/// three_cluster, hub_and_spoke, random.
WeightedGraph generate_fixture(const FixtureSpec& spec);

FixtureSpec parse_fixture_spec(const std::string& text);

}  // namespace hubway

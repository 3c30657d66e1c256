#pragma once

#include <map>
#include <utility>
#include <vector>

#include "hubway/graph.h"

namespace hubway {

/// Graph over a vertex subset of a metric, edges keyed (min, max).
struct EmbeddedGraph {
  VertexSet vertices;
  std::map<std::pair<Vertex, Vertex>, double> edges;

  void add_vertex(Vertex v);
  void add_edge(Vertex u, Vertex v, double length);
  bool has_edge(Vertex u, Vertex v) const;
  /// Adjacency over local indices (positions in `vertices`).
  std::vector<std::vector<std::pair<Vertex, double>>> local_adjacency() const;
  std::size_t index_of(Vertex v) const;
  /// All-pairs shortest paths in local indices, row-major.
  std::vector<double> all_pairs() const;
};

struct Bag {
  VertexSet vertices;
  int parent = -1;
  std::vector<int> children;
  int level = 0;
  int town = -1;     // town whose hub decomposition created the bag
  int cluster = -1;  // split-tree cluster the bag stands for
};

struct TreeDecomposition {
  std::vector<Bag> bags;
  int root = -1;

  int width() const;
  std::size_t size() const { return bags.size(); }
  /// Appends `sub` with its root hung under `attach` (or as the root when
  /// attach < 0); returns the id offset of the copied bags.
  int graft(const TreeDecomposition& sub, int attach);
  std::vector<int> subtree(int bag) const;
};

/// Checks the tree shape and properties (a)-(c) of a tree decomposition of g.
ValidationReport validate_tree_decomposition(const TreeDecomposition& d, const EmbeddedGraph& g);

}  // namespace hubway

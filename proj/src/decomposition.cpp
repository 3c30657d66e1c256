#include "hubway/decomposition.h"

#include <limits>
#include <string>

namespace hubway {

void EmbeddedGraph::add_vertex(Vertex v) {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
  if (it == vertices.end() || *it != v) vertices.insert(it, v);
}

void EmbeddedGraph::add_edge(Vertex u, Vertex v, double length) {
  if (u == v) return;
  add_vertex(u);
  add_vertex(v);
  edges[{std::min(u, v), std::max(u, v)}] = length;
}

bool EmbeddedGraph::has_edge(Vertex u, Vertex v) const {
  return edges.count({std::min(u, v), std::max(u, v)}) > 0;
}

std::size_t EmbeddedGraph::index_of(Vertex v) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
  if (it == vertices.end() || *it != v) throw Error("vertex not in embedded graph");
  return static_cast<std::size_t>(it - vertices.begin());
}

std::vector<std::vector<std::pair<Vertex, double>>> EmbeddedGraph::local_adjacency() const {
  std::vector<std::vector<std::pair<Vertex, double>>> adj(vertices.size());
  for (const auto& [e, len] : edges) {
    auto a = static_cast<Vertex>(index_of(e.first));
    auto b = static_cast<Vertex>(index_of(e.second));
    adj[a].push_back({b, len});
    adj[b].push_back({a, len});
  }
  return adj;
}

std::vector<double> EmbeddedGraph::all_pairs() const {
  auto adj = local_adjacency();
  const std::size_t k = vertices.size();
  std::vector<double> out(k * k);
  for (std::size_t s = 0; s < k; ++s) {
    auto d = dijkstra(adj, static_cast<Vertex>(s));
    std::copy(d.begin(), d.end(), out.begin() + static_cast<std::ptrdiff_t>(s * k));
  }
  return out;
}

int TreeDecomposition::width() const {
  std::size_t w = 0;
  for (const auto& b : bags) w = std::max(w, b.vertices.size());
  return static_cast<int>(w) - 1;
}

int TreeDecomposition::graft(const TreeDecomposition& sub, int attach) {
  const int offset = static_cast<int>(bags.size());
  for (const auto& b : sub.bags) {
    Bag nb = b;
    nb.parent = b.parent < 0 ? -1 : b.parent + offset;
    for (int& c : nb.children) c += offset;
    bags.push_back(std::move(nb));
  }
  const int sub_root = sub.root + offset;
  if (attach < 0) {
    root = sub_root;
  } else {
    bags[sub_root].parent = attach;
    bags[attach].children.push_back(sub_root);
  }
  return offset;
}

std::vector<int> TreeDecomposition::subtree(int bag) const {
  std::vector<int> out{bag};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (int c : bags[out[i]].children) out.push_back(c);
  return out;
}

ValidationReport validate_tree_decomposition(const TreeDecomposition& d, const EmbeddedGraph& g) {
  ValidationReport rep;
  const int nb = static_cast<int>(d.bags.size());
  if (nb == 0) {
    if (!g.vertices.empty()) rep.add("vertex coverage: no bags");
    return rep;
  }
  if (d.root < 0 || d.root >= nb || d.bags[d.root].parent != -1) {
    rep.add("tree shape: invalid root");
    return rep;
  }
  std::vector<int> order = d.subtree(d.root);
  std::vector<char> seen(static_cast<std::size_t>(nb), 0);
  for (int b : order) {
    if (seen[b]) {
      rep.add("tree shape: cycle through bag " + std::to_string(b));
      return rep;
    }
    seen[b] = 1;
    for (int c : d.bags[b].children)
      if (d.bags[c].parent != b) rep.add("tree shape: parent link of bag " + std::to_string(c));
  }
  if (static_cast<int>(order.size()) != nb) rep.add("tree shape: bags unreachable from root");

  std::map<Vertex, std::vector<int>> holders;
  for (int b = 0; b < nb; ++b)
    for (Vertex v : d.bags[b].vertices) holders[v].push_back(b);

  for (Vertex v : g.vertices)
    if (!holders.count(v)) rep.add("vertex coverage: vertex " + std::to_string(v) + " in no bag");

  for (const auto& [e, len] : g.edges) {
    bool found = false;
    for (int b : holders[e.first])
      if (contains(d.bags[b].vertices, e.second)) {
        found = true;
        break;
      }
    if (!found)
      rep.add("edge coverage: edge " + std::to_string(e.first) + "-" + std::to_string(e.second) +
              " in no bag");
  }

  // bags holding v are connected iff exactly one of them has a parent outside the set
  for (const auto& [v, hs] : holders) {
    int tops = 0;
    for (int b : hs) {
      int p = d.bags[b].parent;
      if (p < 0 || !contains(d.bags[p].vertices, v)) ++tops;
    }
    if (tops != 1) rep.add("subtree connectivity: vertex " + std::to_string(v));
  }
  return rep;
}

}  // namespace hubway

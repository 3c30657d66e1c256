#include "hubway/splittree.h"

#include <random>
#include <string>

namespace hubway {

int SplitTree::cluster_of(Vertex p, int level) const {
  if (level < 0 || level > top_level) return -1;
  for (int c : by_level[level])
    if (contains(clusters[c].points, p)) return c;
  return -1;
}

SplitTree build_split_tree(const VertexSet& points, const MetricInstance& m, std::uint64_t seed) {
  if (points.empty()) throw Error("split tree needs at least one point");
  SplitTree st;
  st.points = points;
  st.seed = seed;
  double diam = set_diameter(m, points);
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b) lo = std::min(lo, m.dist(points[a], points[b]));
  st.unit = points.size() > 1 ? lo : 1.0;
  st.top_level = points.size() > 1 ? static_cast<int>(std::ceil(std::log2(diam / st.unit) - 1e-12)) + 1 : 0;
  st.top_level = std::max(st.top_level, 0);
  st.by_level.assign(static_cast<std::size_t>(st.top_level) + 1, {});

  Cluster root;
  root.level = st.top_level;
  root.points = points;
  st.clusters.push_back(root);
  st.root = 0;
  st.by_level[st.top_level].push_back(0);

  for (int level = st.top_level - 1; level >= 0; --level) {
    for (int pid : st.by_level[level + 1]) {
      const VertexSet parent_points = st.clusters[pid].points;
      std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(level),
                                      static_cast<std::uint64_t>(parent_points.front())));
      std::vector<Vertex> order = parent_points;
      std::shuffle(order.begin(), order.end(), rng);
      std::uniform_real_distribution<double> factor(0.5, 1.0);
      const double radius = factor(rng) * st.level_radius(level);

      std::vector<char> claimed(parent_points.size(), 0);
      for (Vertex centre : order) {
        VertexSet part;
        for (std::size_t a = 0; a < parent_points.size(); ++a)
          if (!claimed[a] && leq(m.dist(centre, parent_points[a]), radius)) {
            claimed[a] = 1;
            part.push_back(parent_points[a]);
          }
        if (part.empty()) continue;
        Cluster c;
        c.level = level;
        c.parent = pid;
        c.points = std::move(part);
        int id = static_cast<int>(st.clusters.size());
        st.clusters.push_back(std::move(c));
        st.clusters[pid].children.push_back(id);
        st.by_level[level].push_back(id);
      }
    }
  }
  return st;
}

ValidationReport validate_split_tree(const SplitTree& st, const MetricInstance& m) {
  ValidationReport rep;
  for (int level = 0; level <= st.top_level; ++level) {
    VertexSet seen;
    for (int c : st.by_level[level]) {
      const Cluster& cl = st.clusters[c];
      if (!set_intersection(seen, cl.points).empty())
        rep.add("partition: overlapping clusters on level " + std::to_string(level));
      seen = set_union(seen, cl.points);
      if (gt(set_diameter(m, cl.points), 2.0 * st.level_radius(level)))
        rep.add("diameter: cluster " + std::to_string(c) + " on level " + std::to_string(level));
      if (cl.parent >= 0) {
        if (!is_subset(cl.points, st.clusters[cl.parent].points))
          rep.add("refinement: cluster " + std::to_string(c) + " escapes its parent");
      }
      VertexSet kids;
      for (int k : cl.children) kids = set_union(kids, st.clusters[k].points);
      if (level > 0 && kids != cl.points)
        rep.add("refinement: children of cluster " + std::to_string(c) + " do not partition it");
    }
    if (seen != st.points) rep.add("partition: level " + std::to_string(level) + " misses points");
  }
  return rep;
}

NetHierarchy build_hierarchical_nets(const SplitTree& st, double beta, const MetricInstance& m) {
  if (!(beta > 0.0)) throw Error("beta must be positive");
  NetHierarchy nh;
  nh.beta = beta;
  nh.nets.assign(st.clusters.size(), {});
  for (int level = st.top_level; level >= 0; --level) {
    const double spacing = beta * st.level_radius(level);
    for (int c : st.by_level[level]) {
      const Cluster& cl = st.clusters[c];
      VertexSet net;
      if (cl.parent >= 0) net = set_intersection(nh.nets[cl.parent], cl.points);
      for (Vertex p : cl.points) {
        if (contains(net, p)) continue;
        bool far = true;
        for (Vertex q : net)
          if (leq(m.dist(p, q), spacing)) {
            far = false;
            break;
          }
        if (far) net.insert(std::lower_bound(net.begin(), net.end(), p), p);
      }
      nh.nets[c] = std::move(net);
    }
  }
  return nh;
}

ValidationReport validate_nets(const SplitTree& st, const NetHierarchy& nh, const MetricInstance& m) {
  ValidationReport rep;
  for (std::size_t c = 0; c < st.clusters.size(); ++c) {
    const Cluster& cl = st.clusters[c];
    const VertexSet& net = nh.nets[c];
    const double delta = nh.beta * st.level_radius(cl.level);
    const std::string name = "cluster " + std::to_string(c);
    if (!is_subset(net, cl.points)) rep.add(name + ": net outside cluster");
    for (std::size_t a = 0; a < net.size(); ++a)
      for (std::size_t b = a + 1; b < net.size(); ++b)
        if (leq(m.dist(net[a], net[b]), delta)) rep.add(name + ": net spacing");
    for (Vertex p : cl.points)
      if (gt(dist_to_set(m, p, net), delta)) rep.add(name + ": net covering");
    if (!cl.children.empty()) {
      VertexSet below;
      for (int k : cl.children) below = set_union(below, nh.nets[k]);
      if (!is_subset(net, below)) rep.add(name + ": hierarchy");
    }
  }
  return rep;
}

double talwar_beta(double eps_prime, double doubling, double aspect_ratio) {
  double d = std::max(1.0, doubling);
  double la = std::max(1.0, std::log2(std::max(1.0, aspect_ratio)));
  return std::min(1.0, eps_prime / (4.0 * d * la));
}

EmbeddedGraph bag_cliques(const TreeDecomposition& d, const MetricInstance& m) {
  EmbeddedGraph g;
  for (const auto& b : d.bags) {
    for (Vertex v : b.vertices) g.add_vertex(v);
    for (std::size_t a = 0; a < b.vertices.size(); ++a)
      for (std::size_t c = a + 1; c < b.vertices.size(); ++c)
        g.add_edge(b.vertices[a], b.vertices[c], m.dist(b.vertices[a], b.vertices[c]));
  }
  return g;
}

namespace {

TreeDecomposition decomposition_from_tree(const SplitTree& st, const NetHierarchy& nh) {
  TreeDecomposition d;
  for (std::size_t c = 0; c < st.clusters.size(); ++c) {
    Bag b;
    b.vertices = nh.nets[c];
    for (int k : st.clusters[c].children) b.vertices = set_union(b.vertices, nh.nets[static_cast<std::size_t>(k)]);
    b.parent = st.clusters[c].parent;
    b.children = st.clusters[c].children;
    b.level = st.clusters[c].level;
    b.cluster = static_cast<int>(c);
    d.bags.push_back(std::move(b));
  }
  d.root = st.root;
  return d;
}

}  // namespace

PortalEmbedding talwar_embed(const VertexSet& points, const MetricInstance& m, double eps_prime,
                             std::uint64_t seed) {
  if (!(eps_prime > 0.0 && eps_prime <= 1.0)) throw Error("eps_prime must lie in (0, 1]");
  PortalEmbedding pe;
  pe.points = points;
  pe.doubling = estimate_doubling_dimension(points, m).d;
  double aspect = 1.0;
  if (points.size() > 1) {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < points.size(); ++a)
      for (std::size_t b = a + 1; b < points.size(); ++b) lo = std::min(lo, m.dist(points[a], points[b]));
    aspect = set_diameter(m, points) / lo;
  }
  pe.beta = talwar_beta(eps_prime, pe.doubling, aspect);
  pe.tree = build_split_tree(points, m, seed);
  pe.nets = build_hierarchical_nets(pe.tree, pe.beta, m);
  pe.decomposition = decomposition_from_tree(pe.tree, pe.nets);
  pe.graph = bag_cliques(pe.decomposition, m);
  return pe;
}

PortalEmbedding expand_representatives(const PortalEmbedding& pe, const Representatives& reps,
                                       const MetricInstance& m) {
  auto expand = [&](const VertexSet& s) {
    VertexSet out;
    for (Vertex v : s) {
      auto it = reps.represents.find(v);
      if (it == reps.represents.end()) {
        out.push_back(v);
      } else {
        out.insert(out.end(), it->second.begin(), it->second.end());
      }
    }
    normalize(out);
    return out;
  };
  PortalEmbedding out = pe;
  out.points = expand(pe.points);
  out.tree.points = out.points;
  for (auto& c : out.tree.clusters) c.points = expand(c.points);
  for (auto& net : out.nets.nets) net = expand(net);
  for (auto& b : out.decomposition.bags) b.vertices = expand(b.vertices);
  out.graph = bag_cliques(out.decomposition, m);
  return out;
}

}  // namespace hubway

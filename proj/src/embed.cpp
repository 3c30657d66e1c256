#include "hubway/embed.h"

#include <limits>
#include <string>

namespace hubway {

int level_of_distance(double c, double d) {
  int i = 0;
  while (!leq(d, level_scale(c, i + 1))) ++i;
  return i;
}

ConnectingBagChoice connecting_bag(const MetricInstance& m, const TownsDecomposition& td, int town,
                                   int child, const VertexSet& x, const PortalEmbedding& px,
                                   const HdConfig& cfg, double doubling) {
  if (x.empty()) throw Error("missing core hubs");
  const Town& t = td.town(town);
  const VertexSet& cv = td.town(child).vertices;
  ConnectingBagChoice ch;
  ch.child = child;
  ch.sibling_dist = std::numeric_limits<double>::infinity();
  for (int s : t.children) {
    if (s == child) continue;
    double d = set_distance(m, cv, td.town(s).vertices);
    if (ch.sibling < 0 || lt(d, ch.sibling_dist) || (approx_equal(d, ch.sibling_dist) && s < ch.sibling)) {
      ch.sibling = s;
      ch.sibling_dist = d;
    }
  }
  if (ch.sibling < 0) throw Error("connecting bag needs a sibling town");
  ch.level = level_of_distance(cfg.c, ch.sibling_dist);

  double best = std::numeric_limits<double>::infinity();
  for (Vertex h : x) {
    double d = dist_to_set(m, h, cv);
    if (ch.hub < 0 || lt(d, best)) {
      ch.hub = h;
      best = d;
    }
  }

  const SplitTree& st = px.tree;
  ch.j_bar = st.top_level;
  const double r = level_scale(cfg.c, ch.level);
  ch.i_bar = static_cast<int>(std::ceil(std::log2(r / st.unit) - 1e-12));
  const double d = std::max(1.0, doubling);
  const int shift = static_cast<int>(std::ceil(std::log2(1.0 / cfg.epsilon) + std::log2(d) - 1e-12));
  ch.l_bar = std::clamp(std::min(ch.j_bar, ch.i_bar + shift), 0, ch.j_bar);
  ch.bag = st.cluster_of(ch.hub, ch.l_bar);
  if (ch.bag < 0) throw Error("connecting hub missing from split tree");
  return ch;
}

TreeDecomposition merge_tree_decompositions(const TreeDecomposition& d_x,
                                            const std::vector<ChildAttachment>& children) {
  TreeDecomposition d = d_x;
  const int nx = static_cast<int>(d_x.bags.size());
  for (const auto& att : children) {
    const VertexSet& b_content = d_x.bags.at(static_cast<std::size_t>(att.bag)).vertices;
    const int offset = d.graft(att.embedding.decomposition, att.bag);
    const int count = static_cast<int>(att.embedding.decomposition.bags.size());
    for (int k = offset; k < offset + count; ++k) {
      d.bags[k].vertices = set_union(d.bags[k].vertices, b_content);
      d.bags[k].vertices = set_union(d.bags[k].vertices, att.hubs);
    }
    if (att.hubs.empty()) continue;
    std::vector<int> stack{att.bag};
    while (!stack.empty()) {
      int k = stack.back();
      stack.pop_back();
      d.bags[k].vertices = set_union(d.bags[k].vertices, att.hubs);
      for (int c : d.bags[k].children)
        if (c < nx) stack.push_back(c);
    }
  }
  return d;
}

namespace {

constexpr std::uint64_t kTownStream = 0x746f776eULL;

}  // namespace

Embedding embed_town(const EmbedContext& ctx, int town) {
  const MetricInstance& m = *ctx.metric;
  const TownsDecomposition& td = *ctx.towns;
  const Town& t = td.town(town);
  Embedding e;
  e.seed = ctx.seed;

  if (t.is_leaf()) {
    if (t.vertices.size() != 1) throw Error("leaf town is not a singleton");
    e.graph.add_vertex(t.vertices.front());
    Bag b;
    b.vertices = t.vertices;
    b.town = town;
    e.decomposition.bags.push_back(b);
    e.decomposition.root = 0;
    return e;
  }

  const TownsDecomposition& cores_td = ctx.core_towns ? *ctx.core_towns : td;
  const CoreChain chain = compute_cores(cores_td, t.origin);
  ApproxCoreHubs x = compute_approx_core_hubs(m, *ctx.ladder, chain, ctx.cfg,
                                              ctx.shift ? &*ctx.shift : nullptr);
  if (x.empty()) {
    if (!ctx.town_hub_fallback) throw Error("missing core hubs");
    x.all = t.vertices;
    if (ctx.hub_fallbacks) ++*ctx.hub_fallbacks;
  }
  const Representatives reps = select_representatives(td, town, x.all);

  const std::uint64_t stream = derive_seed(ctx.seed, kTownStream, static_cast<std::uint64_t>(t.origin));
  const PortalEmbedding py = talwar_embed(reps.reps, m, ctx.cfg.epsilon_prime(), stream);
  const PortalEmbedding px = expand_representatives(py, reps, m);
  const double doubling = estimate_doubling_dimension(x.all, m).d;

  TownTrace tr;
  tr.town = town;
  tr.hubs = x.all.size();
  tr.representatives = reps.reps.size();
  tr.doubling = doubling;
  tr.hub_width = px.width();

  e.graph = px.graph;
  std::vector<ChildAttachment> attachments;
  for (int c : t.children) {
    ChildAttachment att;
    att.child = c;
    att.embedding = embed_town(ctx, c);
    ConnectingBagChoice choice = connecting_bag(m, td, town, c, x.all, px, ctx.cfg, doubling);
    att.bag = choice.bag;
    att.hubs = set_intersection(x.all, td.town(c).vertices);

    for (Vertex v : att.embedding.graph.vertices) e.graph.add_vertex(v);
    for (const auto& [key, len] : att.embedding.graph.edges) e.graph.add_edge(key.first, key.second, len);
    for (const auto& ce : att.embedding.connectors) e.connectors.push_back(ce);
    for (Vertex u : td.town(c).vertices)
      for (Vertex v : px.decomposition.bags[att.bag].vertices) {
        if (u == v) continue;
        e.graph.add_edge(u, v, m.dist(u, v));
        e.connectors.push_back({u, v, m.dist(u, v)});
      }

    tr.hubs_per_child.push_back(att.hubs.size());
    if (!att.hubs.empty()) tr.hub_children_per_bag[att.bag]++;
    tr.choices.push_back(choice);
    attachments.push_back(std::move(att));
  }
  TreeDecomposition dx = px.decomposition;
  for (auto& b : dx.bags) b.town = town;
  e.decomposition = merge_tree_decompositions(dx, attachments);
  if (ctx.trace) ctx.trace->towns.push_back(std::move(tr));
  return e;
}

GraphEmbedding embed_graph(const MetricInstance& m, const HdConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  GraphEmbedding out;
  const MetricInstance scaled = rescale_min_distance(m, cfg.c, &out.scale_factor);
  out.ladder = build_cover_ladder(scaled, cfg);
  out.towns = build_towns_decomposition(scaled, out.ladder);
  EmbedContext ctx;
  ctx.metric = &scaled;
  ctx.ladder = &out.ladder;
  ctx.towns = &out.towns;
  ctx.cfg = cfg;
  ctx.seed = seed;
  ctx.trace = &out.trace;
  out.embedding = embed_town(ctx, out.towns.root);
  for (auto& [key, len] : out.embedding.graph.edges) len = m.dist(key.first, key.second);
  for (auto& ce : out.embedding.connectors) ce.length = m.dist(ce.town_vertex, ce.bag_vertex);
  return out;
}

ValidationReport validate_embedding(const Embedding& e, const MetricInstance& m) {
  ValidationReport rep = validate_tree_decomposition(e.decomposition, e.graph);
  for (const auto& [key, len] : e.graph.edges)
    if (lt(len, m.dist(key.first, key.second))) {
      rep.add("non-contraction: edge " + std::to_string(key.first) + "-" + std::to_string(key.second) +
              " shorter than its distance");
    } else if (!approx_equal(len, m.dist(key.first, key.second))) {
      rep.add("edge length: edge " + std::to_string(key.first) + "-" + std::to_string(key.second) +
              " differs from its distance");
    }
  for (const auto& ce : e.connectors) {
    auto it = e.graph.edges.find({std::min(ce.town_vertex, ce.bag_vertex), std::max(ce.town_vertex, ce.bag_vertex)});
    if (it == e.graph.edges.end()) {
      rep.add("connector missing from graph");
    } else if (!approx_equal(it->second, m.dist(ce.town_vertex, ce.bag_vertex))) {
      rep.add("connector length differs from its distance");
    }
  }
  const auto d = e.graph.all_pairs();
  const std::size_t k = e.graph.vertices.size();
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) {
      double dh = d[a * k + b];
      double dg = m.dist(e.graph.vertices[a], e.graph.vertices[b]);
      if (!std::isfinite(dh)) {
        rep.add("non-contraction: graph disconnected between " + std::to_string(e.graph.vertices[a]) +
                " and " + std::to_string(e.graph.vertices[b]));
      } else if (lt(dh, dg)) {
        rep.add("non-contraction: pair " + std::to_string(e.graph.vertices[a]) + "-" +
                std::to_string(e.graph.vertices[b]));
      }
    }
  rep.notes.push_back("width " + std::to_string(e.width()));
  return rep;
}

std::vector<double> pair_stretches(const Embedding& e, const MetricInstance& m) {
  const auto d = e.graph.all_pairs();
  const std::size_t k = e.graph.vertices.size();
  std::vector<double> out;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      out.push_back(d[a * k + b] / m.dist(e.graph.vertices[a], e.graph.vertices[b]));
  return out;
}

StretchStats measure_stretch(const MetricInstance& m, const HdConfig& cfg,
                             const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw Error("measure_stretch needs seeds");
  StretchStats st;
  for (Vertex v = 0; v < m.n(); ++v) st.vertices.push_back(v);
  st.max = 1.0;
  for (std::uint64_t s : seeds) {
    GraphEmbedding ge = embed_graph(m, cfg, s);
    auto ps = pair_stretches(ge.embedding, m);
    if (st.pair_mean.empty()) st.pair_mean.assign(ps.size(), 0.0);
    double sum = 0.0;
    for (std::size_t p = 0; p < ps.size(); ++p) {
      st.pair_mean[p] += ps[p] / static_cast<double>(seeds.size());
      sum += ps[p];
      st.max = std::max(st.max, ps[p]);
    }
    st.per_seed_mean.push_back(ps.empty() ? 1.0 : sum / static_cast<double>(ps.size()));
    st.widths.push_back(ge.embedding.width());
  }
  if (!st.pair_mean.empty()) {
    double sum = 0.0;
    for (double v : st.pair_mean) sum += v;
    st.mean = sum / static_cast<double>(st.pair_mean.size());
  }
  return st;
}

}  // namespace hubway

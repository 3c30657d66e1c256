#include "hubway/spc.h"

#include <bit>
#include <limits>

namespace hubway {

void HdConfig::validate() const {
  if (!(c >= 4.0) || !std::isfinite(c)) throw Error("c must be at least 4");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw Error("epsilon must lie in (0, 1]");
}

double level_scale(double c, int i) { return std::pow(c / 4.0, i); }

double CoverLadder::scale(int i) const { return level_scale(config.c, i); }

int top_level_for(double c, double diam) {
  if (!(c > 4.0)) throw Error("scale ladder requires c > 4");
  int i = 0;
  while (!leq(diam, level_scale(c, i))) ++i;
  return i;
}

std::vector<std::vector<Vertex>> paths_in_window(const MetricInstance& m, double lo, double hi) {
  std::vector<std::vector<Vertex>> out;
  for (Vertex u = 0; u < m.n(); ++u)
    for (Vertex v = u + 1; v < m.n(); ++v)
      if (in_half_open(m.dist(u, v), lo, hi)) out.push_back(canonical_shortest_path(m, u, v));
  return out;
}

VertexSet compute_spc_level(const MetricInstance& m, double r, const HdConfig& cfg) {
  if (!(r > 0.0)) throw Error("scale must be positive");
  const auto paths = paths_in_window(m, r, cfg.c * r / 2.0);
  if (paths.empty()) return {};

  const std::size_t n = static_cast<std::size_t>(m.n());
  std::vector<std::vector<std::size_t>> on_vertex(n);
  std::vector<int> gain(n, 0);
  for (std::size_t p = 0; p < paths.size(); ++p)
    for (Vertex x : paths[p]) {
      on_vertex[x].push_back(p);
      ++gain[x];
    }

  std::vector<char> covered(paths.size(), 0);
  std::size_t remaining = paths.size();
  std::vector<Vertex> order;
  while (remaining > 0) {
    Vertex best = 0;
    for (Vertex x = 1; x < static_cast<Vertex>(n); ++x)
      if (gain[x] > gain[best]) best = x;
    assert(gain[best] > 0);
    order.push_back(best);
    for (std::size_t p : on_vertex[best]) {
      if (covered[p]) continue;
      covered[p] = 1;
      --remaining;
      for (Vertex x : paths[p]) --gain[x];
    }
  }

  std::vector<char> chosen(n, 0);
  for (Vertex h : order) chosen[h] = 1;
  std::vector<int> hits(paths.size(), 0);
  for (std::size_t p = 0; p < paths.size(); ++p)
    for (Vertex x : paths[p]) hits[p] += chosen[x];
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Vertex h = *it;
    bool needed = false;
    for (std::size_t p : on_vertex[h])
      if (hits[p] == 1) {
        needed = true;
        break;
      }
    if (needed) continue;
    chosen[h] = 0;
    for (std::size_t p : on_vertex[h]) --hits[p];
  }

  VertexSet hubs;
  for (Vertex x = 0; x < static_cast<Vertex>(n); ++x)
    if (chosen[x]) hubs.push_back(x);
  return hubs;
}

CoverLadder build_cover_ladder(const MetricInstance& m, const HdConfig& cfg) {
  cfg.validate();
  CoverLadder ladder;
  ladder.config = cfg;
  ladder.top_level = top_level_for(cfg.c, m.diam());
  for (int i = 0; i <= ladder.top_level; ++i) {
    CoverLevel level;
    level.index = i;
    level.scale = level_scale(cfg.c, i);
    level.hubs = compute_spc_level(m, level.scale, cfg);
    level.sparsity = local_sparsity(m, level.hubs, level.scale, cfg);
    ladder.sparsity = std::max(ladder.sparsity, level.sparsity);
    ladder.levels.push_back(std::move(level));
  }
  return ladder;
}

int local_sparsity(const MetricInstance& m, const VertexSet& hubs, double r, const HdConfig& cfg) {
  const double radius = cfg.c * r / 2.0;
  int best = 0;
  for (Vertex v = 0; v < m.n(); ++v) {
    int count = 0;
    for (Vertex h : hubs)
      if (leq(m.dist(v, h), radius)) ++count;
    best = std::max(best, count);
  }
  return best;
}

int vicinity_hub_count(const MetricInstance& m, const VertexSet& hubs, Vertex v, double r,
                       const HdConfig& cfg) {
  const double radius = cfg.c * r / 2.0;
  const VertexSet b = ball(m, v, radius);
  int count = 0;
  for (Vertex h : hubs)
    if (leq(dist_to_set(m, h, b), radius)) ++count;
  return count;
}

const char* to_string(HdVariant v) {
  switch (v) {
    case HdVariant::def1: return "def1";
    case HdVariant::def18: return "def18";
    case HdVariant::def19: return "def19";
  }
  return "?";
}

HdVariant parse_hd_variant(const std::string& s) {
  if (s == "def1") return HdVariant::def1;
  if (s == "def18") return HdVariant::def18;
  if (s == "def19") return HdVariant::def19;
  throw Error("unknown highway dimension variant: " + s);
}

namespace {

using Mask = std::uint64_t;

// Keeps only inclusion-minimal masks; hitting those hits the rest.
void reduce_family(std::vector<Mask>& family) {
  std::sort(family.begin(), family.end(),
            [](Mask a, Mask b) {
              int pa = std::popcount(a), pb = std::popcount(b);
              return pa != pb ? pa < pb : a < b;
            });
  family.erase(std::unique(family.begin(), family.end()), family.end());
  std::vector<Mask> kept;
  for (Mask f : family) {
    bool dominated = false;
    for (Mask g : kept)
      if ((g & f) == g) {
        dominated = true;
        break;
      }
    if (!dominated) kept.push_back(f);
  }
  family = std::move(kept);
}

bool can_hit(const std::vector<Mask>& family, Mask chosen, int budget) {
  // Lower bound from pairwise disjoint unhit sets.
  Mask used = 0;
  int disjoint = 0;
  const Mask* branch = nullptr;
  for (const Mask& f : family) {
    if (f & chosen) continue;
    if (!branch) branch = &f;
    if (!(f & used)) {
      used |= f;
      ++disjoint;
    }
  }
  if (!branch) return true;
  if (disjoint > budget) return false;
  for (Mask rest = *branch; rest; rest &= rest - 1) {
    Mask bit = rest & (~rest + 1);
    if (can_hit(family, chosen | bit, budget - 1)) return true;
  }
  return false;
}

std::vector<double> critical_scales(const MetricInstance& m, double c) {
  std::vector<double> lengths;
  for (Vertex u = 0; u < m.n(); ++u)
    for (Vertex v = u + 1; v < m.n(); ++v) lengths.push_back(m.dist(u, v));
  std::vector<double> bps;
  for (double l : lengths) {
    bps.push_back(l);
    bps.push_back(l / 2.0);
    bps.push_back(l / c);
    bps.push_back(l / (c / 2.0));
  }
  std::sort(bps.begin(), bps.end());
  std::vector<double> uniq;
  for (double b : bps)
    if (uniq.empty() || !approx_equal(uniq.back(), b)) uniq.push_back(b);
  std::vector<double> scales;
  if (uniq.empty()) return scales;
  scales.push_back(uniq.front() / 2.0);
  for (std::size_t i = 0; i < uniq.size(); ++i) {
    scales.push_back(uniq[i]);
    if (i + 1 < uniq.size()) scales.push_back((uniq[i] + uniq[i + 1]) / 2.0);
  }
  scales.push_back(uniq.back() * 2.0);
  return scales;
}

struct PairPath {
  double length = 0.0;
  Mask mask = 0;
  Mask interior = 0;
  Vertex a = 0;
  Vertex b = 0;
  std::size_t size = 0;
};

}  // namespace

int min_hitting_set_size(std::vector<Mask> family) {
  reduce_family(family);
  if (!family.empty() && family.front() == 0) throw Error("family contains an empty set");
  int k = 0;
  while (!can_hit(family, 0, k)) ++k;
  return k;
}

HdResult highway_dimension(const MetricInstance& m, const HdConfig& cfg, HdVariant variant) {
  if (m.n() > kExactHdMaxN) throw Error("exact hd limited to small n");
  if (!(cfg.c >= 4.0)) throw Error("c must be at least 4");
  const int n = m.n();

  std::vector<PairPath> pairs;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b) {
      PairPath p;
      p.a = a;
      p.b = b;
      p.length = m.dist(a, b);
      auto path = canonical_shortest_path(m, a, b);
      p.size = path.size();
      for (std::size_t i = 0; i < path.size(); ++i) {
        p.mask |= Mask{1} << path[i];
        if (i > 0 && i + 1 < path.size()) p.interior |= Mask{1} << path[i];
      }
      pairs.push_back(p);
    }
  // near[v][p] = dist(v, path p), far[v][p] = max distance from v to a path vertex
  std::vector<std::vector<double>> near(n), far(n);
  for (Vertex v = 0; v < n; ++v)
    for (const auto& p : pairs) {
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (Mask rest = p.mask; rest; rest &= rest - 1) {
        Vertex x = std::countr_zero(rest);
        lo = std::min(lo, m.dist(v, x));
        hi = std::max(hi, m.dist(v, x));
      }
      near[v].push_back(lo);
      far[v].push_back(hi);
    }

  HdResult res;
  const auto scales = critical_scales(m, cfg.c);
  res.scales_checked = scales.size();
  std::vector<Mask> family;
  for (double r : scales) {
    for (Vertex v = 0; v < n; ++v) {
      family.clear();
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& p = pairs[i];
        switch (variant) {
          case HdVariant::def1:
            if (gt(p.length, r) && leq(far[v][i], cfg.c * r)) family.push_back(p.mask);
            break;
          case HdVariant::def19:
            if (in_half_open(p.length, r, 2.0 * r) && leq(near[v][i], 2.0 * r))
              family.push_back(p.mask);
            break;
          case HdVariant::def18:
            if (gt(p.length, r) && leq(near[v][i], 2.0 * r)) {
              if (p.size >= 3) {
                family.push_back(p.interior);
              } else {
                family.push_back(Mask{1} << p.a);
                family.push_back(Mask{1} << p.b);
              }
            }
            break;
        }
      }
      reduce_family(family);
      if (can_hit(family, 0, res.k)) continue;
      while (!can_hit(family, 0, res.k)) ++res.k;
      res.worst_scale = r;
      res.worst_center = v;
    }
  }
  return res;
}

}  // namespace hubway

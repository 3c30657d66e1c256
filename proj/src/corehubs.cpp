#include "hubway/corehubs.h"

#include <limits>

namespace hubway {

CoreChain compute_cores(const TownsDecomposition& td, int town) {
  const Town& t = td.town(town);
  CoreChain chain;
  chain.town = town;
  chain.level = t.recursion_level();
  chain.cores.assign(static_cast<std::size_t>(chain.level) + 1, {});
  chain.cores[chain.level] = t.vertices;
  for (int i = chain.level - 1; i >= 0; --i)
    chain.cores[i] = set_intersection(td.sprawl(i), chain.cores[i + 1]);
  return chain;
}

VertexSet core_hubs_at(const CoreChain& chain, const CoverLadder& ladder, int i) {
  if (i < 1 || i >= chain.level) return {};
  return set_intersection(chain.cores[i], ladder.hubs(i));
}

ApproxCoreHubs compute_approx_core_hubs(const MetricInstance& m, const CoverLadder& ladder,
                                        const CoreChain& chain, const HdConfig& cfg,
                                        const HubShift* shift) {
  ApproxCoreHubs x;
  x.town = chain.town;
  x.level = chain.level;
  const int j = chain.level;
  x.per_level.assign(static_cast<std::size_t>(std::max(j, 1)), {});

  VertexSet targets;
  if (shift) targets = set_intersection(chain.cores[j], shift->allowed);

  std::vector<VertexSet> hubs(x.per_level.size());
  for (int i = 1; i < j; ++i) {
    VertexSet h = core_hubs_at(chain, ladder, i);
    if (shift) {
      VertexSet moved;
      if (i >= shift->floor_level && !targets.empty()) {
        for (Vertex v : h) {
          Vertex best = targets.front();
          for (Vertex t : targets)
            if (lt(m.dist(v, t), m.dist(v, best))) best = t;
          x.net_shifts.push_back({v, best, m.dist(v, best), i});
          moved.push_back(best);
        }
      }
      normalize(moved);
      h = std::move(moved);
    }
    hubs[i] = std::move(h);
  }

  // first level each vertex entered X
  std::map<Vertex, int> first_level;
  for (int i = 1; i < j; ++i) {
    const double radius = cfg.epsilon * ladder.scale(i);
    VertexSet level_set;
    for (Vertex h : hubs[i]) {
      Vertex pick = h;
      double pick_dist = 0.0;
      if (i >= 2) {
        int pick_level = std::numeric_limits<int>::max();
        bool found = false;
        for (const auto& [cand, lvl] : first_level) {
          double d = m.dist(h, cand);
          if (!leq(d, radius)) continue;
          bool better = !found || lt(d, pick_dist) ||
                        (approx_equal(d, pick_dist) &&
                         (lvl < pick_level || (lvl == pick_level && cand < pick)));
          if (better) {
            found = true;
            pick = cand;
            pick_dist = d;
            pick_level = lvl;
          }
        }
        if (!found) {
          pick = h;
          pick_dist = 0.0;
        }
      }
      x.shifts.push_back({h, pick, pick_dist, i});
      level_set.push_back(pick);
    }
    normalize(level_set);
    for (Vertex v : level_set) first_level.emplace(v, i);
    x.per_level[i] = std::move(level_set);
    x.all = set_union(x.all, x.per_level[i]);
  }
  return x;
}

Representatives select_representatives(const TownsDecomposition& td, int town, const VertexSet& x) {
  Representatives out;
  VertexSet seen;
  for (int c : td.town(town).children) {
    VertexSet inside = set_intersection(x, td.town(c).vertices);
    if (inside.empty()) continue;
    Vertex rep = inside.front();
    out.reps.push_back(rep);
    out.child_of[rep] = c;
    seen = set_union(seen, inside);
    out.represents[rep] = std::move(inside);
  }
  normalize(out.reps);
  if (seen.size() != x.size()) throw Error("approximate core hub outside every child town");
  return out;
}

std::vector<Vertex> greedy_ball_cover(const MetricInstance& m, const VertexSet& target, double r,
                                      Vertex first) {
  std::vector<Vertex> centers;
  if (target.empty()) return centers;
  std::vector<double> near(target.size(), std::numeric_limits<double>::infinity());
  auto add_center = [&](Vertex c) {
    centers.push_back(c);
    for (std::size_t a = 0; a < target.size(); ++a) near[a] = std::min(near[a], m.dist(c, target[a]));
  };
  add_center(contains(target, first) ? first : target.front());
  while (true) {
    std::size_t far = target.size();
    for (std::size_t a = 0; a < target.size(); ++a)
      if (!leq(near[a], r) && (far == target.size() || near[a] > near[far])) far = a;
    if (far == target.size()) break;
    add_center(target[far]);
  }
  return centers;
}

DoublingEstimate estimate_doubling_dimension(const VertexSet& points, const MetricInstance& m) {
  DoublingEstimate est;
  if (points.size() <= 1) {
    est.center = points.empty() ? -1 : points.front();
    if (!points.empty()) est.cover = {points.front()};
    return est;
  }
  std::vector<double> dists;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      double d = m.dist(points[a], points[b]);
      dists.push_back(d);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
  std::vector<double> grid;
  if (points.size() <= 60) {
    for (double d : dists) {
      grid.push_back(d);
      grid.push_back(d / 2.0);
    }
  } else {
    for (double r = lo / 2.0; r <= hi * 1.0000001; r *= std::pow(2.0, 0.25)) grid.push_back(r);
    grid.push_back(hi);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(), [](double a, double b) { return approx_equal(a, b); }),
             grid.end());

  std::size_t worst = 1;
  for (double r : grid)
    for (Vertex v : points) {
      VertexSet target;
      for (Vertex u : points)
        if (leq(m.dist(v, u), 2.0 * r)) target.push_back(u);
      if (target.size() <= worst) continue;
      auto cover = greedy_ball_cover(m, target, r, v);
      if (cover.size() > worst) {
        worst = cover.size();
        est.center = v;
        est.radius = r;
        est.cover = std::move(cover);
      }
    }
  est.d = std::log2(static_cast<double>(worst));
  if (est.center < 0) {
    est.center = points.front();
    est.cover = {points.front()};
  }
  return est;
}

}  // namespace hubway

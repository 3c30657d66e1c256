#include "hubway/towns.h"

#include <functional>
#include <limits>
#include <string>

namespace hubway {

LevelTowns sprawl_and_towns_at_level(const MetricInstance& m, const CoverLadder& ladder, int i) {
  const double r = ladder.scale(i);
  const VertexSet& hubs = ladder.hubs(i);
  LevelTowns out;
  std::vector<char> absorbed(static_cast<std::size_t>(m.n()), 0);
  for (Vertex v = 0; v < m.n(); ++v) {
    if (absorbed[v]) continue;
    if (!gt(dist_to_set(m, v, hubs), 2.0 * r)) continue;
    VertexSet t = ball(m, v, r);
    for (Vertex u : t) absorbed[u] = 1;
    out.towns.push_back(std::move(t));
  }
  for (Vertex v = 0; v < m.n(); ++v)
    if (!absorbed[v]) out.sprawl.push_back(v);
  return out;
}

TownsDecomposition build_towns_decomposition(const MetricInstance& m, const CoverLadder& ladder) {
  TownsDecomposition td;
  td.top_level = ladder.top_level;
  for (int i = 0; i <= ladder.top_level; ++i)
    td.per_level.push_back(sprawl_and_towns_at_level(m, ladder, i));

  VertexSet all;
  for (Vertex v = 0; v < m.n(); ++v) all.push_back(v);

  auto is_town_at = [&](const VertexSet& s, int i) {
    for (const auto& t : td.per_level[i].towns)
      if (t == s) return true;
    return false;
  };

  std::function<int(VertexSet, int, int)> make_town = [&](VertexSet vertices, int level, int parent) {
    int id = static_cast<int>(td.towns.size());
    Town t;
    t.id = id;
    t.vertices = std::move(vertices);
    t.levels.push_back(level);
    t.parent = parent;
    t.origin = id;
    td.towns.push_back(t);

    VertexSet remaining = td.towns[id].vertices;
    const VertexSet whole = remaining;
    bool peeled = false;
    for (int i = level - 1; i >= 0; --i) {
      if (!peeled && is_town_at(whole, i)) {
        td.towns[id].levels.push_back(i);
        continue;
      }
      for (const auto& sub : td.per_level[i].towns) {
        if (is_subset(sub, remaining)) {
          if (sub == whole) throw Error("town peeled as its own only child");
          remaining = set_difference(remaining, sub);
          peeled = true;
          int child = make_town(sub, i, id);
          td.towns[id].children.push_back(child);
        } else if (!set_intersection(sub, remaining).empty()) {
          throw Error("laminarity violated while peeling towns");
        }
      }
    }
    if (!remaining.empty() && whole.size() > 1)
      throw Error("town vertices left unassigned after peeling");
    return id;
  };

  if (!is_town_at(all, ladder.top_level)) throw Error("vertex set is not a town at the top level");
  td.root = make_town(all, ladder.top_level, -1);
  return td;
}

ValidationReport validate_towns(const TownsDecomposition& td, const MetricInstance& m,
                                const CoverLadder& ladder) {
  ValidationReport rep;
  const int n = m.n();
  if (td.towns.empty()) {
    rep.add("empty decomposition");
    return rep;
  }
  const Town& root = td.town(td.root);
  if (static_cast<int>(root.vertices.size()) != n) rep.add("root does not contain every vertex");

  for (const Town& t : td.towns) {
    const std::string name = "town " + std::to_string(t.id);
    if (t.vertices.empty()) rep.add(name + ": empty");
    for (std::size_t a = 1; a < t.levels.size(); ++a)
      if (t.levels[a] != t.levels[a - 1] - 1) {
        rep.notes.push_back(name + ": non-consecutive levels");
        break;
      }
    VertexSet comp = set_difference(root.vertices, t.vertices);
    for (int i : t.levels) {
      double r = ladder.scale(i);
      if (gt(set_diameter(m, t.vertices), r))
        rep.add(name + ": diameter exceeds r_" + std::to_string(i));
      if (!comp.empty() && leq(set_distance(m, t.vertices, comp), r))
        rep.add(name + ": separation at most r_" + std::to_string(i));
    }
    if (t.children.size() == 1) rep.add(name + ": child count is 1");
    if (t.children.empty() && t.vertices.size() != 1) rep.add(name + ": leaf is not a singleton");
    VertexSet covered;
    for (int c : t.children) {
      const Town& ch = td.town(c);
      if (ch.parent != t.id) rep.add(name + ": child parent link broken");
      if (!t.levels.empty() && !ch.levels.empty() && ch.top_level() >= t.recursion_level())
        rep.add(name + ": child level not below recursion level");
      if (!is_subset(ch.vertices, t.vertices)) rep.add(name + ": laminarity breach (child not nested)");
      if (!set_intersection(covered, ch.vertices).empty())
        rep.add(name + ": laminarity breach (children overlap)");
      covered = set_union(covered, ch.vertices);
    }
    if (!t.children.empty() && covered != t.vertices)
      rep.add(name + ": children do not partition the town");
  }
  for (std::size_t a = 0; a < td.towns.size(); ++a)
    for (std::size_t b = a + 1; b < td.towns.size(); ++b) {
      const auto& x = td.towns[a].vertices;
      const auto& y = td.towns[b].vertices;
      if (set_intersection(x, y).empty() || is_subset(x, y) || is_subset(y, x)) continue;
      rep.add("laminarity breach between towns " + std::to_string(a) + " and " + std::to_string(b));
    }
  return rep;
}

TownsDecomposition restrict_decomposition(const TownsDecomposition& td, const VertexSet& keep) {
  TownsDecomposition out;
  out.top_level = td.top_level;
  for (const auto& lt : td.per_level) {
    LevelTowns r;
    r.sprawl = set_intersection(lt.sprawl, keep);
    for (const auto& t : lt.towns) {
      auto s = set_intersection(t, keep);
      if (!s.empty()) r.towns.push_back(std::move(s));
    }
    out.per_level.push_back(std::move(r));
  }

  // Returns the id of the restricted town standing for `id`, or -1 if empty.
  std::function<int(int, int)> copy = [&](int id, int parent) -> int {
    const Town& t = td.town(id);
    VertexSet vs = set_intersection(t.vertices, keep);
    if (vs.empty()) return -1;
    std::vector<int> nonempty;
    for (int c : t.children)
      if (!set_intersection(td.town(c).vertices, keep).empty()) nonempty.push_back(c);
    if (nonempty.size() == 1) return copy(nonempty.front(), parent);
    int nid = static_cast<int>(out.towns.size());
    Town nt;
    nt.id = nid;
    nt.vertices = std::move(vs);
    nt.levels = t.levels;
    nt.parent = parent;
    nt.origin = t.origin;
    out.towns.push_back(nt);
    for (int c : nonempty) {
      int cid = copy(c, nid);
      out.towns[nid].children.push_back(cid);
    }
    return nid;
  };
  out.root = copy(td.root, -1);
  if (out.root < 0) throw Error("restriction to an empty vertex set");
  return out;
}

}  // namespace hubway

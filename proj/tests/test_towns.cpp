#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "hubway/fixtures.h"
#include "hubway/towns.h"
#include "oracles.h"

using namespace hubway;

namespace {

const HdConfig kCfg{5.0, 0.5, 1};

struct Setup {
  MetricInstance m;
  CoverLadder ladder;
  TownsDecomposition td;
};

Setup setup(const WeightedGraph& g, const HdConfig& cfg = kCfg) {
  Setup s;
  s.m = rescale_min_distance(build_metric(g), cfg.c);
  s.ladder = build_cover_ladder(s.m, cfg);
  s.td = build_towns_decomposition(s.m, s.ladder);
  return s;
}

// Towns of one level by evaluating the definition over every seed, on
// Floyd-Warshall distances of the rescaled graph.
std::set<VertexSet> oracle_towns(const std::vector<std::vector<double>>& d, const VertexSet& hubs, double r) {
  std::set<VertexSet> out;
  const auto n = static_cast<Vertex>(d.size());
  for (Vertex v = 0; v < n; ++v) {
    double near = oracle::kInf;
    for (Vertex h : hubs) near = std::min(near, d[v][h]);
    if (!gt(near, 2.0 * r)) continue;
    VertexSet t;
    for (Vertex u = 0; u < n; ++u)
      if (leq(d[u][v], r)) t.push_back(u);
    out.insert(t);
  }
  return out;
}

WeightedGraph scaled_graph(const WeightedGraph& g, double c) {
  double factor = 1.0;
  rescale_min_distance(build_metric(g), c, &factor);
  WeightedGraph s = g;
  for (auto& e : s.edges) e.length *= factor;
  return s;
}

WeightedGraph two_triangles() {
  return WeightedGraph{6, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}, {3, 4, 1}, {4, 5, 1}, {3, 5, 1}, {2, 3, 100}}};
}

std::vector<WeightedGraph> fixtures() {
  std::vector<WeightedGraph> out{make_path(9),          make_star(8),          make_grid(3, 4),
                                 make_spider(5, 5.0),   make_def19_star(3, 0.05), make_complete_exp(6, 5.0),
                                 make_three_cluster(4), two_triangles(),       make_hub_and_spoke(4, 4, 40.0, 2)};
  for (std::uint64_t s = 1; s <= 5; ++s) out.push_back(make_random_connected(14, 8, 1.0, 9.0, s));
  return out;
}

int find_town(const TownsDecomposition& td, const VertexSet& vs) {
  for (const auto& t : td.towns)
    if (t.vertices == vs) return t.id;
  return -1;
}

bool mentions(const ValidationReport& rep, const std::string& needle) {
  for (const auto& v : rep.violations)
    if (v.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("level 0 has only singleton towns and the top level is one town") {
  for (const auto& g : fixtures()) {
    Setup s = setup(g);
    const LevelTowns bottom = sprawl_and_towns_at_level(s.m, s.ladder, 0);
    CHECK(bottom.sprawl.empty());
    CHECK(bottom.towns.size() == static_cast<std::size_t>(s.m.n()));
    for (std::size_t k = 0; k < bottom.towns.size(); ++k) CHECK(bottom.towns[k] == VertexSet{static_cast<Vertex>(k)});
    const LevelTowns top = sprawl_and_towns_at_level(s.m, s.ladder, s.ladder.top_level);
    REQUIRE(top.towns.size() == 1);
    CHECK(top.towns.front().size() == static_cast<std::size_t>(s.m.n()));
    CHECK(top.sprawl.empty());
  }
}

TEST_CASE("towns per level agree with the definition evaluated over every seed") {
  for (const auto& g : fixtures()) {
    Setup s = setup(g);
    const auto d = oracle::floyd_warshall(scaled_graph(g, kCfg.c));
    for (int i = 0; i <= s.ladder.top_level; ++i) {
      const LevelTowns lt = sprawl_and_towns_at_level(s.m, s.ladder, i);
      std::set<VertexSet> got(lt.towns.begin(), lt.towns.end());
      CHECK(got.size() == lt.towns.size());
      CHECK(got == oracle_towns(d, s.ladder.hubs(i), s.ladder.scale(i)));
      // the sprawl is exactly the complement of the towns and stays near the hubs
      VertexSet in_towns;
      for (const auto& t : lt.towns) in_towns = set_union(in_towns, t);
      CHECK(set_intersection(in_towns, lt.sprawl).empty());
      CHECK(in_towns.size() + lt.sprawl.size() == static_cast<std::size_t>(s.m.n()));
      for (Vertex v : lt.sprawl) CHECK(leq(dist_to_set(s.m, v, s.ladder.hubs(i)), 2.0 * s.ladder.scale(i)));
    }
  }
}

TEST_CASE("two triangles joined by a long edge") {
  Setup s = setup(two_triangles());
  const auto d = oracle::floyd_warshall(scaled_graph(two_triangles(), kCfg.c));
  // frozen from the definition oracle: both triangles are towns on levels 5..20
  const std::set<VertexSet> expected{{0, 1, 2}, {3, 4, 5}};
  for (int i = 5; i <= 20; ++i) {
    CHECK(oracle_towns(d, s.ladder.hubs(i), s.ladder.scale(i)) == expected);
    const LevelTowns lt = sprawl_and_towns_at_level(s.m, s.ladder, i);
    CHECK(std::set<VertexSet>(lt.towns.begin(), lt.towns.end()) == expected);
  }
  const Town& root = s.td.town(s.td.root);
  REQUIRE(root.children.size() == 2);
  for (int c : root.children) {
    const Town& t = s.td.town(c);
    CHECK(t.vertices.size() == 3);
    CHECK(t.top_level() == (t.vertices.front() == 0 ? 20 : 21));
    CHECK(t.recursion_level() == 5);
    CHECK(t.children.size() == 3);
  }
}

TEST_CASE("tiny graphs") {
  SUBCASE("single vertex") {
    Setup s = setup(make_path(1));
    REQUIRE(s.td.towns.size() == 1);
    CHECK(s.td.town(s.td.root).vertices == VertexSet{0});
    CHECK(s.td.town(s.td.root).is_leaf());
    CHECK(validate_towns(s.td, s.m, s.ladder).ok());
  }
  SUBCASE("two vertices") {
    Setup s = setup(make_path(2));
    const Town& root = s.td.town(s.td.root);
    CHECK(root.vertices == VertexSet{0, 1});
    REQUIRE(root.children.size() == 2);
    for (int c : root.children) {
      CHECK(s.td.town(c).vertices.size() == 1);
      CHECK(s.td.town(c).is_leaf());
    }
    CHECK(validate_towns(s.td, s.m, s.ladder).ok());
  }
}

TEST_CASE("three-cluster structure") {
  Setup s = setup(make_three_cluster(3));
  // clusters A = {0,1,2}, B = {3,4,5}, C = {6,7,8}; A-B at 50, B-C at 2500
  const int a = find_town(s.td, {0, 1, 2});
  const int b = find_town(s.td, {3, 4, 5});
  const int c = find_town(s.td, {6, 7, 8});
  const int ab = find_town(s.td, {0, 1, 2, 3, 4, 5});
  REQUIRE(a >= 0);
  REQUIRE(b >= 0);
  REQUIRE(c >= 0);
  // the definition also makes A u B a town on the scales between 50 and 2500
  REQUIRE(ab >= 0);
  CHECK(s.td.town(ab).parent == s.td.root);
  CHECK(s.td.town(c).parent == s.td.root);
  CHECK(s.td.town(a).parent == ab);
  CHECK(s.td.town(b).parent == ab);
  for (int t : {a, b, c}) {
    CHECK(s.td.town(t).children.size() == 3);
    for (int ch : s.td.town(t).children) CHECK(s.td.town(ch).vertices.size() == 1);
  }
  // frozen from the definition oracle
  CHECK(s.td.town(ab).levels.front() == 38);
  CHECK(s.td.town(ab).levels.back() == 25);
  CHECK(s.td.town(c).levels.front() == 39);
  CHECK(s.td.town(c).levels.back() == 8);
  const auto d = oracle::floyd_warshall(scaled_graph(make_three_cluster(3), kCfg.c));
  for (int lvl : s.td.town(ab).levels)
    CHECK(oracle_towns(d, s.ladder.hubs(lvl), s.ladder.scale(lvl)).count({0, 1, 2, 3, 4, 5}) == 1);
  CHECK(validate_towns(s.td, s.m, s.ladder).ok());
}

TEST_CASE("decomposition properties on fixtures") {
  for (const auto& g : fixtures()) {
    Setup s = setup(g);
    const ValidationReport rep = validate_towns(s.td, s.m, s.ladder);
    CHECK(rep.ok());
    const Town& root = s.td.town(s.td.root);
    CHECK(root.vertices.size() == static_cast<std::size_t>(s.m.n()));
    CHECK(root.top_level() == s.ladder.top_level);
    std::size_t leaves = 0;
    for (const Town& t : s.td.towns) {
      CHECK(t.children.size() != 1);
      if (t.is_leaf()) {
        ++leaves;
        CHECK(t.vertices.size() == 1);
        CHECK(t.recursion_level() == 0);
      }
      for (int i : t.levels) {
        const LevelTowns lt = sprawl_and_towns_at_level(s.m, s.ladder, i);
        CHECK(std::find(lt.towns.begin(), lt.towns.end(), t.vertices) != lt.towns.end());
        CHECK(leq(set_diameter(s.m, t.vertices), s.ladder.scale(i)));
      }
      for (int c : t.children) CHECK(s.td.town(c).top_level() < t.recursion_level());
    }
    CHECK(leaves == static_cast<std::size_t>(s.m.n()));
    for (const auto& x : s.td.towns)
      for (const auto& y : s.td.towns) {
        const bool disjoint = set_intersection(x.vertices, y.vertices).empty();
        CHECK((disjoint || is_subset(x.vertices, y.vertices) || is_subset(y.vertices, x.vertices)));
      }
  }
}

TEST_CASE("validation reports constructed violations") {
  Setup s = setup(make_three_cluster(3));
  REQUIRE(validate_towns(s.td, s.m, s.ladder).ok());

  SUBCASE("vertex moved across towns") {
    TownsDecomposition bad = s.td;
    const int a = find_town(bad, {0, 1, 2});
    const int b = find_town(bad, {3, 4, 5});
    auto& va = bad.towns[static_cast<std::size_t>(a)].vertices;
    auto& vb = bad.towns[static_cast<std::size_t>(b)].vertices;
    va.erase(std::find(va.begin(), va.end(), 2));
    vb.push_back(2);
    normalize(vb);
    const ValidationReport rep = validate_towns(bad, s.m, s.ladder);
    CHECK(!rep.ok());
    CHECK(mentions(rep, "laminarity breach"));
  }
  SUBCASE("single child injected") {
    TownsDecomposition bad = s.td;
    const int c = find_town(bad, {6, 7, 8});
    Town extra = bad.town(c);
    extra.id = static_cast<int>(bad.towns.size());
    extra.parent = c;
    for (int ch : extra.children) bad.towns[static_cast<std::size_t>(ch)].parent = extra.id;
    bad.towns[static_cast<std::size_t>(c)].children = {extra.id};
    bad.towns.push_back(extra);
    const ValidationReport rep = validate_towns(bad, s.m, s.ladder);
    CHECK(!rep.ok());
    CHECK(mentions(rep, "child count"));
  }
  SUBCASE("oversized town") {
    TownsDecomposition bad = s.td;
    const int a = find_town(bad, {0, 1, 2});
    bad.towns[static_cast<std::size_t>(a)].levels.insert(bad.towns[static_cast<std::size_t>(a)].levels.end(), 0);
    CHECK(mentions(validate_towns(bad, s.m, s.ladder), "diameter exceeds"));
  }
}

TEST_CASE("restriction keeps a valid laminar tree") {
  Setup s = setup(make_three_cluster(4));
  const VertexSet keep{0, 2, 5, 9, 10};
  const TownsDecomposition r = restrict_decomposition(s.td, keep);
  CHECK(r.town(r.root).vertices == keep);
  for (const Town& t : r.towns) {
    CHECK(t.children.size() != 1);
    CHECK(is_subset(t.vertices, keep));
    if (t.is_leaf()) CHECK(t.vertices.size() == 1);
    VertexSet covered;
    for (int c : t.children) covered = set_union(covered, r.town(c).vertices);
    if (!t.is_leaf()) CHECK(covered == t.vertices);
  }
  CHECK_THROWS_AS(restrict_decomposition(s.td, {}), Error);
}

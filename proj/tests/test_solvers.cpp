#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hubway/fixtures.h"
#include "hubway/solvers.h"
#include "instances.h"
#include "oracles.h"

using namespace hubway;

namespace {

const ProblemKind kKinds[] = {ProblemKind::tsp, ProblemKind::steiner, ProblemKind::facility};

WeightedGraph triangle() { return WeightedGraph{3, {{0, 1, 1}, {1, 2, 1}, {0, 2, 1}}}; }

ProblemInstance instance(ProblemKind kind, const WeightedGraph& g) {
  ProblemInstance p;
  p.kind = kind;
  p.metric = build_metric(g);
  return p;
}

double oracle_opt(const ProblemInstance& p, const WeightedGraph& g) {
  switch (p.kind) {
    case ProblemKind::tsp:
      return oracle::brute_tsp(g);
    case ProblemKind::steiner:
      return oracle::brute_steiner(g, p.terminals);
    case ProblemKind::facility:
      return oracle::brute_facility(g, p.open_cost, p.phi);
  }
  return 0.0;
}

WeightedGraph random_graph(int n, std::uint64_t seed) {
  return make_random_connected(n, static_cast<int>(seed % static_cast<std::uint64_t>(n)), 1.0, 10.0, seed);
}

}  // namespace

TEST_CASE("problem kinds and validation") {
  CHECK(parse_problem_kind("tsp") == ProblemKind::tsp);
  CHECK(parse_problem_kind("steiner") == ProblemKind::steiner);
  CHECK(parse_problem_kind("facility") == ProblemKind::facility);
  CHECK(std::string(to_string(ProblemKind::facility)) == "facility");
  CHECK_THROWS_AS(parse_problem_kind("knapsack"), Error);

  ProblemInstance p = instance(ProblemKind::steiner, make_path(3));
  p.terminals = {0, 7};
  CHECK_THROWS_WITH_AS(p.validate(), "terminal outside the graph", Error);
  ProblemInstance f = instance(ProblemKind::facility, make_path(3));
  f.open_cost = {1.0, 2.0};
  CHECK_THROWS_WITH_AS(f.validate(), "open costs must cover every vertex", Error);
  f.open_cost = {1.0, -2.0, 0.0};
  CHECK_THROWS_AS(f.validate(), Error);
}

TEST_CASE("small worked instances") {
  SUBCASE("unit triangle tour") {
    ProblemInstance p = instance(ProblemKind::tsp, triangle());
    for (const SolveResult& r : {solve_dp(p), exact_solve(p)}) {
      CHECK(r.cost == doctest::Approx(3.0));
      CHECK(witness_feasible(p, r));
      CHECK(r.tour.front() == r.tour.back());
    }
    CHECK(baseline_kappa(p) == doctest::Approx(4.0));
  }
  SUBCASE("steiner on an edge") {
    ProblemInstance p = instance(ProblemKind::steiner, make_path(2, 2.5));
    p.terminals = {0, 1};
    CHECK(solve_dp(p).cost == doctest::Approx(2.5));
    CHECK(exact_solve(p).cost == doctest::Approx(2.5));
  }
  SUBCASE("steiner through a middle vertex") {
    ProblemInstance p = instance(ProblemKind::steiner, make_path(3));
    p.terminals = {0, 2};
    const SolveResult r = exact_solve(p);
    CHECK(r.cost == doctest::Approx(2.0));
    CHECK(r.tree_edges.size() == 2);
    CHECK(solve_dp(p).cost == doctest::Approx(2.0));
  }
  SUBCASE("single-vertex facility") {
    ProblemInstance p = instance(ProblemKind::facility, make_path(1));
    p.open_cost = {3.5};
    for (const SolveResult& r : {solve_dp(p), exact_solve(p), baseline_solve(p)}) {
      CHECK(r.cost == doctest::Approx(3.5));
      CHECK(r.facilities == VertexSet{0});
    }
  }
  SUBCASE("K4 tour against its three distinct tours") {
    WeightedGraph k4{4, {{0, 1, 2.0}, {0, 2, 3.5}, {0, 3, 1.5}, {1, 2, 1.0}, {1, 3, 4.0}, {2, 3, 2.5}}};
    ProblemInstance p = instance(ProblemKind::tsp, k4);
    const auto d = oracle::floyd_warshall(k4);
    const double tours[] = {oracle::tour_length(d, {0, 1, 2, 3}), oracle::tour_length(d, {0, 1, 3, 2}),
                            oracle::tour_length(d, {0, 2, 1, 3})};
    const double best = *std::min_element(std::begin(tours), std::end(tours));
    CHECK(exact_solve(p).cost == doctest::Approx(best));
    CHECK(solve_dp(p).cost == doctest::Approx(best));
  }
}

TEST_CASE("tree decomposition dynamic programs agree with brute force") {
  int count = 0;
  for (ProblemKind kind : kKinds)
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      const int n = 4 + static_cast<int>(seed % 6);
      const WeightedGraph g = random_graph(n, seed * 7 + static_cast<std::uint64_t>(kind));
      const ProblemInstance p = instances::random_instance(kind, g, seed);
      const double opt = oracle_opt(p, g);
      const SolveResult dp = solve_dp(p);
      const SolveResult ex = exact_solve(p);
      CHECK(dp.cost == doctest::Approx(opt).epsilon(1e-9));
      CHECK(ex.cost == doctest::Approx(opt).epsilon(1e-9));
      CHECK(witness_feasible(p, dp));
      CHECK(witness_feasible(p, ex));
      CHECK(witness_cost(p, dp) == doctest::Approx(dp.cost));
      const SolveResult base = baseline_solve(p);
      CHECK(witness_feasible(p, base));
      CHECK(geq(base.cost, opt));
      ++count;
    }
  CHECK(count == 90);
}

TEST_CASE("baseline bounds") {
  SUBCASE("steiner spanning a tree graph is exact") {
    const WeightedGraph g = make_random_connected(9, 0, 1.0, 5.0, 3);
    ProblemInstance p = instance(ProblemKind::steiner, g);
    for (Vertex v = 0; v < 9; ++v) p.terminals.push_back(v);
    double total = 0.0;
    for (const auto& e : g.edges) total += e.length;
    CHECK(baseline_kappa(p) == doctest::Approx(total));
    CHECK(exact_solve(p).cost == doctest::Approx(total));
  }
  SUBCASE("facility location within 1.861 of optimum") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      const WeightedGraph g = random_graph(12, seed);
      const ProblemInstance p = instances::random_instance(ProblemKind::facility, g, seed);
      const double opt = oracle::brute_facility(g, p.open_cost, p.phi);
      CHECK(baseline_kappa(p) <= 1.861 * opt * (1 + 1e-9));
      CHECK(geq(baseline_kappa(p), opt));
    }
  }
  SUBCASE("tsp within twice the optimum") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const WeightedGraph g = random_graph(8, seed);
      const ProblemInstance p = instance(ProblemKind::tsp, g);
      const double opt = oracle::brute_tsp(g);
      CHECK(geq(baseline_solve(p).cost, opt));
      CHECK(leq(baseline_kappa(p), 2.0 * opt));
    }
  }
}

TEST_CASE("size guards and caps") {
  CHECK_THROWS_WITH_AS(exact_solve(instance(ProblemKind::tsp, make_path(kExactTspMaxN + 1))),
                       "exact tsp limited to small n", Error);
  ProblemInstance big = instance(ProblemKind::facility, make_path(kExactFacilityMaxN + 1));
  big.open_cost.assign(static_cast<std::size_t>(kExactFacilityMaxN + 1), 1.0);
  CHECK_THROWS_WITH_AS(exact_solve(big), "exact facility limited to small n", Error);
  ProblemInstance st = instance(ProblemKind::steiner, make_path(kExactSteinerMaxTerminals + 2));
  for (Vertex v = 0; v <= kExactSteinerMaxTerminals; ++v) st.terminals.push_back(v);
  CHECK_THROWS_WITH_AS(exact_solve(st), "exact steiner limited to few terminals", Error);

  ProblemInstance k = instance(ProblemKind::tsp, make_complete_exp(6, 1.0));
  SolverOptions tight;
  tight.tsp_width_cap = 2;
  CHECK_THROWS_WITH_AS(solve_dp(k, tight), "width cap exceeded", Error);
  SolverOptions small_budget;
  small_budget.state_budget = 3;
  CHECK_THROWS_WITH_AS(solve_dp(instance(ProblemKind::tsp, make_grid(3, 3)), small_budget), "state budget exceeded",
                       Error);
}

TEST_CASE("explicit decompositions") {
  // the heuristic decomposition is valid for the graph it was built from
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const MetricInstance m = build_metric(random_graph(10, seed));
    EmbeddedGraph h;
    for (Vertex v = 0; v < m.n(); ++v) h.add_vertex(v);
    for (Vertex u = 0; u < m.n(); ++u)
      for (const auto& [v, len] : m.adjacency()[static_cast<std::size_t>(u)])
        if (u < v) h.add_edge(u, v, len);
    const TreeDecomposition d = heuristic_tree_decomposition(h);
    CHECK(validate_tree_decomposition(d, h).ok());
    ProblemInstance p;
    p.metric = m;
    const SolveResult r = solve_on_tree_decomposition(p, h, d);
    CHECK(r.width == d.width());
    CHECK(witness_feasible(p, r));
  }
}

TEST_CASE("net reduction") {
  SUBCASE("tiny delta keeps every vertex") {
    ProblemInstance p = instance(ProblemKind::tsp, make_path(5));
    const NetReduction nr = build_net_reduction(p, HdConfig{5.0, 0.5, 1}, 1.0, p.vertices());
    CHECK(nr.delta == doctest::Approx(0.1));
    CHECK(nr.net == VertexSet{0, 1, 2, 3, 4});
    for (Vertex v = 0; v < 5; ++v) CHECK(nr.assign[static_cast<std::size_t>(v)] == v);
  }
  SUBCASE("two tight clusters collapse to two points") {
    ProblemInstance p = instance(ProblemKind::tsp, make_three_cluster(3, 50.0, 2500.0));
    p.domain = {0, 1, 2, 3, 4, 5};
    const NetReduction nr = build_net_reduction(p, HdConfig{5.0, 0.5, 1}, 12.0 * 6, p.domain);
    CHECK(nr.delta == doctest::Approx(6.0));
    CHECK(nr.net == VertexSet{0, 3});
    CHECK(nr.assign[7] == -1);
  }
  SUBCASE("spacing and covering on fixtures") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
      for (ProblemKind kind : kKinds) {
        const ProblemInstance p = instances::random_instance(kind, 12, seed);
        const NetReduction nr = build_net_reduction(p, HdConfig{5.0, 0.5, 1});
        CHECK(nr.kappa == doctest::Approx(baseline_kappa(p)));
        for (Vertex a : nr.net)
          for (Vertex b : nr.net)
            if (a != b) CHECK(gt(p.metric.dist(a, b), nr.delta));
        for (Vertex v = 0; v < p.metric.n(); ++v) {
          const Vertex q = nr.assign[static_cast<std::size_t>(v)];
          if (q < 0) continue;
          CHECK(contains(nr.net, q));
          CHECK(leq(p.metric.dist(v, q), nr.delta));
        }
      }
  }
}

TEST_CASE("qptas on a two-vertex instance is optimal") {
  for (ProblemKind kind : kKinds) {
    ProblemInstance p = instance(kind, make_path(2, 4.0));
    if (kind == ProblemKind::steiner) p.terminals = {0, 1};
    if (kind == ProblemKind::facility) p.open_cost = {1.0, 9.0};
    const SolveResult r = qptas_solve(p, HdConfig{5.0, 0.25, 1}, 1);
    CHECK(r.feasible);
    CHECK(r.cost == doctest::Approx(exact_solve(p).cost));
  }
}

TEST_CASE("qptas witnesses are feasible and never beat the optimum") {
  const std::vector<WeightedGraph> graphs{make_three_cluster(3), make_spider(4, 5.0), make_star(8),
                                          random_graph(9, 3), random_graph(10, 8)};
  for (const auto& g : graphs)
    for (ProblemKind kind : kKinds)
      for (std::uint64_t seed = 1; seed <= 2; ++seed) {
        const ProblemInstance p = instances::random_instance(kind, g, seed);
        QptasTrace trace;
        const SolveResult r = qptas_solve(p, HdConfig{5.0, 0.25, 1}, seed, {}, &trace);
        CHECK(r.feasible);
        CHECK(witness_feasible(p, r));
        CHECK(r.cost == doctest::Approx(witness_cost(p, r)));
        CHECK(geq(r.cost, exact_solve(p).cost));
        CHECK(leq(r.lift_overhead, r.lift_bound));
        CHECK(!trace.nets.empty());
        if (kind == ProblemKind::tsp) {
          // a closed walk through every vertex
          CHECK(r.tour.front() == r.tour.back());
          for (Vertex v = 0; v < g.n; ++v) CHECK(std::find(r.tour.begin(), r.tour.end(), v) != r.tour.end());
        }
      }
}

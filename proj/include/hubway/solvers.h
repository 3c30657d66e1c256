#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hubway/embed.h"

namespace hubway {

enum class ProblemKind { tsp, steiner, facility };

const char* to_string(ProblemKind k);
ProblemKind parse_problem_kind(const std::string& s);

struct ProblemInstance {
  ProblemKind kind = ProblemKind::tsp;
  MetricInstance metric;
  VertexSet terminals;           // steiner
  std::vector<double> open_cost;  // facility, per vertex
  std::vector<double> phi;        // facility, per vertex; empty means all 1
  VertexSet domain;               // vertices to visit / serve; empty means all

  double weight(Vertex v) const { return phi.empty() ? 1.0 : phi[static_cast<std::size_t>(v)]; }
  VertexSet vertices() const;
  void validate() const;
};

struct SolveResult {
  double cost = 0.0;
  std::vector<Vertex> tour;                        // closed walk, front == back (tsp)
  std::vector<std::pair<Vertex, Vertex>> tree_edges;  // steiner
  VertexSet facilities;                            // facility
  std::vector<Vertex> assignment;                  // facility, nearest open per vertex
  std::string method;
  bool feasible = false;
  std::optional<double> ratio_to_oracle;
  double lift_overhead = 0.0;
  double lift_bound = 0.0;
  int width = -1;
  bool fell_back = false;
};

/// Cost of the witness under the instance metric (tsp: consecutive
/// distances; steiner: edge distances; facility: opening + weighted connection).
double witness_cost(const ProblemInstance& p, const SolveResult& r);
bool witness_feasible(const ProblemInstance& p, const SolveResult& r);

struct SolverOptions {
  int tsp_width_cap = 12;
  int steiner_width_cap = 12;
  int facility_width_cap = 8;
  std::size_t state_budget = 16'000'000;  // total states over all DP tables

  int cap_for(ProblemKind k) const;
};

/// Min-degree elimination decomposition of an explicit graph.
TreeDecomposition heuristic_tree_decomposition(const EmbeddedGraph& g);

/// Optimum of the problem on graph h (vertices are ids of p.metric; h's edge
/// lengths are the walking/connection costs) using decomposition d.
SolveResult solve_on_tree_decomposition(const ProblemInstance& p, const EmbeddedGraph& h,
                                        const TreeDecomposition& d, const SolverOptions& opt = {});

/// Treewidth DP on the input graph itself (shortest edges only).
SolveResult solve_dp(const ProblemInstance& p, const SolverOptions& opt = {});

inline constexpr int kExactTspMaxN = 14;
inline constexpr int kExactSteinerMaxTerminals = 10;
inline constexpr int kExactFacilityMaxN = 18;

SolveResult exact_solve(const ProblemInstance& p);

/// Constant-factor solution; its cost is kappa.
SolveResult baseline_solve(const ProblemInstance& p);
double baseline_kappa(const ProblemInstance& p);

struct NetReduction {
  double kappa = 0.0;
  double delta = 0.0;
  VertexSet net;
  std::vector<Vertex> assign;  // per vertex of the metric, -1 outside the domain
  int level_floor = 0;
};

/// Greedy delta-net of `domain` (id order) with delta = eps kappa / |domain|
/// and nearest-point assignment (ties to the smaller id).
NetReduction build_net_reduction(const ProblemInstance& p, const HdConfig& cfg, double kappa,
                                 const VertexSet& domain);
NetReduction build_net_reduction(const ProblemInstance& p, const HdConfig& cfg);

struct QptasTrace {
  std::vector<NetReduction> nets;
  std::vector<int> widths;
  int hub_fallbacks = 0;  // towns whose shifted hub set was empty
};

SolveResult qptas_solve(const ProblemInstance& p, const HdConfig& cfg, std::uint64_t seed,
                        const SolverOptions& opt = {}, QptasTrace* trace = nullptr);

}  // namespace hubway

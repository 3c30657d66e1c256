#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "hubway/embed.h"
#include "hubway/experiment.h"
#include "hubway/fixtures.h"
#include "hubway/io.h"
#include "hubway/solvers.h"
#include "hubway/towns.h"

using namespace hubway;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Globals {
  double c = 5.0;
  double eps = 0.5;
  std::uint64_t seed = 1;
  std::string out;

  HdConfig config() const {
    HdConfig cfg{c, eps, seed};
    cfg.validate();
    return cfg;
  }
};

template <class F>
auto load(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw IoError(e.what());
  }
}

void emit(const Globals& g, const json& j) {
  if (g.out.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    write_json(g.out, j);
  }
}

MetricInstance load_metric(const std::string& path) {
  WeightedGraph g = load([&] { return read_graph(path); });
  return build_metric(g);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hubway: highway-dimension embeddings into bounded-treewidth graphs"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--c", g.c, "ball scaling constant c (> 4)");
  app.add_option("--eps", g.eps, "accuracy parameter in (0, 1]");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--out", g.out, "output file (stdout when omitted)");

  std::function<int()> action;
  std::string graph_path, fixture, variant = "def1", problem = "tsp", mode = "qptas", terminals_path, costs_path;
  std::string embedding_path, towns_path, plan_path, csv_path, summary_path;
  bool oracle = false;

  auto* gen = app.add_subcommand("gen", "generate a fixture graph as an edge list");
  gen->add_option("--fixture", fixture, "family:key=value:...")->required();
  gen->callback([&] {
    action = [&] {
      FixtureSpec spec = parse_fixture_spec(fixture);
      if (app.count("--seed")) spec.seed = g.seed;
      WeightedGraph wg = generate_fixture(spec);
      validate_graph(wg);
      if (g.out.empty()) {
        write_edge_list(std::cout, wg);
      } else {
        write_graph(g.out, wg);
      }
      return kExitOk;
    };
  });

  auto* spc = app.add_subcommand("spc", "shortest path covers for every level");
  spc->add_option("--graph", graph_path)->required();
  spc->callback([&] {
    action = [&] {
      const MetricInstance m = load_metric(graph_path);
      double factor = 1.0;
      const MetricInstance scaled = rescale_min_distance(m, g.config().c, &factor);
      json j = build_cover_ladder(scaled, g.config());
      j["scale_factor"] = factor;
      emit(g, j);
      return kExitOk;
    };
  });

  auto* hd = app.add_subcommand("hd", "exact highway dimension of a small graph");
  hd->add_option("--graph", graph_path)->required();
  hd->add_option("--variant", variant, "def1 | def18 | def19");
  hd->callback([&] {
    action = [&] {
      const MetricInstance m = load_metric(graph_path);
      json j = highway_dimension(m, g.config(), parse_hd_variant(variant));
      j["variant"] = variant;
      j["c"] = g.c;
      emit(g, j);
      return kExitOk;
    };
  });

  auto* towns = app.add_subcommand("towns", "towns decomposition");
  towns->add_option("--graph", graph_path)->required();
  towns->callback([&] {
    action = [&] {
      const MetricInstance m = load_metric(graph_path);
      double factor = 1.0;
      const MetricInstance scaled = rescale_min_distance(m, g.config().c, &factor);
      const CoverLadder ladder = build_cover_ladder(scaled, g.config());
      const TownsDecomposition td = build_towns_decomposition(scaled, ladder);
      json j = td;
      j["scale_factor"] = factor;
      emit(g, j);
      return validate_towns(td, scaled, ladder).ok() ? kExitOk : kExitViolation;
    };
  });

  auto* embed = app.add_subcommand("embed", "embed into a bounded-treewidth graph");
  embed->add_option("--graph", graph_path)->required();
  embed->callback([&] {
    action = [&] {
      const MetricInstance m = load_metric(graph_path);
      const GraphEmbedding ge = embed_graph(m, g.config(), g.seed);
      const ValidationReport rep = validate_embedding(ge.embedding, m);
      json j = ge.embedding;
      j["validation"] = rep;
      emit(g, j);
      return rep.ok() ? kExitOk : kExitViolation;
    };
  });

  auto* solve = app.add_subcommand("solve", "solve tsp, steiner tree or facility location");
  solve->add_option("--graph", graph_path)->required();
  solve->add_option("--problem", problem, "tsp | steiner | fl")->check(CLI::IsMember({"tsp", "steiner", "fl", "facility"}));
  solve->add_option("--terminals", terminals_path, "steiner terminals file");
  solve->add_option("--costs", costs_path, "facility costs file: v open_cost [phi]");
  solve->add_option("--mode", mode, "qptas | dp | exact | baseline")
      ->check(CLI::IsMember({"qptas", "dp", "exact", "baseline"}));
  solve->add_flag("--oracle", oracle, "also report the ratio to the exact optimum");
  solve->callback([&] {
    action = [&] {
      ProblemInstance p;
      p.kind = parse_problem_kind(problem == "fl" ? "facility" : problem);
      p.metric = load_metric(graph_path);
      if (p.kind == ProblemKind::steiner) {
        if (terminals_path.empty()) throw CLI::ValidationError("--terminals", "required for steiner");
        p.terminals = load([&] { return read_vertex_list(terminals_path); });
      }
      if (p.kind == ProblemKind::facility) {
        if (costs_path.empty()) throw CLI::ValidationError("--costs", "required for facility location");
        load([&] {
          read_costs(costs_path, p.metric.n(), p.open_cost, p.phi);
          return 0;
        });
      }
      SolveResult r;
      if (mode == "qptas") {
        r = qptas_solve(p, g.config(), g.seed);
      } else if (mode == "dp") {
        r = solve_dp(p);
      } else if (mode == "exact") {
        r = exact_solve(p);
      } else {
        r = baseline_solve(p);
      }
      if (oracle) {
        const double opt = exact_solve(p).cost;
        r.ratio_to_oracle = opt > 0.0 ? r.cost / opt : 1.0;
      }
      emit(g, r);
      return r.feasible ? kExitOk : kExitViolation;
    };
  });

  auto* validate = app.add_subcommand("validate", "check a graph and optional artifacts");
  validate->add_option("--graph", graph_path)->required();
  validate->add_option("--embedding", embedding_path, "embedding JSON to check against the graph");
  validate->add_option("--towns", towns_path, "towns JSON to check against the graph");
  validate->callback([&] {
    action = [&] {
      const MetricInstance m = load_metric(graph_path);
      ValidationReport rep;
      if (!embedding_path.empty()) {
        const Embedding e = load([&] { return read_json(embedding_path).get<Embedding>(); });
        rep = validate_embedding(e, m);
      }
      if (!towns_path.empty()) {
        const TownsDecomposition td = load([&] { return read_json(towns_path).get<TownsDecomposition>(); });
        const MetricInstance scaled = rescale_min_distance(m, g.config().c);
        const ValidationReport tr = validate_towns(td, scaled, build_cover_ladder(scaled, g.config()));
        rep.violations.insert(rep.violations.end(), tr.violations.begin(), tr.violations.end());
        rep.notes.insert(rep.notes.end(), tr.notes.begin(), tr.notes.end());
      }
      emit(g, rep);
      return rep.ok() ? kExitOk : kExitViolation;
    };
  });

  auto* experiment = app.add_subcommand("experiment", "run an embedding experiment plan");
  experiment->add_option("--plan", plan_path, "plan JSON")->required();
  experiment->add_option("--csv", csv_path, "CSV output (stdout when omitted)");
  experiment->add_option("--summary", summary_path, "summary JSON output");
  experiment->callback([&] {
    action = [&] {
      const ExperimentPlan plan = load([&] { return parse_plan(read_json(plan_path)); });
      const auto rows = run_experiment(plan);
      std::ostringstream csv;
      write_csv(csv, rows);
      if (csv_path.empty()) {
        std::cout << csv.str();
      } else {
        write_text(csv_path, csv.str());
      }
      if (!summary_path.empty()) write_json(summary_path, summarize(rows));
      for (const auto& r : rows)
        if (!r.ok()) return kExitViolation;
      return kExitOk;
    };
  });

  for (auto* sub : {gen, spc, hd, towns, embed, solve, validate, experiment}) sub->fallthrough();

  try {
    app.parse(argc, argv);
    return action();
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "hubway: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "hubway: " << e.what() << '\n';
    return kExitUsage;
  }
}

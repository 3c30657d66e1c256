#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "hubway/fixtures.h"

namespace hubway {

struct ExperimentPlan {
  std::vector<FixtureSpec> fixtures;
  std::vector<double> cs{5.0};
  std::vector<double> epsilons{0.5};
  std::vector<std::uint64_t> seeds{1};
  unsigned threads = 1;
};

/// One embedding run: (fixture, c, eps, seed).
struct ExperimentRow {
  std::string fixture;
  int n = 0;
  double c = 0.0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  int width = -1;
  double mean_stretch = 0.0;
  double max_stretch = 0.0;
  double runtime_ms = 0.0;
  std::string status = "ok";  // "ok" or "fail: <reason>"

  bool ok() const { return status == "ok"; }
};

/// Plan JSON: {"fixtures": ["family:key=value", ...], "c": [...], "eps": [...],
/// "seeds": [...] or {"first": s, "count": k}, "threads": t}.
ExperimentPlan parse_plan(const nlohmann::json& j);

/// Runs towns, embedding, validation and stretch measurement per cell; rows
/// come back in plan order (fixture, c, eps, seed) whatever the thread count.
std::vector<ExperimentRow> run_experiment(const ExperimentPlan& plan);

ExperimentRow run_cell(const FixtureSpec& spec, double c, double eps, std::uint64_t seed);

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows, bool with_runtime = true);

/// Per (fixture, c, eps): mean of mean_stretch over seeds, max stretch,
/// max width and failure count.
nlohmann::json summarize(const std::vector<ExperimentRow>& rows);

}  // namespace hubway

#include "hubway/experiment.h"

#include <algorithm>
#include <chrono>
#include <future>
#include <map>
#include <ostream>
#include <tuple>

#include "hubway/embed.h"

namespace hubway {

ExperimentPlan parse_plan(const nlohmann::json& j) {
  ExperimentPlan plan;
  if (!j.at("fixtures").is_array()) throw Error("plan: fixtures must be an array");
  for (const auto& f : j.at("fixtures")) plan.fixtures.push_back(parse_fixture_spec(f.get<std::string>()));
  if (j.contains("c")) plan.cs = j.at("c").get<std::vector<double>>();
  if (j.contains("eps")) plan.epsilons = j.at("eps").get<std::vector<double>>();
  if (j.contains("seeds")) {
    const auto& s = j.at("seeds");
    if (s.is_array()) {
      plan.seeds = s.get<std::vector<std::uint64_t>>();
    } else {
      plan.seeds.clear();
      const auto first = s.value("first", std::uint64_t{1});
      const auto count = s.at("count").get<std::uint64_t>();
      for (std::uint64_t k = 0; k < count; ++k) plan.seeds.push_back(first + k);
    }
  }
  plan.threads = j.value("threads", 1u);
  for (double c : plan.cs) HdConfig{c, 0.5, 1}.validate();
  for (double e : plan.epsilons) HdConfig{5.0, e, 1}.validate();
  return plan;
}

ExperimentRow run_cell(const FixtureSpec& spec, double c, double eps, std::uint64_t seed) {
  ExperimentRow row;
  row.fixture = spec.label();
  row.c = c;
  row.eps = eps;
  row.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    const MetricInstance m = build_metric(generate_fixture(spec));
    row.n = m.n();
    HdConfig cfg{c, eps, seed};
    GraphEmbedding ge = embed_graph(m, cfg, seed);
    const MetricInstance scaled = m.scaled(ge.scale_factor);
    ValidationReport rep = validate_towns(ge.towns, scaled, ge.ladder);
    ValidationReport emb = validate_embedding(ge.embedding, m);
    rep.violations.insert(rep.violations.end(), emb.violations.begin(), emb.violations.end());
    row.width = ge.embedding.width();
    if (!rep.ok()) {
      row.status = "fail: " + rep.violations.front();
    } else {
      const auto st = pair_stretches(ge.embedding, m);
      row.mean_stretch = 1.0;
      row.max_stretch = 1.0;
      if (!st.empty()) {
        double sum = 0.0;
        for (double s : st) sum += s;
        row.mean_stretch = sum / static_cast<double>(st.size());
        row.max_stretch = *std::max_element(st.begin(), st.end());
      }
    }
  } catch (const std::exception& e) {
    row.status = std::string("fail: ") + e.what();
  }
  row.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return row;
}

std::vector<ExperimentRow> run_experiment(const ExperimentPlan& plan) {
  struct Cell {
    const FixtureSpec* spec;
    double c, eps;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const auto& f : plan.fixtures)
    for (double c : plan.cs)
      for (double e : plan.epsilons)
        for (std::uint64_t s : plan.seeds) cells.push_back({&f, c, e, s});
  std::vector<ExperimentRow> rows(cells.size());
  const std::size_t threads = std::max(1u, plan.threads);
  for (std::size_t begin = 0; begin < cells.size(); begin += threads) {
    const std::size_t end = std::min(cells.size(), begin + threads);
    std::vector<std::future<ExperimentRow>> jobs;
    for (std::size_t k = begin; k < end; ++k) {
      const Cell& cell = cells[k];
      jobs.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred,
                                [cell] { return run_cell(*cell.spec, cell.c, cell.eps, cell.seed); }));
    }
    for (std::size_t k = begin; k < end; ++k) rows[k] = jobs[k - begin].get();
  }
  return rows;
}

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows, bool with_runtime) {
  out << "fixture,n,c,lambda,eps,seed,width,mean_stretch,max_stretch";
  if (with_runtime) out << ",runtime_ms";
  out << ",status\n";
  for (const auto& r : rows) {
    out << r.fixture << ',' << r.n << ',' << r.c << ',' << r.c - 4.0 << ',' << r.eps << ',' << r.seed << ','
        << r.width << ',';
    if (r.ok()) {
      out.precision(12);
      out << r.mean_stretch << ',' << r.max_stretch;
      out.precision(6);
    } else {
      out << ',';
    }
    if (with_runtime) out << ',' << static_cast<long long>(r.runtime_ms);
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    out << ',' << status << '\n';
  }
}

nlohmann::json summarize(const std::vector<ExperimentRow>& rows) {
  using Key = std::tuple<std::string, double, double>;
  struct Acc {
    double sum = 0.0, max = 1.0;
    int count = 0, failures = 0, width = -1, n = 0;
  };
  std::vector<Key> order;
  std::map<Key, Acc> acc;
  for (const auto& r : rows) {
    Key k{r.fixture, r.c, r.eps};
    if (!acc.count(k)) order.push_back(k);
    Acc& a = acc[k];
    a.n = r.n;
    a.width = std::max(a.width, r.width);
    if (!r.ok()) {
      ++a.failures;
      continue;
    }
    a.sum += r.mean_stretch;
    a.max = std::max(a.max, r.max_stretch);
    ++a.count;
  }
  nlohmann::json out = nlohmann::json::array();
  for (const auto& k : order) {
    const Acc& a = acc[k];
    out.push_back({{"fixture", std::get<0>(k)},
                   {"n", a.n},
                   {"c", std::get<1>(k)},
                   {"eps", std::get<2>(k)},
                   {"runs", a.count},
                   {"failures", a.failures},
                   {"mean_stretch", a.count ? a.sum / a.count : 0.0},
                   {"max_stretch", a.max},
                   {"max_width", a.width}});
  }
  return out;
}

}  // namespace hubway

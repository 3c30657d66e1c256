#include "hubway/fixtures.h"

#include <limits>
#include <random>
#include <set>
#include <sstream>

namespace hubway {

WeightedGraph make_path(int n, double length) {
  if (n < 1) throw Error("path needs n >= 1");
  WeightedGraph g;
  g.n = n;
  for (int i = 0; i + 1 < n; ++i) g.edges.push_back({i, i + 1, length});
  return g;
}

WeightedGraph make_star(int n) {
  if (n < 1) throw Error("star needs n >= 1");
  WeightedGraph g;
  g.n = n;
  for (int i = 1; i < n; ++i) g.edges.push_back({0, i, 1.0});
  return g;
}

WeightedGraph make_grid(int rows, int cols) {
  if (rows < 1 || cols < 1) throw Error("grid needs positive dimensions");
  WeightedGraph g;
  g.n = rows * cols;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      int id = r * cols + c;
      if (c + 1 < cols) g.edges.push_back({id, id + 1, 1.0});
      if (r + 1 < rows) g.edges.push_back({id, id + cols, 1.0});
    }
  return g;
}

WeightedGraph make_spider(int legs, double c) {
  if (legs < 1 || !(c > 1.0)) throw Error("spider needs legs >= 1 and c > 1");
  WeightedGraph g;
  g.n = 2 * legs + 1;
  for (int i = 1; i <= legs; ++i) {
    g.edges.push_back({0, 2 * i - 1, c - 1.0});
    g.edges.push_back({2 * i - 1, 2 * i, 1.0});
  }
  return g;
}

WeightedGraph make_def19_star(int legs, double eps) {
  if (legs < 1 || !(eps > 0.0)) throw Error("def19_star needs legs >= 1 and eps > 0");
  WeightedGraph g;
  g.n = 4 * legs + 1;
  for (int i = 0; i < legs; ++i) {
    int u = 4 * i + 1, w = u + 1, x = u + 2, y = u + 3;
    g.edges.push_back({0, u, 4.0});
    g.edges.push_back({u, w, 2.0 * eps});
    g.edges.push_back({w, x, 1.0});
    g.edges.push_back({w, y, 1.0 + eps});
  }
  return g;
}

WeightedGraph make_complete_exp(int n, double c) {
  if (n < 1 || !(c > 0.0)) throw Error("complete_exp needs n >= 1 and c > 0");
  WeightedGraph g;
  g.n = n;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) g.edges.push_back({a, b, std::pow(c, std::min(a, b) + 1)});
  return g;
}

WeightedGraph make_three_cluster(int size, double near, double far) {
  if (size < 1 || !(near > 1.0) || !(far > 1.0)) throw Error("three_cluster needs size >= 1 and long links");
  WeightedGraph g;
  g.n = 3 * size;
  for (int k = 0; k < 3; ++k)
    for (int i = 1; i < size; ++i) g.edges.push_back({k * size, k * size + i, 0.5});
  g.edges.push_back({0, size, near});
  g.edges.push_back({size, 2 * size, far});
  return g;
}

WeightedGraph make_hub_and_spoke(int hubs, int spokes, double spacing, std::uint64_t seed) {
  if (hubs < 1 || spokes < 0 || !(spacing > 0.0)) throw Error("hub_and_spoke needs hubs >= 1");
  std::mt19937_64 rng(derive_seed(seed, 0x6875627aULL));
  std::uniform_real_distribution<double> pos(0.0, spacing * hubs);
  std::uniform_real_distribution<double> spoke_len(0.5, 1.5);
  WeightedGraph g;
  g.n = hubs * (spokes + 1);
  std::vector<std::pair<double, double>> at(static_cast<std::size_t>(hubs));
  for (auto& p : at) p = {pos(rng), pos(rng)};
  auto euclid = [&](int a, int b) {
    double d = std::hypot(at[a].first - at[b].first, at[a].second - at[b].second);
    return std::max(d, 2.0 * spokes + 4.0);
  };
  // Prim spanning tree over hub positions
  std::vector<char> in(static_cast<std::size_t>(hubs), 0);
  std::vector<double> best(static_cast<std::size_t>(hubs), std::numeric_limits<double>::infinity());
  std::vector<int> from(static_cast<std::size_t>(hubs), -1);
  best[0] = 0.0;
  std::set<std::pair<int, int>> linked;
  for (int it = 0; it < hubs; ++it) {
    int u = -1;
    for (int v = 0; v < hubs; ++v)
      if (!in[v] && (u < 0 || best[v] < best[u])) u = v;
    in[u] = 1;
    if (from[u] >= 0) {
      g.edges.push_back({from[u] * (spokes + 1), u * (spokes + 1), euclid(from[u], u)});
      linked.insert({std::min(u, from[u]), std::max(u, from[u])});
    }
    for (int v = 0; v < hubs; ++v)
      if (!in[v] && euclid(u, v) < best[v]) {
        best[v] = euclid(u, v);
        from[v] = u;
      }
  }
  // a few extra links between near hubs
  std::uniform_int_distribution<int> pick(0, hubs - 1);
  for (int extra = 0; extra < hubs / 3; ++extra) {
    int a = pick(rng), b = pick(rng);
    if (a == b || linked.count({std::min(a, b), std::max(a, b)})) continue;
    linked.insert({std::min(a, b), std::max(a, b)});
    g.edges.push_back({a * (spokes + 1), b * (spokes + 1), euclid(a, b) * 1.05});
  }
  for (int h = 0; h < hubs; ++h) {
    int base = h * (spokes + 1);
    for (int s = 1; s <= spokes; ++s) {
      std::uniform_int_distribution<int> parent(0, s - 1);
      int p = s <= 2 ? 0 : parent(rng);
      g.edges.push_back({base + p, base + s, spoke_len(rng)});
    }
  }
  return g;
}

WeightedGraph make_random_connected(int n, int extra_edges, double lo, double hi, std::uint64_t seed) {
  if (n < 1 || !(lo > 0.0) || hi < lo) throw Error("random graph needs n >= 1 and 0 < lo <= hi");
  std::mt19937_64 rng(derive_seed(seed, 0x72616e64ULL));
  std::uniform_real_distribution<double> len(lo, hi);
  WeightedGraph g;
  g.n = n;
  std::set<std::pair<int, int>> used;
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> parent(0, v - 1);
    int p = parent(rng);
    used.insert({p, v});
    g.edges.push_back({p, v, len(rng)});
  }
  std::uniform_int_distribution<int> any(0, std::max(0, n - 1));
  for (int k = 0, tries = 0; k < extra_edges && tries < 50 * (extra_edges + 1); ++tries) {
    int a = any(rng), b = any(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!used.insert({a, b}).second) continue;
    g.edges.push_back({a, b, len(rng)});
    ++k;
  }
  return g;
}

double FixtureSpec::param(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

double FixtureSpec::required(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw Error("fixture " + family + " needs parameter " + key);
  return it->second;
}

std::string FixtureSpec::label() const {
  std::ostringstream os;
  os << family;
  for (const auto& [k, v] : params) os << ':' << k << '=' << v;
  return os.str();
}

WeightedGraph generate_fixture(const FixtureSpec& spec) {
  auto i = [&](const std::string& k) { return static_cast<int>(spec.required(k)); };
  const std::string& f = spec.family;
  if (f == "path") return make_path(i("n"), spec.param("length", 1.0));
  if (f == "star") return make_star(i("n"));
  if (f == "grid") return make_grid(i("rows"), i("cols"));
  if (f == "spider") return make_spider(i("legs"), spec.required("c"));
  if (f == "def19_star") return make_def19_star(i("legs"), spec.required("eps"));
  if (f == "complete_exp") return make_complete_exp(i("n"), spec.required("c"));
  if (f == "three_cluster")
    return make_three_cluster(i("size"), spec.param("near", 50.0), spec.param("far", 2500.0));
  if (f == "hub_and_spoke")
    return make_hub_and_spoke(i("hubs"), i("spokes"), spec.param("spacing", 40.0), spec.seed);
  if (f == "random")
    return make_random_connected(i("n"), static_cast<int>(spec.param("extra", 0.0)), spec.param("lo", 1.0),
                                 spec.param("hi", 10.0), spec.seed);
  throw Error("unknown fixture family: " + f);
}

FixtureSpec parse_fixture_spec(const std::string& text) {
  // family:key=value:key=value
  FixtureSpec spec;
  std::stringstream ss(text);
  std::string part;
  bool first = true;
  while (std::getline(ss, part, ':')) {
    if (first) {
      spec.family = part;
      first = false;
      continue;
    }
    auto eq = part.find('=');
    if (eq == std::string::npos) throw Error("bad fixture parameter: " + part);
    std::string key = part.substr(0, eq);
    double value = std::stod(part.substr(eq + 1));
    if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(value);
    } else {
      spec.params[key] = value;
    }
  }
  if (spec.family.empty()) throw Error("empty fixture spec");
  return spec;
}

}  // namespace hubway

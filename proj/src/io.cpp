#include "hubway/io.h"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hubway {

namespace {

std::vector<std::string> data_tokens(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream ss(body);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw Error("line " + std::to_string(line) + ": " + msg);
}

long long parse_int(const std::string& s, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  long long v = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0 || end == s.c_str() || *end != '\0') fail(line, "expected an integer, got '" + s + "'");
  return v;
}

double parse_real(const std::string& s, std::size_t line) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || end == s.c_str() || *end != '\0') fail(line, "expected a number, got '" + s + "'");
  return v;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

}  // namespace

WeightedGraph parse_edge_list(std::istream& in) {
  WeightedGraph g;
  long long m = -1;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    auto tok = data_tokens(line);
    if (tok.empty()) continue;
    if (m < 0) {
      if (tok.size() != 2) fail(line_no, "header must be 'n m'");
      long long n = parse_int(tok[0], line_no);
      m = parse_int(tok[1], line_no);
      if (n < 0 || m < 0) fail(line_no, "negative counts");
      g.n = static_cast<int>(n);
      continue;
    }
    if (tok.size() != 3) fail(line_no, "edge must be 'u v length'");
    if (static_cast<long long>(g.edges.size()) == m) fail(line_no, "more edges than declared");
    long long u = parse_int(tok[0], line_no), v = parse_int(tok[1], line_no);
    double len = parse_real(tok[2], line_no);
    if (u < 0 || v < 0 || u >= g.n || v >= g.n) fail(line_no, "vertex out of range");
    g.edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), len});
  }
  if (m < 0) fail(line_no, "missing header");
  if (static_cast<long long>(g.edges.size()) != m)
    fail(line_no, "expected " + std::to_string(m) + " edges, found " + std::to_string(g.edges.size()));
  return g;
}

WeightedGraph read_graph(const std::string& path) {
  auto in = open_in(path);
  try {
    return parse_edge_list(in);
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  out << g.n << ' ' << g.edges.size() << '\n';
  out << std::setprecision(17);
  for (const Edge& e : g.edges) out << e.u << ' ' << e.v << ' ' << e.length << '\n';
}

void write_graph(const std::string& path, const WeightedGraph& g) {
  auto out = open_out(path);
  write_edge_list(out, g);
}

VertexSet read_vertex_list(const std::string& path) {
  auto in = open_in(path);
  VertexSet out;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    for (const auto& t : data_tokens(line)) {
      long long v = parse_int(t, line_no);
      if (v < 0) fail(line_no, "negative vertex id");
      out.push_back(static_cast<Vertex>(v));
    }
  }
  normalize(out);
  return out;
}

void read_costs(const std::string& path, int n, std::vector<double>& open_cost, std::vector<double>& phi) {
  auto in = open_in(path);
  open_cost.assign(static_cast<std::size_t>(n), 0.0);
  phi.assign(static_cast<std::size_t>(n), 1.0);
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    auto tok = data_tokens(line);
    if (tok.empty()) continue;
    if (tok.size() != 2 && tok.size() != 3) fail(line_no, "cost line must be 'v open_cost [phi]'");
    long long v = parse_int(tok[0], line_no);
    if (v < 0 || v >= n) fail(line_no, "vertex out of range");
    open_cost[static_cast<std::size_t>(v)] = parse_real(tok[1], line_no);
    if (tok.size() == 3) phi[static_cast<std::size_t>(v)] = parse_real(tok[2], line_no);
  }
}

nlohmann::json read_json(const std::string& path) {
  auto in = open_in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const nlohmann::json& j) { write_text(path, j.dump(2) + "\n"); }

void write_text(const std::string& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
  if (!out) throw IoError("cannot write " + path);
}

void to_json(nlohmann::json& j, const WeightedGraph& g) {
  j = nlohmann::json{{"n", g.n}, {"edges", nlohmann::json::array()}};
  for (const Edge& e : g.edges) j["edges"].push_back({e.u, e.v, e.length});
}

void from_json(const nlohmann::json& j, WeightedGraph& g) {
  g.n = j.at("n").get<int>();
  g.edges.clear();
  for (const auto& e : j.at("edges")) g.edges.push_back({e.at(0).get<Vertex>(), e.at(1).get<Vertex>(), e.at(2).get<double>()});
}

void to_json(nlohmann::json& j, const HdConfig& c) {
  j = nlohmann::json{{"c", c.c}, {"eps", c.epsilon}, {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, HdConfig& c) {
  c.c = j.at("c").get<double>();
  c.epsilon = j.at("eps").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
}

void to_json(nlohmann::json& j, const CoverLadder& l) {
  j = nlohmann::json{{"config", l.config}, {"top_level", l.top_level}, {"sparsity", l.sparsity},
                     {"levels", nlohmann::json::array()}};
  for (const auto& lv : l.levels)
    j["levels"].push_back({{"index", lv.index}, {"scale", lv.scale}, {"hubs", lv.hubs}, {"sparsity", lv.sparsity}});
}

void from_json(const nlohmann::json& j, CoverLadder& l) {
  l.config = j.at("config").get<HdConfig>();
  l.top_level = j.at("top_level").get<int>();
  l.sparsity = j.at("sparsity").get<int>();
  l.levels.clear();
  for (const auto& lv : j.at("levels")) {
    CoverLevel c;
    c.index = lv.at("index").get<int>();
    c.scale = lv.at("scale").get<double>();
    c.hubs = lv.at("hubs").get<VertexSet>();
    c.sparsity = lv.at("sparsity").get<int>();
    l.levels.push_back(std::move(c));
  }
}

void to_json(nlohmann::json& j, const TownsDecomposition& td) {
  j = nlohmann::json{{"root", td.root}, {"top_level", td.top_level}, {"towns", nlohmann::json::array()},
                     {"levels", nlohmann::json::array()}};
  for (const Town& t : td.towns)
    j["towns"].push_back({{"id", t.id},
                          {"vertices", t.vertices},
                          {"levels", t.levels},
                          {"parent", t.parent},
                          {"children", t.children},
                          {"origin", t.origin}});
  for (const auto& lt : td.per_level) j["levels"].push_back({{"sprawl", lt.sprawl}, {"towns", lt.towns}});
}

void from_json(const nlohmann::json& j, TownsDecomposition& td) {
  td.root = j.at("root").get<int>();
  td.top_level = j.at("top_level").get<int>();
  td.towns.clear();
  for (const auto& t : j.at("towns")) {
    Town x;
    x.id = t.at("id").get<int>();
    x.vertices = t.at("vertices").get<VertexSet>();
    x.levels = t.at("levels").get<std::vector<int>>();
    x.parent = t.at("parent").get<int>();
    x.children = t.at("children").get<std::vector<int>>();
    x.origin = t.at("origin").get<int>();
    td.towns.push_back(std::move(x));
  }
  td.per_level.clear();
  for (const auto& lt : j.at("levels"))
    td.per_level.push_back({lt.at("sprawl").get<VertexSet>(), lt.at("towns").get<std::vector<VertexSet>>()});
}

void to_json(nlohmann::json& j, const TreeDecomposition& d) {
  j = nlohmann::json{{"root", d.root}, {"width", d.width()}, {"bags", nlohmann::json::array()}};
  for (const Bag& b : d.bags)
    j["bags"].push_back({{"vertices", b.vertices},
                         {"parent", b.parent},
                         {"children", b.children},
                         {"level", b.level},
                         {"town", b.town},
                         {"cluster", b.cluster}});
}

void from_json(const nlohmann::json& j, TreeDecomposition& d) {
  d.root = j.at("root").get<int>();
  d.bags.clear();
  for (const auto& b : j.at("bags")) {
    Bag x;
    x.vertices = b.at("vertices").get<VertexSet>();
    x.parent = b.at("parent").get<int>();
    x.children = b.at("children").get<std::vector<int>>();
    x.level = b.at("level").get<int>();
    x.town = b.at("town").get<int>();
    x.cluster = b.at("cluster").get<int>();
    d.bags.push_back(std::move(x));
  }
}

void to_json(nlohmann::json& j, const EmbeddedGraph& g) {
  j = nlohmann::json{{"vertices", g.vertices}, {"edges", nlohmann::json::array()}};
  for (const auto& [key, len] : g.edges) j["edges"].push_back({key.first, key.second, len});
}

void from_json(const nlohmann::json& j, EmbeddedGraph& g) {
  g = EmbeddedGraph{};
  for (Vertex v : j.at("vertices").get<VertexSet>()) g.add_vertex(v);
  for (const auto& e : j.at("edges")) g.add_edge(e.at(0).get<Vertex>(), e.at(1).get<Vertex>(), e.at(2).get<double>());
}

void to_json(nlohmann::json& j, const Embedding& e) {
  j = nlohmann::json{{"seed", e.seed},
                     {"width", e.width()},
                     {"graph", e.graph},
                     {"decomposition", e.decomposition},
                     {"connectors", nlohmann::json::array()}};
  for (const auto& c : e.connectors) j["connectors"].push_back({c.town_vertex, c.bag_vertex, c.length});
}

void from_json(const nlohmann::json& j, Embedding& e) {
  e.seed = j.at("seed").get<std::uint64_t>();
  e.graph = j.at("graph").get<EmbeddedGraph>();
  e.decomposition = j.at("decomposition").get<TreeDecomposition>();
  e.connectors.clear();
  for (const auto& c : j.at("connectors"))
    e.connectors.push_back({c.at(0).get<Vertex>(), c.at(1).get<Vertex>(), c.at(2).get<double>()});
}

void to_json(nlohmann::json& j, const SolveResult& r) {
  nlohmann::json witness = nlohmann::json::object();
  if (!r.tour.empty()) witness["tour"] = r.tour;
  if (!r.tree_edges.empty() || (r.tour.empty() && r.facilities.empty())) {
    witness["tree_edges"] = nlohmann::json::array();
    for (const auto& [a, b] : r.tree_edges) witness["tree_edges"].push_back({a, b});
  }
  if (!r.facilities.empty()) {
    witness["facilities"] = r.facilities;
    witness["assignment"] = r.assignment;
  }
  j = nlohmann::json{{"cost", r.cost},
                     {"witness", witness},
                     {"method", r.method},
                     {"feasible", r.feasible},
                     {"width", r.width},
                     {"fell_back", r.fell_back},
                     {"lift_overhead", r.lift_overhead},
                     {"lift_bound", r.lift_bound}};
  if (r.ratio_to_oracle) j["ratio_to_oracle"] = *r.ratio_to_oracle;
}

void from_json(const nlohmann::json& j, SolveResult& r) {
  r = SolveResult{};
  r.cost = j.at("cost").get<double>();
  r.method = j.at("method").get<std::string>();
  r.feasible = j.at("feasible").get<bool>();
  r.width = j.value("width", -1);
  r.fell_back = j.value("fell_back", false);
  r.lift_overhead = j.value("lift_overhead", 0.0);
  r.lift_bound = j.value("lift_bound", 0.0);
  if (j.contains("ratio_to_oracle")) r.ratio_to_oracle = j.at("ratio_to_oracle").get<double>();
  const auto& w = j.at("witness");
  if (w.contains("tour")) r.tour = w.at("tour").get<std::vector<Vertex>>();
  if (w.contains("tree_edges"))
    for (const auto& e : w.at("tree_edges")) r.tree_edges.push_back({e.at(0).get<Vertex>(), e.at(1).get<Vertex>()});
  if (w.contains("facilities")) {
    r.facilities = w.at("facilities").get<VertexSet>();
    r.assignment = w.at("assignment").get<std::vector<Vertex>>();
  }
}

void to_json(nlohmann::json& j, const HdResult& r) {
  j = nlohmann::json{{"k", r.k},
                     {"worst_scale", r.worst_scale},
                     {"worst_center", r.worst_center},
                     {"scales_checked", r.scales_checked}};
}

void from_json(const nlohmann::json& j, HdResult& r) {
  r.k = j.at("k").get<int>();
  r.worst_scale = j.at("worst_scale").get<double>();
  r.worst_center = j.at("worst_center").get<Vertex>();
  r.scales_checked = j.at("scales_checked").get<std::size_t>();
}

void to_json(nlohmann::json& j, const ValidationReport& r) {
  j = nlohmann::json{{"ok", r.ok()}, {"violations", r.violations}, {"notes", r.notes}};
}

}  // namespace hubway

#include "hubway/solvers.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>

namespace hubway {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::pair<Vertex, Vertex> ordered(Vertex a, Vertex b) { return {std::min(a, b), std::max(a, b)}; }

VertexSet as_set(std::vector<Vertex> v) {
  normalize(v);
  return v;
}

}  // namespace

const char* to_string(ProblemKind k) {
  switch (k) {
    case ProblemKind::tsp:
      return "tsp";
    case ProblemKind::steiner:
      return "steiner";
    case ProblemKind::facility:
      return "facility";
  }
  return "?";
}

ProblemKind parse_problem_kind(const std::string& s) {
  if (s == "tsp") return ProblemKind::tsp;
  if (s == "steiner") return ProblemKind::steiner;
  if (s == "facility") return ProblemKind::facility;
  throw Error("unknown problem: " + s);
}

VertexSet ProblemInstance::vertices() const {
  if (!domain.empty()) return domain;
  VertexSet all(static_cast<std::size_t>(metric.n()));
  std::iota(all.begin(), all.end(), 0);
  return all;
}

void ProblemInstance::validate() const {
  const int n = metric.n();
  if (n < 1) throw Error("problem needs a nonempty graph");
  for (Vertex v : domain)
    if (v < 0 || v >= n) throw Error("domain vertex out of range");
  const VertexSet dom = vertices();
  if (kind == ProblemKind::steiner) {
    for (Vertex t : terminals)
      if (!contains(dom, t)) throw Error("terminal outside the graph");
  }
  if (kind == ProblemKind::facility) {
    if (open_cost.size() != static_cast<std::size_t>(n)) throw Error("open costs must cover every vertex");
    for (double f : open_cost)
      if (!(f >= 0.0) || !std::isfinite(f)) throw Error("open costs must be finite and nonnegative");
    if (!phi.empty()) {
      if (phi.size() != static_cast<std::size_t>(n)) throw Error("phi must cover every vertex");
      for (double w : phi)
        if (!(w >= 0.0) || !std::isfinite(w)) throw Error("phi must be finite and nonnegative");
    }
  }
}

int SolverOptions::cap_for(ProblemKind k) const {
  switch (k) {
    case ProblemKind::tsp:
      return tsp_width_cap;
    case ProblemKind::steiner:
      return steiner_width_cap;
    case ProblemKind::facility:
      return facility_width_cap;
  }
  return 0;
}

double witness_cost(const ProblemInstance& p, const SolveResult& r) {
  const MetricInstance& m = p.metric;
  double cost = 0.0;
  switch (p.kind) {
    case ProblemKind::tsp:
      for (std::size_t i = 0; i + 1 < r.tour.size(); ++i) cost += m.dist(r.tour[i], r.tour[i + 1]);
      break;
    case ProblemKind::steiner:
      for (const auto& [a, b] : r.tree_edges) cost += m.dist(a, b);
      break;
    case ProblemKind::facility:
      for (Vertex f : r.facilities) cost += p.open_cost[static_cast<std::size_t>(f)];
      for (Vertex v : p.vertices()) {
        double best = kInf;
        for (Vertex f : r.facilities) best = std::min(best, m.dist(v, f));
        cost += p.weight(v) * best;
      }
      break;
  }
  return cost;
}

bool witness_feasible(const ProblemInstance& p, const SolveResult& r) {
  const VertexSet dom = p.vertices();
  switch (p.kind) {
    case ProblemKind::tsp: {
      if (r.tour.empty() || r.tour.front() != r.tour.back()) return false;
      VertexSet seen = as_set(r.tour);
      return is_subset(dom, seen);
    }
    case ProblemKind::steiner: {
      if (p.terminals.size() <= 1) return true;
      std::vector<Vertex> touched;
      for (const auto& [a, b] : r.tree_edges) {
        touched.push_back(a);
        touched.push_back(b);
      }
      VertexSet vs = as_set(touched);
      if (!is_subset(p.terminals, vs)) return false;
      // connected acyclic over the touched vertices
      if (r.tree_edges.size() + 1 != vs.size()) return false;
      std::vector<int> parent(vs.size());
      std::iota(parent.begin(), parent.end(), 0);
      std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
      auto idx = [&](Vertex v) {
        return static_cast<int>(std::lower_bound(vs.begin(), vs.end(), v) - vs.begin());
      };
      for (const auto& [a, b] : r.tree_edges) {
        int x = find(idx(a)), y = find(idx(b));
        if (x == y) return false;
        parent[x] = y;
      }
      return true;
    }
    case ProblemKind::facility:
      return !r.facilities.empty() && is_subset(r.facilities, dom);
  }
  return false;
}

namespace {

// ---------------------------------------------------------------------------
// Nice tree decompositions over local vertex ids.

enum class NiceKind { leaf, introduce, forget, edge, join };

struct NiceNode {
  NiceKind kind = NiceKind::leaf;
  std::vector<int> bag;  // sorted local ids
  int v = -1;            // introduced / forgotten vertex, edge endpoint
  int u = -1;            // other edge endpoint
  double length = 0.0;
  int child = -1;
  int child2 = -1;
};

class NiceBuilder {
 public:
  NiceBuilder(const std::vector<std::vector<int>>& bags, const std::vector<std::vector<int>>& children,
              std::map<std::pair<int, int>, double> edges, int k)
      : bags_(bags), children_(children), pending_(std::move(edges)), adj_(static_cast<std::size_t>(k)) {
    for (const auto& [key, len] : pending_) {
      adj_[key.first].push_back(key.second);
      adj_[key.second].push_back(key.first);
    }
  }

  std::vector<NiceNode> build(int root) {
    int x = build_bag(root);
    x = transition(x, {});
    if (!pending_.empty()) throw Error("decomposition misses an edge");
    return std::move(nodes_);
  }

 private:
  int add(NiceNode n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  int introduce(int x, int v) {
    NiceNode n;
    n.kind = NiceKind::introduce;
    n.bag = nodes_[x].bag;
    n.bag.insert(std::lower_bound(n.bag.begin(), n.bag.end(), v), v);
    n.v = v;
    n.child = x;
    return add(std::move(n));
  }

  int forget(int x, int v) {
    for (int w : adj_[v]) {
      auto key = std::make_pair(std::min(v, w), std::max(v, w));
      auto it = pending_.find(key);
      if (it == pending_.end()) continue;
      const auto& bag = nodes_[x].bag;
      if (!std::binary_search(bag.begin(), bag.end(), w)) continue;
      NiceNode e;
      e.kind = NiceKind::edge;
      e.bag = bag;
      e.u = key.first;
      e.v = key.second;
      e.length = it->second;
      e.child = x;
      pending_.erase(it);
      x = add(std::move(e));
    }
    NiceNode n;
    n.kind = NiceKind::forget;
    n.bag = nodes_[x].bag;
    n.bag.erase(std::lower_bound(n.bag.begin(), n.bag.end(), v));
    n.v = v;
    n.child = x;
    return add(std::move(n));
  }

  int transition(int x, const std::vector<int>& target) {
    const std::vector<int> have = nodes_[x].bag;
    for (int w : have)
      if (!std::binary_search(target.begin(), target.end(), w)) x = forget(x, w);
    for (int w : target)
      if (!std::binary_search(have.begin(), have.end(), w)) x = introduce(x, w);
    return x;
  }

  int build_bag(int b) {
    const auto& target = bags_[b];
    int cur = -1;
    for (int c : children_[b]) {
      int x = transition(build_bag(c), target);
      if (cur < 0) {
        cur = x;
      } else {
        NiceNode j;
        j.kind = NiceKind::join;
        j.bag = target;
        j.child = cur;
        j.child2 = x;
        cur = add(std::move(j));
      }
    }
    if (cur < 0) cur = transition(add(NiceNode{}), target);
    return cur;
  }

  const std::vector<std::vector<int>>& bags_;
  const std::vector<std::vector<int>>& children_;
  std::map<std::pair<int, int>, double> pending_;
  std::vector<std::vector<int>> adj_;
  std::vector<NiceNode> nodes_;
};

// ---------------------------------------------------------------------------
// Generic dynamic program over nice decompositions. States are byte strings:
// a global header followed by one fixed-size record per bag vertex.

struct Step {
  std::string state;
  double cost = 0.0;
  int choice = 0;
};

class DpPolicy {
 public:
  virtual ~DpPolicy() = default;
  virtual std::size_t header() const = 0;
  virtual std::size_t record() const = 0;
  virtual std::string leaf() const = 0;
  /// `pos` is the index of v in the new bag.
  virtual void introduce(int v, std::size_t pos, const std::string& s, std::vector<Step>& out) const = 0;
  /// `pos` is the index of v in the child bag of size `bag_size`.
  virtual void forget(int v, std::size_t pos, std::size_t bag_size, const std::string& s,
                      std::vector<Step>& out) const = 0;
  virtual void edge(std::size_t pu, std::size_t pv, double length, const std::string& s,
                    std::vector<Step>& out) const = 0;
  virtual std::string join_key(const std::string& s) const = 0;
  virtual bool join(const std::string& a, const std::string& b, std::string& out) const = 0;
  virtual bool accept(const std::string& s) const = 0;

 protected:
  std::size_t at(std::size_t pos) const { return header() + pos * record(); }
};

/// Relabels block ids (record byte 0) by first appearance.
void canonical_blocks(std::string& s, std::size_t header, std::size_t record) {
  unsigned char map[256];
  std::fill(std::begin(map), std::end(map), 0xff);
  unsigned char next = 0;
  for (std::size_t i = header; i < s.size(); i += record) {
    auto b = static_cast<unsigned char>(s[i]);
    if (map[b] == 0xff) map[b] = next++;
    s[i] = static_cast<char>(map[b]);
  }
}

void merge_block(std::string& s, std::size_t header, std::size_t record, char from, char to) {
  for (std::size_t i = header; i < s.size(); i += record)
    if (s[i] == from) s[i] = to;
}

bool block_shared(const std::string& s, std::size_t header, std::size_t record, std::size_t skip) {
  const char b = s[header + skip * record];
  for (std::size_t i = header, k = 0; i < s.size(); i += record, ++k)
    if (k != skip && s[i] == b) return true;
  return false;
}

/// Union of block partitions of two states with the same bag.
void union_blocks(const std::string& a, const std::string& b, std::string& out, std::size_t header,
                  std::size_t record) {
  const std::size_t k = (a.size() - header) / record;
  // blocks of a are 0..k-1 after canonicalization; link them through b
  unsigned char parent[256];
  for (std::size_t i = 0; i < k; ++i) parent[i] = static_cast<unsigned char>(i);
  auto find = [&](unsigned char x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  unsigned char first_b[256];
  std::fill(first_b, first_b + k, 0xff);
  for (std::size_t i = 0; i < k; ++i) {
    auto la = static_cast<unsigned char>(a[header + i * record]);
    auto lb = static_cast<unsigned char>(b[header + i * record]);
    if (first_b[lb] == 0xff) {
      first_b[lb] = la;
    } else {
      unsigned char x = find(la), y = find(first_b[lb]);
      if (x != y) parent[std::max(x, y)] = std::min(x, y);
    }
  }
  for (std::size_t i = 0; i < k; ++i)
    out[header + i * record] = static_cast<char>(find(static_cast<unsigned char>(a[header + i * record])));
  canonical_blocks(out, header, record);
}

// Tour: header [sealed|any<<1], record [block, touched|parity<<1].
class TspPolicy final : public DpPolicy {
 public:
  std::size_t header() const override { return 1; }
  std::size_t record() const override { return 2; }
  std::string leaf() const override { return std::string(1, '\0'); }

  void introduce(int, std::size_t pos, const std::string& s, std::vector<Step>& out) const override {
    if (s[0] & 1) return;
    std::string t = s;
    t[0] = static_cast<char>(t[0] | 2);
    t.insert(at(pos), std::string{static_cast<char>(0xfe), 0});
    canonical_blocks(t, 1, 2);
    out.push_back({std::move(t), 0.0, 0});
  }

  void forget(int, std::size_t pos, std::size_t bag_size, const std::string& s,
              std::vector<Step>& out) const override {
    const char flags = s[at(pos) + 1];
    if (!(flags & 1) || (flags & 2)) return;
    std::string t = s;
    if (!block_shared(s, 1, 2, pos)) {
      if (bag_size > 1) return;
      t[0] = static_cast<char>(t[0] | 1);
    }
    t.erase(at(pos), 2);
    canonical_blocks(t, 1, 2);
    out.push_back({std::move(t), 0.0, 0});
  }

  void edge(std::size_t pu, std::size_t pv, double length, const std::string& s,
            std::vector<Step>& out) const override {
    out.push_back({s, 0.0, 0});
    for (int mult = 1; mult <= 2; ++mult) {
      std::string t = s;
      for (std::size_t p : {pu, pv}) {
        char& f = t[at(p) + 1];
        f = static_cast<char>((f | 1) ^ (mult == 1 ? 2 : 0));
      }
      merge_block(t, 1, 2, t[at(pv)], t[at(pu)]);
      canonical_blocks(t, 1, 2);
      out.push_back({std::move(t), mult * length, mult});
    }
  }

  std::string join_key(const std::string&) const override { return {}; }

  bool join(const std::string& a, const std::string& b, std::string& out) const override {
    const bool sa = a[0] & 1, sb = b[0] & 1, na = a[0] & 2, nb = b[0] & 2;
    if ((sa && nb) || (sb && na)) return false;
    out = a;
    out[0] = static_cast<char>(a[0] | b[0]);
    for (std::size_t i = 1; i < a.size(); i += 2) out[i + 1] = static_cast<char>((a[i + 1] | b[i + 1]) & 1) |
                                                               static_cast<char>((a[i + 1] ^ b[i + 1]) & 2);
    union_blocks(a, b, out, 1, 2);
    return true;
  }

  bool accept(const std::string& s) const override { return s[0] & 1; }
};

// Steiner tree: header [sealed|any<<1], record [block, selected].
class SteinerPolicy final : public DpPolicy {
 public:
  explicit SteinerPolicy(std::vector<char> terminal) : terminal_(std::move(terminal)) {}

  std::size_t header() const override { return 1; }
  std::size_t record() const override { return 2; }
  std::string leaf() const override { return std::string(1, '\0'); }

  void introduce(int v, std::size_t pos, const std::string& s, std::vector<Step>& out) const override {
    if (!terminal_[v]) {
      std::string t = s;
      t.insert(at(pos), std::string{static_cast<char>(0xfe), 0});
      canonical_blocks(t, 1, 2);
      out.push_back({std::move(t), 0.0, 0});
    }
    if (s[0] & 1) return;
    std::string t = s;
    t[0] = static_cast<char>(t[0] | 2);
    t.insert(at(pos), std::string{static_cast<char>(0xfe), 1});
    canonical_blocks(t, 1, 2);
    out.push_back({std::move(t), 0.0, 1});
  }

  void forget(int, std::size_t pos, std::size_t, const std::string& s, std::vector<Step>& out) const override {
    std::string t = s;
    if (s[at(pos) + 1] && !block_shared(s, 1, 2, pos)) {
      for (std::size_t i = 2, k = 0; i < s.size(); i += 2, ++k)
        if (k != pos && s[i]) return;
      t[0] = static_cast<char>(t[0] | 1);
    }
    t.erase(at(pos), 2);
    canonical_blocks(t, 1, 2);
    out.push_back({std::move(t), 0.0, 0});
  }

  void edge(std::size_t pu, std::size_t pv, double length, const std::string& s,
            std::vector<Step>& out) const override {
    out.push_back({s, 0.0, 0});
    if (!s[at(pu) + 1] || !s[at(pv) + 1] || s[at(pu)] == s[at(pv)]) return;
    std::string t = s;
    merge_block(t, 1, 2, t[at(pv)], t[at(pu)]);
    canonical_blocks(t, 1, 2);
    out.push_back({std::move(t), length, 1});
  }

  std::string join_key(const std::string& s) const override {
    std::string k;
    for (std::size_t i = 2; i < s.size(); i += 2) k.push_back(s[i]);
    return k;
  }

  bool join(const std::string& a, const std::string& b, std::string& out) const override {
    const bool sa = a[0] & 1, sb = b[0] & 1, na = a[0] & 2, nb = b[0] & 2;
    if ((sa && nb) || (sb && na)) return false;
    out = a;
    out[0] = static_cast<char>(a[0] | b[0]);
    union_blocks(a, b, out, 1, 2);
    return true;
  }

  bool accept(const std::string& s) const override { return (s[0] & 1) || !(s[0] & 2); }

 private:
  std::vector<char> terminal_;
};

// Facility location: record [distance index (0 = open), supported].
class FacilityPolicy final : public DpPolicy {
 public:
  FacilityPolicy(std::vector<std::vector<double>> cand, std::vector<double> open, std::vector<double> weight)
      : cand_(std::move(cand)), open_(std::move(open)), weight_(std::move(weight)) {}

  std::size_t header() const override { return 0; }
  std::size_t record() const override { return 2; }
  std::string leaf() const override { return {}; }

  void introduce(int v, std::size_t pos, const std::string& s, std::vector<Step>& out) const override {
    for (std::size_t idx = 0; idx <= cand_[v].size(); ++idx) {
      std::string t = s;
      t.insert(at(pos), std::string{static_cast<char>(idx), static_cast<char>(idx == 0)});
      out.push_back({std::move(t), 0.0, static_cast<int>(idx)});
    }
  }

  void forget(int v, std::size_t pos, std::size_t, const std::string& s, std::vector<Step>& out) const override {
    if (!s[at(pos) + 1]) return;
    const auto idx = static_cast<unsigned char>(s[at(pos)]);
    const double cost = idx == 0 ? open_[v] : weight_[v] * cand_[v][idx - 1];
    std::string t = s;
    t.erase(at(pos), 2);
    out.push_back({std::move(t), cost, 0});
  }

  void edge(std::size_t pu, std::size_t pv, double length, const std::string& s,
            std::vector<Step>& out) const override {
    std::string t = s;
    const double du = claimed(edge_u_, s[at(pu)]);
    const double dv = claimed(edge_v_, s[at(pv)]);
    if (s[at(pu)] != 0 && geq(du, length + dv)) t[at(pu) + 1] = 1;
    if (s[at(pv)] != 0 && geq(dv, length + du)) t[at(pv) + 1] = 1;
    out.push_back({std::move(t), 0.0, 0});
  }

  std::string join_key(const std::string& s) const override {
    std::string k;
    for (std::size_t i = 0; i < s.size(); i += 2) k.push_back(s[i]);
    return k;
  }

  bool join(const std::string& a, const std::string& b, std::string& out) const override {
    out = a;
    for (std::size_t i = 1; i < a.size(); i += 2) out[i] = static_cast<char>(a[i] | b[i]);
    return true;
  }

  bool accept(const std::string&) const override { return true; }

  // The engine sets the endpoints before calling edge().
  mutable int edge_u_ = -1;
  mutable int edge_v_ = -1;

 private:
  double claimed(int v, char idx) const {
    const auto i = static_cast<unsigned char>(idx);
    return i == 0 ? 0.0 : cand_[v][i - 1];
  }

  std::vector<std::vector<double>> cand_;
  std::vector<double> open_;
  std::vector<double> weight_;
};

struct Entry {
  double cost = kInf;
  int choice = 0;
  const std::string* from = nullptr;  // key in the child table
  const std::string* from2 = nullptr;
};

using Table = std::unordered_map<std::string, Entry>;

struct DpRun {
  std::vector<NiceNode> nodes;
  std::vector<Table> tables;
  std::string final_state;
  double cost = kInf;
};

void relax(Table& t, std::string&& state, double cost, int choice, const std::string* from,
           const std::string* from2, std::size_t budget) {
  auto [it, fresh] = t.try_emplace(std::move(state));
  if (fresh || cost < it->second.cost) {
    it->second.cost = cost;
    it->second.choice = choice;
    it->second.from = from;
    it->second.from2 = from2;
  }
  if (t.size() > budget) throw Error("state budget exceeded");
}

DpRun run_dp(const DpPolicy& policy, std::vector<NiceNode> nodes, std::size_t budget) {
  DpRun run;
  run.nodes = std::move(nodes);
  run.tables.resize(run.nodes.size());
  auto* facility = dynamic_cast<const FacilityPolicy*>(&policy);
  std::vector<Step> steps;
  std::size_t used = 0;  // states held by finished tables
  for (std::size_t x = 0; x < run.nodes.size(); ++x) {
    const NiceNode& n = run.nodes[x];
    Table& out = run.tables[x];
    const std::size_t room = budget - used;
    switch (n.kind) {
      case NiceKind::leaf:
        out[policy.leaf()] = Entry{0.0, 0, nullptr, nullptr};
        break;
      case NiceKind::introduce: {
        const std::size_t pos =
            static_cast<std::size_t>(std::lower_bound(n.bag.begin(), n.bag.end(), n.v) - n.bag.begin());
        for (const auto& [s, e] : run.tables[n.child]) {
          steps.clear();
          policy.introduce(n.v, pos, s, steps);
          for (auto& st : steps) relax(out, std::move(st.state), e.cost + st.cost, st.choice, &s, nullptr, room);
        }
        break;
      }
      case NiceKind::forget: {
        const auto& cb = run.nodes[n.child].bag;
        const std::size_t pos = static_cast<std::size_t>(std::lower_bound(cb.begin(), cb.end(), n.v) - cb.begin());
        for (const auto& [s, e] : run.tables[n.child]) {
          steps.clear();
          policy.forget(n.v, pos, cb.size(), s, steps);
          for (auto& st : steps) relax(out, std::move(st.state), e.cost + st.cost, st.choice, &s, nullptr, room);
        }
        break;
      }
      case NiceKind::edge: {
        const std::size_t pu =
            static_cast<std::size_t>(std::lower_bound(n.bag.begin(), n.bag.end(), n.u) - n.bag.begin());
        const std::size_t pv =
            static_cast<std::size_t>(std::lower_bound(n.bag.begin(), n.bag.end(), n.v) - n.bag.begin());
        if (facility) {
          facility->edge_u_ = n.u;
          facility->edge_v_ = n.v;
        }
        for (const auto& [s, e] : run.tables[n.child]) {
          steps.clear();
          policy.edge(pu, pv, n.length, s, steps);
          for (auto& st : steps) relax(out, std::move(st.state), e.cost + st.cost, st.choice, &s, nullptr, room);
        }
        break;
      }
      case NiceKind::join: {
        std::unordered_map<std::string, std::vector<const std::pair<const std::string, Entry>*>> groups;
        for (const auto& kv : run.tables[n.child2]) groups[policy.join_key(kv.first)].push_back(&kv);
        std::string merged;
        for (const auto& [s, e] : run.tables[n.child]) {
          auto g = groups.find(policy.join_key(s));
          if (g == groups.end()) continue;
          for (const auto* kv : g->second) {
            if (!policy.join(s, kv->first, merged)) continue;
            relax(out, std::string(merged), e.cost + kv->second.cost, 0, &s, &kv->first, room);
          }
        }
        break;
      }
    }
    used += out.size();
    if (used > budget) throw Error("state budget exceeded");
  }
  return run;
}

struct Choice {
  int node = 0;
  int choice = 0;
};

std::vector<Choice> reconstruct(const DpRun& run, int root, const std::string& state) {
  std::vector<Choice> out;
  std::vector<std::pair<int, std::string>> stack{{root, state}};
  while (!stack.empty()) {
    auto [x, s] = stack.back();
    stack.pop_back();
    const NiceNode& n = run.nodes[x];
    const Entry& e = run.tables[x].at(s);
    out.push_back({x, e.choice});
    if (n.child >= 0) stack.push_back({n.child, *e.from});
    if (n.child2 >= 0) stack.push_back({n.child2, *e.from2});
  }
  return out;
}

std::vector<Vertex> euler_circuit(int k, const std::vector<std::pair<int, int>>& edges, int start) {
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < edges.size(); ++i) {
    adj[edges[i].first].push_back({edges[i].second, static_cast<int>(i)});
    adj[edges[i].second].push_back({edges[i].first, static_cast<int>(i)});
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  std::vector<char> used(edges.size(), 0);
  std::vector<std::size_t> ptr(static_cast<std::size_t>(k), 0);
  std::vector<int> stack{start}, circuit;
  while (!stack.empty()) {
    int v = stack.back();
    while (ptr[v] < adj[v].size() && used[adj[v][ptr[v]].second]) ++ptr[v];
    if (ptr[v] == adj[v].size()) {
      circuit.push_back(v);
      stack.pop_back();
    } else {
      auto [w, id] = adj[v][ptr[v]];
      used[id] = 1;
      stack.push_back(w);
    }
  }
  std::reverse(circuit.begin(), circuit.end());
  return std::vector<Vertex>(circuit.begin(), circuit.end());
}

double mst_weight(const MetricInstance& m, const VertexSet& pts, std::vector<std::pair<Vertex, Vertex>>* edges) {
  const std::size_t k = pts.size();
  if (k <= 1) return 0.0;
  std::vector<double> best(k, kInf);
  std::vector<int> from(k, -1);
  std::vector<char> in(k, 0);
  best[0] = 0.0;
  double total = 0.0;
  for (std::size_t it = 0; it < k; ++it) {
    std::size_t u = k;
    for (std::size_t v = 0; v < k; ++v)
      if (!in[v] && (u == k || best[v] < best[u])) u = v;
    in[u] = 1;
    total += best[u];
    if (from[u] >= 0 && edges) edges->push_back({pts[static_cast<std::size_t>(from[u])], pts[u]});
    for (std::size_t v = 0; v < k; ++v)
      if (!in[v] && m.dist(pts[u], pts[v]) < best[v]) {
        best[v] = m.dist(pts[u], pts[v]);
        from[v] = static_cast<int>(u);
      }
  }
  return total;
}

/// Expands metric edges into graph edges, keeps a minimum spanning forest
/// of their union and prunes non-terminal leaves.
std::vector<std::pair<Vertex, Vertex>> steiner_from_metric_edges(const MetricInstance& m,
                                                                 const std::vector<std::pair<Vertex, Vertex>>& metric_edges,
                                                                 const VertexSet& terminals) {
  std::set<std::pair<Vertex, Vertex>> graph_edges;
  for (const auto& [a, b] : metric_edges) {
    auto path = canonical_shortest_path(m, a, b);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) graph_edges.insert(ordered(path[i], path[i + 1]));
  }
  std::vector<std::pair<Vertex, Vertex>> sorted(graph_edges.begin(), graph_edges.end());
  std::stable_sort(sorted.begin(), sorted.end(), [&](const auto& x, const auto& y) {
    return m.dist(x.first, x.second) < m.dist(y.first, y.second);
  });
  std::vector<int> parent(static_cast<std::size_t>(m.n()));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  std::vector<std::pair<Vertex, Vertex>> forest;
  for (const auto& e : sorted) {
    int x = find(e.first), y = find(e.second);
    if (x == y) continue;
    parent[x] = y;
    forest.push_back(e);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<Vertex, int> degree;
    for (const auto& [a, b] : forest) {
      degree[a]++;
      degree[b]++;
    }
    std::vector<std::pair<Vertex, Vertex>> kept;
    for (const auto& e : forest) {
      bool leaf_a = degree[e.first] == 1 && !contains(terminals, e.first);
      bool leaf_b = degree[e.second] == 1 && !contains(terminals, e.second);
      if (leaf_a || leaf_b) {
        changed = true;
      } else {
        kept.push_back(e);
      }
    }
    forest.swap(kept);
  }
  std::sort(forest.begin(), forest.end());
  return forest;
}

std::vector<Vertex> nearest_assignment(const ProblemInstance& p, const VertexSet& facilities) {
  std::vector<Vertex> assign(static_cast<std::size_t>(p.metric.n()), -1);
  if (facilities.empty()) return assign;
  for (Vertex v : p.vertices()) {
    Vertex best = facilities.front();
    for (Vertex f : facilities)
      if (lt(p.metric.dist(v, f), p.metric.dist(v, best))) best = f;
    assign[static_cast<std::size_t>(v)] = best;
  }
  return assign;
}

void finish(const ProblemInstance& p, SolveResult& r) {
  if (p.kind == ProblemKind::facility) r.assignment = nearest_assignment(p, r.facilities);
  r.cost = witness_cost(p, r);
  r.feasible = witness_feasible(p, r);
}

}  // namespace

TreeDecomposition heuristic_tree_decomposition(const EmbeddedGraph& g) {
  const std::size_t k = g.vertices.size();
  TreeDecomposition d;
  if (k == 0) {
    d.bags.push_back({});
    d.root = 0;
    return d;
  }
  std::vector<std::set<int>> adj(k);
  for (const auto& [key, len] : g.edges) {
    (void)len;
    int a = static_cast<int>(g.index_of(key.first)), b = static_cast<int>(g.index_of(key.second));
    adj[a].insert(b);
    adj[b].insert(a);
  }
  std::vector<char> gone(k, 0);
  std::vector<int> order, position(k, 0);
  std::vector<std::vector<int>> nbrs(k);
  for (std::size_t step = 0; step < k; ++step) {
    int best = -1;
    for (std::size_t v = 0; v < k; ++v)
      if (!gone[v] && (best < 0 || adj[v].size() < adj[best].size())) best = static_cast<int>(v);
    nbrs[best].assign(adj[best].begin(), adj[best].end());
    for (int a : nbrs[best]) {
      adj[a].erase(best);
      for (int b : nbrs[best])
        if (a != b) adj[a].insert(b);
    }
    gone[best] = 1;
    position[best] = static_cast<int>(step);
    order.push_back(best);
  }
  d.bags.resize(k);
  for (std::size_t step = 0; step < k; ++step) {
    int v = order[step];
    Bag& b = d.bags[step];
    b.vertices.push_back(g.vertices[v]);
    for (int w : nbrs[v]) b.vertices.push_back(g.vertices[w]);
    b.vertices = as_set(b.vertices);
    int parent = -1;
    for (int w : nbrs[v])
      if (parent < 0 || position[w] < parent) parent = position[w];
    if (parent < 0 && step + 1 < k) parent = static_cast<int>(k) - 1;
    b.parent = parent;
    if (parent >= 0) d.bags[parent].children.push_back(static_cast<int>(step));
  }
  d.root = static_cast<int>(k) - 1;
  return d;
}

SolveResult solve_on_tree_decomposition(const ProblemInstance& p, const EmbeddedGraph& h,
                                        const TreeDecomposition& d, const SolverOptions& opt) {
  p.validate();
  SolveResult r;
  r.method = "dp";
  r.width = d.width();
  if (r.width > opt.cap_for(p.kind)) throw Error("width cap exceeded");
  const VertexSet dom = p.vertices();
  if (!is_subset(dom, h.vertices)) throw Error("graph misses problem vertices");
  const int k = static_cast<int>(h.vertices.size());

  if (p.kind == ProblemKind::tsp && dom.size() <= 1) {
    r.tour = {dom.front(), dom.front()};
    finish(p, r);
    return r;
  }
  if (p.kind == ProblemKind::steiner && p.terminals.size() <= 1) {
    finish(p, r);
    return r;
  }

  std::vector<std::vector<int>> bags(d.bags.size()), children(d.bags.size());
  for (std::size_t b = 0; b < d.bags.size(); ++b) {
    for (Vertex v : d.bags[b].vertices) bags[b].push_back(static_cast<int>(h.index_of(v)));
    std::sort(bags[b].begin(), bags[b].end());
    children[b] = d.bags[b].children;
  }
  std::map<std::pair<int, int>, double> edges;
  for (const auto& [key, len] : h.edges)
    edges[{static_cast<int>(h.index_of(key.first)), static_cast<int>(h.index_of(key.second))}] = len;
  std::vector<NiceNode> nodes = NiceBuilder(bags, children, edges, k).build(d.root);

  std::unique_ptr<DpPolicy> policy;
  std::vector<std::vector<double>> cand;
  if (p.kind == ProblemKind::tsp) {
    if (dom.size() != h.vertices.size()) throw Error("tour graph must equal the domain");
    policy = std::make_unique<TspPolicy>();
  } else if (p.kind == ProblemKind::steiner) {
    std::vector<char> term(static_cast<std::size_t>(k), 0);
    for (Vertex t : p.terminals) term[h.index_of(t)] = 1;
    policy = std::make_unique<SteinerPolicy>(std::move(term));
  } else {
    if (dom.size() != h.vertices.size()) throw Error("facility graph must equal the domain");
    const auto dh = h.all_pairs();
    std::vector<double> open(static_cast<std::size_t>(k)), weight(static_cast<std::size_t>(k));
    cand.resize(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a) {
      Vertex v = h.vertices[a];
      open[a] = p.open_cost[static_cast<std::size_t>(v)];
      weight[a] = p.weight(v);
      for (int b = 0; b < k; ++b) {
        double dist = dh[static_cast<std::size_t>(a) * k + b];
        if (a == b || !std::isfinite(dist)) continue;
        if (leq(weight[a] * dist, open[a])) cand[a].push_back(dist);
      }
      std::sort(cand[a].begin(), cand[a].end());
      cand[a].erase(std::unique(cand[a].begin(), cand[a].end()), cand[a].end());
      if (cand[a].size() > 254) throw Error("state budget exceeded");
    }
    policy = std::make_unique<FacilityPolicy>(cand, open, weight);
  }

  DpRun run = run_dp(*policy, std::move(nodes), opt.state_budget);
  const int root = static_cast<int>(run.nodes.size()) - 1;
  const Table& final = run.tables[root];
  const std::string* best = nullptr;
  for (const auto& [s, e] : final)
    if (policy->accept(s) && (!best || e.cost < final.at(*best).cost)) best = &s;
  if (!best) throw Error("no feasible solution on the decomposition");

  const auto choices = reconstruct(run, root, *best);
  if (p.kind == ProblemKind::tsp) {
    std::vector<std::pair<int, int>> multi;
    for (const auto& c : choices) {
      const NiceNode& n = run.nodes[c.node];
      if (n.kind != NiceKind::edge) continue;
      for (int t = 0; t < c.choice; ++t) multi.push_back({n.u, n.v});
    }
    for (Vertex v : euler_circuit(k, multi, 0)) r.tour.push_back(h.vertices[v]);
  } else if (p.kind == ProblemKind::steiner) {
    for (const auto& c : choices) {
      const NiceNode& n = run.nodes[c.node];
      if (n.kind == NiceKind::edge && c.choice == 1) r.tree_edges.push_back({h.vertices[n.u], h.vertices[n.v]});
    }
    std::sort(r.tree_edges.begin(), r.tree_edges.end());
  } else {
    for (const auto& c : choices) {
      const NiceNode& n = run.nodes[c.node];
      if (n.kind == NiceKind::introduce && c.choice == 0) r.facilities.push_back(h.vertices[n.v]);
    }
    r.facilities = as_set(r.facilities);
  }
  finish(p, r);
  return r;
}

SolveResult solve_dp(const ProblemInstance& p, const SolverOptions& opt) {
  p.validate();
  const VertexSet dom = p.vertices();
  EmbeddedGraph g;
  for (Vertex v : dom) g.add_vertex(v);
  for (const Edge& e : p.metric.graph().edges)
    if (e.u != e.v && contains(dom, e.u) && contains(dom, e.v) && approx_equal(e.length, p.metric.dist(e.u, e.v)))
      g.add_edge(e.u, e.v, p.metric.dist(e.u, e.v));
  SolveResult r = solve_on_tree_decomposition(p, g, heuristic_tree_decomposition(g), opt);
  r.method = "dp_graph";
  return r;
}

SolveResult exact_solve(const ProblemInstance& p) {
  p.validate();
  const MetricInstance& m = p.metric;
  const VertexSet dom = p.vertices();
  const std::size_t k = dom.size();
  SolveResult r;
  r.method = "exact";
  if (p.kind == ProblemKind::tsp) {
    if (k > static_cast<std::size_t>(kExactTspMaxN)) throw Error("exact tsp limited to small n");
    if (k == 1) {
      r.tour = {dom[0], dom[0]};
      finish(p, r);
      return r;
    }
    const std::size_t full = std::size_t{1} << k;
    std::vector<double> dp(full * k, kInf);
    std::vector<int> back(full * k, -1);
    dp[1 * k + 0] = 0.0;
    for (std::size_t mask = 1; mask < full; mask += 2)
      for (std::size_t j = 0; j < k; ++j) {
        double cur = dp[mask * k + j];
        if (!std::isfinite(cur)) continue;
        for (std::size_t nx = 1; nx < k; ++nx) {
          if (mask & (std::size_t{1} << nx)) continue;
          std::size_t nm = mask | (std::size_t{1} << nx);
          double c = cur + m.dist(dom[j], dom[nx]);
          if (c < dp[nm * k + nx]) {
            dp[nm * k + nx] = c;
            back[nm * k + nx] = static_cast<int>(j);
          }
        }
      }
    std::size_t last = 1;
    double best = kInf;
    for (std::size_t j = 1; j < k; ++j) {
      double c = dp[(full - 1) * k + j] + m.dist(dom[j], dom[0]);
      if (c < best) {
        best = c;
        last = j;
      }
    }
    std::vector<Vertex> order;
    std::size_t mask = full - 1;
    int j = static_cast<int>(last);
    while (j >= 0) {
      order.push_back(dom[static_cast<std::size_t>(j)]);
      int pj = back[mask * k + static_cast<std::size_t>(j)];
      mask &= ~(std::size_t{1} << j);
      j = pj;
    }
    std::reverse(order.begin(), order.end());
    order.push_back(dom[0]);
    r.tour = order;
  } else if (p.kind == ProblemKind::steiner) {
    const VertexSet& term = p.terminals;
    if (term.size() > static_cast<std::size_t>(kExactSteinerMaxTerminals))
      throw Error("exact steiner limited to few terminals");
    if (term.size() >= 2) {
      // Dreyfus-Wagner over the remaining terminals, rooted at term[0].
      const std::size_t t = term.size() - 1;
      const std::size_t full = std::size_t{1} << t;
      std::vector<double> dp(full * k, kInf), split(full * k, kInf);
      std::vector<int> via(full * k, -1);
      std::vector<std::size_t> sub(full * k, 0);
      for (std::size_t i = 0; i < t; ++i)
        for (std::size_t v = 0; v < k; ++v) {
          dp[(std::size_t{1} << i) * k + v] = m.dist(term[i + 1], dom[v]);
        }
      for (std::size_t s = 1; s < full; ++s) {
        if ((s & (s - 1)) == 0) continue;
        for (std::size_t u = 0; u < k; ++u)
          for (std::size_t a = (s - 1) & s; a > 0; a = (a - 1) & s) {
            if (a < (s ^ a)) continue;
            double c = dp[a * k + u] + dp[(s ^ a) * k + u];
            if (c < split[s * k + u]) {
              split[s * k + u] = c;
              sub[s * k + u] = a;
            }
          }
        for (std::size_t v = 0; v < k; ++v)
          for (std::size_t u = 0; u < k; ++u) {
            double c = split[s * k + u] + m.dist(dom[u], dom[v]);
            if (c < dp[s * k + v]) {
              dp[s * k + v] = c;
              via[s * k + v] = static_cast<int>(u);
            }
          }
      }
      const std::size_t root = static_cast<std::size_t>(std::lower_bound(dom.begin(), dom.end(), term[0]) - dom.begin());
      std::vector<std::pair<Vertex, Vertex>> metric_edges;
      std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t s, std::size_t v) {
        if ((s & (s - 1)) == 0) {
          std::size_t i = static_cast<std::size_t>(__builtin_ctzll(s));
          if (term[i + 1] != dom[v]) metric_edges.push_back({term[i + 1], dom[v]});
          return;
        }
        std::size_t u = static_cast<std::size_t>(via[s * k + v]);
        if (u != v) metric_edges.push_back({dom[u], dom[v]});
        std::size_t a = sub[s * k + u];
        walk(a, u);
        walk(s ^ a, u);
      };
      walk(full - 1, root);
      r.tree_edges = steiner_from_metric_edges(m, metric_edges, term);
    }
  } else {
    if (k > static_cast<std::size_t>(kExactFacilityMaxN)) throw Error("exact facility limited to small n");
    double best = kInf;
    std::size_t best_mask = 0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
      double c = 0.0;
      for (std::size_t i = 0; i < k; ++i)
        if (mask & (std::size_t{1} << i)) c += p.open_cost[static_cast<std::size_t>(dom[i])];
      for (std::size_t v = 0; v < k && c < best; ++v) {
        double near = kInf;
        for (std::size_t i = 0; i < k; ++i)
          if (mask & (std::size_t{1} << i)) near = std::min(near, m.dist(dom[v], dom[i]));
        c += p.weight(dom[v]) * near;
      }
      if (c < best) {
        best = c;
        best_mask = mask;
      }
    }
    for (std::size_t i = 0; i < k; ++i)
      if (best_mask & (std::size_t{1} << i)) r.facilities.push_back(dom[i]);
  }
  finish(p, r);
  return r;
}

SolveResult baseline_solve(const ProblemInstance& p) {
  p.validate();
  const MetricInstance& m = p.metric;
  const VertexSet dom = p.vertices();
  SolveResult r;
  r.method = "baseline";
  if (p.kind == ProblemKind::tsp) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    mst_weight(m, dom, &edges);
    std::map<Vertex, std::vector<Vertex>> adj;
    for (const auto& [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    for (auto& [v, list] : adj) std::sort(list.begin(), list.end());
    std::vector<Vertex> stack{dom.front()};
    std::set<Vertex> seen;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      if (!seen.insert(v).second) continue;
      r.tour.push_back(v);
      auto& list = adj[v];
      for (auto it = list.rbegin(); it != list.rend(); ++it)
        if (!seen.count(*it)) stack.push_back(*it);
    }
    r.tour.push_back(dom.front());
  } else if (p.kind == ProblemKind::steiner) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    mst_weight(m, p.terminals, &edges);
    r.tree_edges = steiner_from_metric_edges(m, edges, p.terminals);
  } else {
    // Greedy star selection with reconnection savings over weighted clients.
    const std::size_t k = dom.size();
    std::vector<double> fcost(k), weight(k), conn(k, kInf);
    std::vector<char> opened(k, 0), connected(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
      fcost[i] = p.open_cost[static_cast<std::size_t>(dom[i])];
      weight[i] = p.weight(dom[i]);
    }
    auto d = [&](std::size_t a, std::size_t b) { return m.dist(dom[a], dom[b]); };
    std::size_t left = k;
    while (left > 0) {
      double best_ratio = kInf;
      std::size_t best_i = 0, best_len = 0;
      std::vector<std::size_t> best_order;
      for (std::size_t i = 0; i < k; ++i) {
        double base = opened[i] ? 0.0 : fcost[i];
        for (std::size_t j = 0; j < k; ++j)
          if (connected[j]) base -= weight[j] * std::max(0.0, conn[j] - d(i, j));
        std::vector<std::size_t> order;
        for (std::size_t j = 0; j < k; ++j)
          if (!connected[j]) order.push_back(j);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d(i, a) < d(i, b); });
        double num = base, den = 0.0;
        for (std::size_t len = 1; len <= order.size(); ++len) {
          num += weight[order[len - 1]] * d(i, order[len - 1]);
          den += weight[order[len - 1]];
          double ratio;
          if (den > 0.0) {
            ratio = num / den;
          } else {
            ratio = num > 0.0 ? kInf : -kInf;
            if (num == 0.0) ratio = 0.0;
          }
          if (ratio < best_ratio) {
            best_ratio = ratio;
            best_i = i;
            best_len = len;
            best_order = order;
          }
        }
      }
      if (best_len == 0) {
        // only zero-weight clients with nothing payable: attach to the cheapest facility
        best_i = 0;
        for (std::size_t i = 1; i < k; ++i)
          if ((opened[i] ? 0.0 : fcost[i]) < (opened[best_i] ? 0.0 : fcost[best_i])) best_i = i;
        best_order.clear();
        for (std::size_t j = 0; j < k; ++j)
          if (!connected[j]) best_order.push_back(j);
        best_len = best_order.size();
      }
      opened[best_i] = 1;
      for (std::size_t j = 0; j < k; ++j)
        if (connected[j] && d(best_i, j) < conn[j]) conn[j] = d(best_i, j);
      for (std::size_t t = 0; t < best_len; ++t) {
        connected[best_order[t]] = 1;
        conn[best_order[t]] = d(best_i, best_order[t]);
        --left;
      }
    }
    for (std::size_t i = 0; i < k; ++i)
      if (opened[i]) r.facilities.push_back(dom[i]);
  }
  finish(p, r);
  return r;
}

double baseline_kappa(const ProblemInstance& p) {
  if (p.kind == ProblemKind::tsp) return 2.0 * mst_weight(p.metric, p.vertices(), nullptr);
  return baseline_solve(p).cost;
}

NetReduction build_net_reduction(const ProblemInstance& p, const HdConfig& cfg, double kappa,
                                 const VertexSet& domain) {
  cfg.validate();
  if (domain.empty()) throw Error("net reduction needs a nonempty domain");
  const MetricInstance& m = p.metric;
  NetReduction nr;
  nr.kappa = kappa;
  nr.delta = cfg.epsilon * kappa / static_cast<double>(domain.size());
  for (Vertex v : domain) {
    bool far = true;
    for (Vertex q : nr.net)
      if (!gt(m.dist(v, q), nr.delta)) {
        far = false;
        break;
      }
    if (far) nr.net.push_back(v);
  }
  nr.assign.assign(static_cast<std::size_t>(m.n()), -1);
  for (Vertex v : domain) {
    Vertex best = nr.net.front();
    for (Vertex q : nr.net)
      if (lt(m.dist(v, q), m.dist(v, best))) best = q;
    nr.assign[static_cast<std::size_t>(v)] = best;
  }
  return nr;
}

NetReduction build_net_reduction(const ProblemInstance& p, const HdConfig& cfg) {
  const double kappa = baseline_kappa(p);
  VertexSet domain = p.vertices();
  if (p.kind == ProblemKind::steiner && !p.terminals.empty()) {
    VertexSet near;
    for (Vertex v : domain)
      if (leq(dist_to_set(p.metric, v, p.terminals), kappa)) near.push_back(v);
    domain = near;
  }
  return build_net_reduction(p, cfg, kappa, domain);
}

namespace {

struct QptasState {
  const ProblemInstance* p = nullptr;
  HdConfig cfg;
  std::uint64_t seed = 0;
  SolverOptions opt;
  QptasTrace* trace = nullptr;
  MetricInstance scaled;
  double factor = 1.0;
  CoverLadder ladder;
  TownsDecomposition towns;
};

/// Solves the net instance of one domain and lifts it back to `p`.
SolveResult qptas_part(QptasState& st, const ProblemInstance& p, const NetReduction& nr) {
  const MetricInstance& m = p.metric;
  const HdConfig& cfg = st.cfg;
  SolveResult out;

  // embedding of the net
  int level_floor = nr.delta > 0.0 ? level_of_distance(cfg.c, nr.delta * st.factor) : 0;
  const TownsDecomposition restricted = restrict_decomposition(st.towns, nr.net);
  EmbedContext ctx;
  ctx.metric = &st.scaled;
  ctx.ladder = &st.ladder;
  ctx.towns = &restricted;
  ctx.core_towns = &st.towns;
  ctx.cfg = cfg;
  ctx.shift = HubShift{level_floor, nr.net};
  ctx.seed = st.seed;
  ctx.town_hub_fallback = true;
  int fallbacks = 0;
  ctx.hub_fallbacks = &fallbacks;
  Embedding e = embed_town(ctx, restricted.root);
  for (auto& [key, len] : e.graph.edges) len = m.dist(key.first, key.second);

  NetReduction stored = nr;
  stored.level_floor = level_floor;
  if (st.trace) {
    st.trace->nets.push_back(stored);
    st.trace->widths.push_back(e.width());
    st.trace->hub_fallbacks += fallbacks;
  }

  // net instance
  ProblemInstance q;
  q.kind = p.kind;
  q.metric = p.metric;
  q.domain = nr.net;
  if (p.kind == ProblemKind::steiner) {
    std::vector<Vertex> t;
    for (Vertex v : p.terminals) t.push_back(nr.assign[static_cast<std::size_t>(v)]);
    q.terminals = as_set(t);
  }
  if (p.kind == ProblemKind::facility) {
    q.open_cost.assign(static_cast<std::size_t>(m.n()), 0.0);
    q.phi.assign(static_cast<std::size_t>(m.n()), 0.0);
    std::vector<char> seen(static_cast<std::size_t>(m.n()), 0);
    for (Vertex v : p.vertices()) {
      auto a = static_cast<std::size_t>(nr.assign[static_cast<std::size_t>(v)]);
      q.phi[a] += p.weight(v);
      double f = p.open_cost[static_cast<std::size_t>(v)];
      if (!seen[a] || f < q.open_cost[a]) q.open_cost[a] = f;
      seen[a] = 1;
    }
  }

  SolveResult net;
  try {
    net = solve_on_tree_decomposition(q, e.graph, e.decomposition, st.opt);
  } catch (const Error& err) {
    const std::string what = err.what();
    if (what != "width cap exceeded" && what != "state budget exceeded") throw;
    out = baseline_solve(p);
    out.method = "qptas_fallback_baseline";
    out.fell_back = true;
    out.width = e.width();
    return out;
  }
  out.width = e.width();
  out.method = "qptas";
  const double net_cost = witness_cost(q, net);
  const double n = static_cast<double>(p.vertices().size());

  if (p.kind == ProblemKind::tsp) {
    std::vector<Vertex> walk;
    std::set<Vertex> expanded;
    std::map<Vertex, std::vector<Vertex>> members;
    for (Vertex v : p.vertices()) {
      Vertex a = nr.assign[static_cast<std::size_t>(v)];
      if (a != v) members[a].push_back(v);
    }
    for (Vertex x : net.tour) {
      walk.push_back(x);
      if (!expanded.insert(x).second) continue;
      for (Vertex v : members[x]) {
        walk.push_back(v);
        walk.push_back(x);
      }
    }
    std::set<Vertex> seen;
    for (Vertex v : walk)
      if (seen.insert(v).second) out.tour.push_back(v);
    out.tour.push_back(out.tour.front());
    out.lift_bound = 2.0 * n * nr.delta;
  } else if (p.kind == ProblemKind::steiner) {
    std::vector<std::pair<Vertex, Vertex>> metric_edges = net.tree_edges;
    for (Vertex t : p.terminals) {
      Vertex a = nr.assign[static_cast<std::size_t>(t)];
      if (a != t) metric_edges.push_back({t, a});
    }
    out.tree_edges = steiner_from_metric_edges(m, metric_edges, p.terminals);
    out.lift_bound = n * nr.delta;
  } else {
    for (Vertex f : net.facilities) {
      Vertex best = -1;
      for (Vertex v : p.vertices())
        if (nr.assign[static_cast<std::size_t>(v)] == f &&
            (best < 0 || p.open_cost[static_cast<std::size_t>(v)] < p.open_cost[static_cast<std::size_t>(best)]))
          best = v;
      out.facilities.push_back(best);
    }
    out.facilities = as_set(out.facilities);
    out.lift_bound = n * nr.delta;
  }
  finish(p, out);
  out.lift_overhead = out.cost - net_cost;
  return out;
}

}  // namespace

SolveResult qptas_solve(const ProblemInstance& p, const HdConfig& cfg, std::uint64_t seed,
                        const SolverOptions& opt, QptasTrace* trace) {
  cfg.validate();
  p.validate();
  QptasState st;
  st.p = &p;
  st.cfg = cfg;
  st.seed = seed;
  st.opt = opt;
  st.trace = trace;
  st.scaled = rescale_min_distance(p.metric, cfg.c, &st.factor);
  st.ladder = build_cover_ladder(st.scaled, cfg);
  st.towns = build_towns_decomposition(st.scaled, st.ladder);

  if (p.kind != ProblemKind::facility) {
    SolveResult r = qptas_part(st, p, build_net_reduction(p, cfg));
    return r;
  }

  // facility: solve each component of the "edges <= kappa" graph separately
  const double kappa = baseline_kappa(p);
  const VertexSet dom = p.vertices();
  std::vector<int> comp(static_cast<std::size_t>(p.metric.n()), -1);
  int count = 0;
  for (Vertex s : dom) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    std::vector<Vertex> stack{s};
    comp[static_cast<std::size_t>(s)] = count;
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      for (const auto& [w, len] : p.metric.adjacency()[static_cast<std::size_t>(v)])
        if (comp[static_cast<std::size_t>(w)] < 0 && contains(dom, w) && leq(len, kappa)) {
          comp[static_cast<std::size_t>(w)] = count;
          stack.push_back(w);
        }
    }
    ++count;
  }
  SolveResult total;
  total.method = "qptas";
  for (int c = 0; c < count; ++c) {
    ProblemInstance part = p;
    part.domain.clear();
    for (Vertex v : dom)
      if (comp[static_cast<std::size_t>(v)] == c) part.domain.push_back(v);
    SolveResult r = qptas_part(st, part, build_net_reduction(part, cfg));
    total.facilities = set_union(total.facilities, r.facilities);
    total.lift_overhead += r.lift_overhead;
    total.lift_bound += r.lift_bound;
    total.width = std::max(total.width, r.width);
    if (r.fell_back) {
      total.fell_back = true;
      total.method = "qptas_fallback_baseline";
    }
  }
  finish(p, total);
  return total;
}

}  // namespace hubway

#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <stdexcept>
#include <string>
#include <vector>

namespace hubway {

using Vertex = int;
using VertexSet = std::vector<Vertex>;  // kept sorted ascending

/// Raised for invalid input and for violated internal invariants.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Relative tolerance for every threshold comparison on distances. Strict
// comparisons are the negation of the inclusive ones, so an interval
// (a, b] is tested as gt(x, a) && leq(x, b) with the slack on both ends
// tilted the same way.
inline constexpr double kRelTol = 1e-9;

inline bool leq(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a <= b;
  return a <= b + kRelTol * std::max(std::abs(a), std::abs(b));
}
inline bool gt(double a, double b) { return !leq(a, b); }
inline bool geq(double a, double b) { return leq(b, a); }
inline bool lt(double a, double b) { return !leq(b, a); }
inline bool in_half_open(double x, double lo, double hi) {
  return gt(x, lo) && leq(x, hi);
}
inline bool approx_equal(double a, double b) { return leq(a, b) && leq(b, a); }

/// splitmix64 finalizer; used to derive independent RNG streams.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ a);
  h = mix64(h ^ (b + 0x51ed27f1ULL));
  return mix64(h ^ (c + 0x2545f491ULL));
}

inline bool contains(const VertexSet& s, Vertex v) {
  return std::binary_search(s.begin(), s.end(), v);
}

inline void normalize(VertexSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

/// Report-carrying validation result; empty means valid.
struct ValidationReport {
  std::vector<std::string> violations;
  std::vector<std::string> notes;  // informational, not failures

  bool ok() const { return violations.empty(); }
  void add(std::string msg) { violations.push_back(std::move(msg)); }
  bool mentions(const std::string& needle) const {
    for (const auto& v : violations)
      if (v.find(needle) != std::string::npos) return true;
    return false;
  }
};

}  // namespace hubway

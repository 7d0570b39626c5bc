#pragma once

// Slow, independent re-derivations used as test oracles. Nothing here calls
// the enumeration, packing or closed-form code under test.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "kxq/graph.hpp"
#include "kxq/uncertainty.hpp"

namespace oracle {

struct Fraction {
  long long num = 0;
  long long den = 1;

  Fraction() = default;
  Fraction(long long n, long long d = 1) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  friend Fraction operator+(Fraction a, Fraction b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend Fraction operator-(Fraction a, Fraction b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
  friend Fraction operator*(Fraction a, Fraction b) { return {a.num * b.num, a.den * b.den}; }
  friend bool operator==(Fraction a, Fraction b) { return a.num == b.num && a.den == b.den; }
  friend bool operator<(Fraction a, Fraction b) { return a.num * b.den < b.num * a.den; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Exact rational weight, assuming weights are multiples of 1/2.
inline Fraction exact_weight(double w) { return Fraction(static_cast<long long>(w * 2.0 + 0.5), 2); }

/// A structure as plain data: edge sequence, vertex set, cycle flag.
struct Shape {
  bool cycle = true;
  std::vector<kxq::EdgeId> edges;
  std::set<kxq::VertexId> vertices;
};

/// Every cycle and chain by walking all vertex sequences. Cycles are kept
/// only from their smallest vertex so each appears once.
inline std::vector<Shape> brute_force_structures(const kxq::ExchangeGraph& g, int max_cycle, int max_chain) {
  const int n = static_cast<int>(g.vertex_count());
  std::map<std::pair<int, int>, kxq::EdgeId> edge_of;
  for (const auto& e : g.edges) edge_of[{e.source, e.target}] = e.id;

  std::vector<Shape> out;
  std::vector<int> seq;
  auto extend = [&](auto&& self, bool chain, int max_len) -> void {
    const int len = static_cast<int>(seq.size()) - 1;  // edges so far
    if (!chain && len >= 1) {
      auto back = edge_of.find({seq.back(), seq.front()});
      if (back != edge_of.end() && len + 1 <= max_len) {
        Shape s;
        s.cycle = true;
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) s.edges.push_back(edge_of.at({seq[i], seq[i + 1]}));
        s.edges.push_back(back->second);
        s.vertices.insert(seq.begin(), seq.end());
        out.push_back(s);
      }
    }
    if (chain && len >= 1) {
      Shape s;
      s.cycle = false;
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) s.edges.push_back(edge_of.at({seq[i], seq[i + 1]}));
      s.vertices.insert(seq.begin(), seq.end());
      out.push_back(s);
    }
    if (len >= max_len) return;
    for (int v = 0; v < n; ++v) {
      if (std::find(seq.begin(), seq.end(), v) != seq.end()) continue;
      if (g.is_ndd(v)) continue;
      if (!chain && v < seq.front()) continue;
      if (!edge_of.count({seq.back(), v})) continue;
      seq.push_back(v);
      self(self, chain, max_len);
      seq.pop_back();
    }
  };
  for (int v = 0; v < n; ++v) {
    seq = {v};
    if (g.is_ndd(v)) {
      extend(extend, true, max_chain);
    } else {
      extend(extend, false, max_cycle);
    }
  }
  return out;
}

inline std::set<std::vector<kxq::EdgeId>> edge_sequences(const std::vector<Shape>& shapes) {
  std::set<std::vector<kxq::EdgeId>> out;
  for (const auto& s : shapes) out.insert(s.edges);
  return out;
}

/// Realized weight straight from the definition, in exact arithmetic.
inline Fraction realized(const Shape& s, const kxq::ExchangeGraph& g, const std::vector<bool>& dead) {
  Fraction total;
  for (kxq::EdgeId e : s.edges) {
    if (dead[static_cast<std::size_t>(e)]) return s.cycle ? Fraction() : total;
    total = total + exact_weight(g.edges[static_cast<std::size_t>(e)].weight);
  }
  return total;
}

/// Expected realized weight by summing over every failure pattern of the
/// structure's edges, given each edge's exact survival probability.
inline Fraction expected_by_patterns(const Shape& s, const kxq::ExchangeGraph& g,
                                     const std::vector<Fraction>& survival) {
  const std::size_t k = s.edges.size();
  Fraction total;
  for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) {
    std::vector<bool> dead(g.edge_count(), false);
    Fraction p(1);
    for (std::size_t i = 0; i < k; ++i) {
      const auto e = static_cast<std::size_t>(s.edges[i]);
      if (mask >> i & 1U) {
        dead[e] = true;
        p = p * (Fraction(1) - survival[e]);
      } else {
        p = p * survival[e];
      }
    }
    total = total + p * realized(s, g, dead);
  }
  return total;
}

/// Best vertex-disjoint selection of positive-value shapes. Ties go to the
/// selection that includes the smallest-index shape where two optima first
/// differ.
inline std::vector<int> best_packing(const std::vector<Shape>& shapes, const std::vector<Fraction>& values) {
  const int m = static_cast<int>(shapes.size());
  std::vector<int> best;
  Fraction best_value;
  bool have = false;
  auto indicator_less = [&](const std::vector<int>& a, const std::vector<int>& b) {
    // true when a precedes b in "include smaller index first" order
    std::vector<bool> ia(m, false), ib(m, false);
    for (int i : a) ia[i] = true;
    for (int i : b) ib[i] = true;
    for (int i = 0; i < m; ++i)
      if (ia[i] != ib[i]) return static_cast<bool>(ia[i]);
    return false;
  };
  for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
    std::vector<int> pick;
    std::set<kxq::VertexId> used;
    bool ok = true;
    Fraction v;
    for (int i = 0; i < m && ok; ++i) {
      if (!(mask >> i & 1U)) continue;
      if (!(Fraction(0) < values[i])) ok = false;
      for (auto x : shapes[i].vertices)
        if (!used.insert(x).second) ok = false;
      pick.push_back(i);
      v = v + values[i];
    }
    if (!ok) continue;
    if (!have || best_value < v || (v == best_value && indicator_less(pick, best))) {
      best = pick;
      best_value = v;
      have = true;
    }
  }
  return best;
}

/// Sorted the way the library orders structures, so indices line up for
/// tie-breaking.
inline std::vector<Shape> canonical_order(std::vector<Shape> shapes) {
  std::sort(shapes.begin(), shapes.end(), [](const Shape& a, const Shape& b) { return a.edges < b.edges; });
  return shapes;
}

/// V^S(q) for the max-weight policy in exact arithmetic: every rejection
/// pattern of q, a brute-force max-weight packing on F(c, r), then expected
/// weight of that packing by failure-pattern enumeration.
inline Fraction max_weight_objective(const kxq::ExchangeGraph& g, const std::vector<Fraction>& p_reject,
                                     const std::vector<Fraction>& p_queried, const std::vector<Fraction>& p_unqueried,
                                     const std::vector<kxq::EdgeId>& q, int max_cycle = 3, int max_chain = 3) {
  const auto shapes = canonical_order(brute_force_structures(g, max_cycle, max_chain));
  std::vector<bool> queried(g.edge_count(), false);
  for (auto e : q) queried[static_cast<std::size_t>(e)] = true;
  Fraction total;
  for (std::uint64_t mask = 0; mask < (1ULL << q.size()); ++mask) {
    std::vector<bool> rejected(g.edge_count(), false);
    Fraction p(1);
    for (std::size_t i = 0; i < q.size(); ++i) {
      const auto e = static_cast<std::size_t>(q[i]);
      if (mask >> i & 1U) {
        rejected[e] = true;
        p = p * p_reject[e];
      } else {
        p = p * (Fraction(1) - p_reject[e]);
      }
    }
    std::vector<Fraction> f_values;
    for (const auto& s : shapes) f_values.push_back(realized(s, g, rejected));
    std::vector<Fraction> survival(g.edge_count());
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
      survival[e] = rejected[e] ? Fraction(0) : queried[e] ? p_queried[e] : p_unqueried[e];
    }
    Fraction w;
    for (int i : best_packing(shapes, f_values)) w = w + expected_by_patterns(shapes[i], g, survival);
    total = total + p * w;
  }
  return total;
}

/// Max-weight objective under the Simple distribution (1/2, 1, 1/2).
inline Fraction simple_max_weight_objective(const kxq::ExchangeGraph& g, const std::vector<kxq::EdgeId>& q) {
  const std::size_t m = g.edge_count();
  return max_weight_objective(g, std::vector<Fraction>(m, Fraction(1, 2)), std::vector<Fraction>(m, Fraction(1)),
                              std::vector<Fraction>(m, Fraction(1, 2)), q);
}

}  // namespace oracle

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kxq/graph.hpp"
#include "kxq/uncertainty.hpp"

namespace kxq {

/// F(c, dead): full weight if nothing in c is dead, zero for a cycle with a
/// dead edge, and for a chain the weight of the edges before the first dead
/// edge.
double realized_weight(const CycleChain& c, const DeadVector& dead);

/// Closed form of E[F(c, r + f) | q, r] with independent edges. With s_e the
/// survival probability of each edge: a cycle is worth sum(w) * prod(s); a
/// chain e_1..e_L is worth sum_k w_k * prod_{j<=k} s_j.
double expected_structure_weight(const CycleChain& c, const DistributionSpec& spec, const QuerySet& q,
                                 const RejectionVector& r);

enum class PolicyKind { max_weight, failure_aware };

std::string to_string(PolicyKind policy);
/// Accepts "max_weight"/"max-weight" and "failure_aware"/"failure-aware".
PolicyKind parse_policy(const std::string& name);

/// Enumerated structures plus the conflict data the packing solver needs.
/// Immutable once built.
class StructurePool {
 public:
  StructurePool() = default;
  StructurePool(const ExchangeGraph& graph, std::vector<CycleChain> structures);
  StructurePool(const ExchangeGraph& graph, StructureCaps caps);

  std::size_t size() const noexcept { return structures_.size(); }
  const std::vector<CycleChain>& structures() const noexcept { return structures_; }
  const CycleChain& operator[](std::size_t i) const { return structures_[i]; }
  std::size_t edge_count() const noexcept { return edge_count_; }

  bool conflicts(std::size_t a, std::size_t b) const noexcept {
    return (conflict_words_[a * words_ + b / 64] >> (b % 64)) & 1U;
  }
  /// Conflict row of structure a as words over structure indices.
  std::span<const std::uint64_t> conflict_row(std::size_t a) const noexcept {
    return {conflict_words_.data() + a * words_, words_};
  }
  std::size_t words() const noexcept { return words_; }

  /// Structure indices using edge e, ascending.
  const std::vector<int>& structures_with_edge(EdgeId e) const { return by_edge_.at(static_cast<std::size_t>(e)); }
  /// Edges used by at least one structure. Only these can change a matching.
  bool is_relevant(EdgeId e) const { return !structures_with_edge(e).empty(); }

 private:
  void build_conflicts(std::size_t vertex_count);

  std::vector<CycleChain> structures_;
  std::size_t edge_count_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> conflict_words_;
  std::vector<std::vector<int>> by_edge_;
};

/// A vertex-disjoint selection of structures.
struct Matching {
  std::vector<int> selected;  // ascending structure indices
  double nominal_weight = 0.0;

  std::vector<std::uint8_t> indicator(std::size_t structure_count) const;
  bool operator==(const Matching&) const = default;
};

bool is_vertex_disjoint(const StructurePool& pool, const Matching& x);

/// W(x; q, r): sum of expected weights of the selected structures.
double post_match_expected_weight(const StructurePool& pool, const Matching& x, const DistributionSpec& spec,
                                  const QuerySet& q, const RejectionVector& r);

/// Per-structure values the policy maximizes: F(c, r) for max-weight,
/// expected weight for failure-aware.
std::vector<double> policy_values(PolicyKind policy, const StructurePool& pool, const DistributionSpec& spec,
                                  const QuerySet& q, const RejectionVector& r);

/// Exact maximum-value vertex-disjoint packing by depth-first branch and
/// bound. Only structures with positive value are ever selected. Among
/// selections within a relative 1e-9 of each other the first one in
/// include-first index order wins, which prefers smaller structure indices.
Matching pack_max_value(const StructurePool& pool, std::span<const double> values);

/// Exhaustive enumeration of vertex-disjoint selections with the same
/// tie-break as pack_max_value. Throws CapacityError above `cap` structures.
Matching brute_force_packing(const StructurePool& pool, std::span<const double> values, int cap = 20);

/// M(r) for the given policy.
Matching solve_policy(PolicyKind policy, const StructurePool& pool, const DistributionSpec& spec, const QuerySet& q,
                      const RejectionVector& r);

}  // namespace kxq

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kxq/graph.hpp"
#include "kxq/rng.hpp"

namespace kxq {

/// Binary vector indexed by edge id. The tag keeps query sets, rejections
/// and failures from being mixed up at compile time.
template <class Tag>
class EdgeIndicator {
 public:
  EdgeIndicator() = default;
  explicit EdgeIndicator(std::size_t edge_count) : bits_(edge_count, 0) {}

  static EdgeIndicator of(std::size_t edge_count, std::span<const EdgeId> members) {
    EdgeIndicator out(edge_count);
    for (EdgeId e : members) out.set(e);
    return out;
  }
  static EdgeIndicator of(std::size_t edge_count, std::initializer_list<EdgeId> members) {
    return of(edge_count, std::span<const EdgeId>(members.begin(), members.size()));
  }

  std::size_t size() const noexcept { return bits_.size(); }
  bool test(EdgeId e) const { return bits_.at(static_cast<std::size_t>(e)) != 0; }
  bool operator[](EdgeId e) const noexcept { return bits_[static_cast<std::size_t>(e)] != 0; }
  void set(EdgeId e, bool on = true) { bits_.at(static_cast<std::size_t>(e)) = on ? 1 : 0; }
  void reset(EdgeId e) { set(e, false); }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto b : bits_) c += b;
    return c;
  }
  bool none() const noexcept { return count() == 0; }

  std::vector<EdgeId> members() const {
    std::vector<EdgeId> out;
    for (std::size_t i = 0; i < bits_.size(); ++i)
      if (bits_[i]) out.push_back(static_cast<EdgeId>(i));
    return out;
  }

  EdgeIndicator with(EdgeId e) const {
    EdgeIndicator out = *this;
    out.set(e);
    return out;
  }

  /// Compact key for hashing and maps.
  std::string_view key() const noexcept {
    return {reinterpret_cast<const char*>(bits_.data()), bits_.size()};
  }
  std::span<const std::uint8_t> raw() const noexcept { return bits_; }

  auto operator<=>(const EdgeIndicator&) const = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct QueryTag {};
struct RejectionTag {};
struct FailureTag {};
struct DeadTag {};

using QuerySet = EdgeIndicator<QueryTag>;
using RejectionVector = EdgeIndicator<RejectionTag>;
using FailureVector = EdgeIndicator<FailureTag>;
/// r + f: an edge that was rejected pre-match or failed post-match.
using DeadVector = EdgeIndicator<DeadTag>;

DeadVector combine(const RejectionVector& r, const FailureVector& f);

/// r_e = 1 only for queried edges, and both vectors sized alike.
bool consistent(const QuerySet& q, const RejectionVector& r) noexcept;

struct EdgeProbabilities {
  double p_reject = 0.0;             // P_R
  double p_success_queried = 1.0;    // P_Q, given queried and accepted
  double p_success_unqueried = 1.0;  // P_N

  bool operator==(const EdgeProbabilities&) const = default;
};

/// Where a distribution came from; recorded in the distribution file.
struct DistributionProvenance {
  std::string kind = "custom";
  std::uint64_t seed = 0;
  std::vector<EdgeId> high_risk;

  bool operator==(const DistributionProvenance&) const = default;
};

/// Independent per-edge rejection and failure model covering every edge id.
class DistributionSpec {
 public:
  DistributionSpec() = default;
  /// Throws ValidationError if a probability leaves [0, 1].
  explicit DistributionSpec(std::vector<EdgeProbabilities> per_edge, DistributionProvenance provenance = {});

  std::size_t size() const noexcept { return per_edge_.size(); }
  const EdgeProbabilities& at(EdgeId e) const { return per_edge_.at(static_cast<std::size_t>(e)); }
  const std::vector<EdgeProbabilities>& per_edge() const noexcept { return per_edge_; }
  const DistributionProvenance& provenance() const noexcept { return provenance_; }

  /// Probability that e is rejected if queried now, given earlier
  /// responses. Edges are independent, so the history is not consulted.
  double rejection_probability(EdgeId e, const QuerySet& q, const RejectionVector& r) const;

  /// 1 - E[r_e + f_e | q, r]: zero once rejected, P_Q if accepted, else P_N.
  double survival(EdgeId e, const QuerySet& q, const RejectionVector& r) const;

  bool operator==(const DistributionSpec&) const = default;

 private:
  std::vector<EdgeProbabilities> per_edge_;
  DistributionProvenance provenance_;
};

/// P_R = 0.5, P_Q = 1, P_N = 0.5 on every edge.
DistributionSpec make_simple(const ExchangeGraph& graph);

/// P_R ~ U(0.25, 0.43) everywhere; high-risk edges P_Q ~ U(0.2, 0.5),
/// P_N ~ U(0, 0.2); the rest P_Q ~ U(0.9, 1), P_N ~ U(0.8, 0.9).
DistributionSpec make_kpd(const ExchangeGraph& graph, std::span<const EdgeId> high_risk, std::uint64_t seed);

/// Seeded choice of round(fraction * |E|) high-risk edges.
std::vector<EdgeId> pick_high_risk_edges(const ExchangeGraph& graph, double fraction, std::uint64_t seed);

RejectionVector sample_rejections(const DistributionSpec& spec, const QuerySet& q, const CounterStream& stream);

/// Throws ValidationError when (q, r) is inconsistent.
FailureVector sample_failures(const DistributionSpec& spec, const QuerySet& q, const RejectionVector& r,
                              const CounterStream& stream);

struct RejectionScenario {
  RejectionVector rejections;
  double probability = 0.0;
};

inline constexpr int kDefaultExactCap = 10;

/// All 2^|q| response patterns. Bit i of the pattern index is the response
/// of the i-th smallest queried edge. Throws CapacityError if |q| > cap.
std::vector<RejectionScenario> enumerate_rejection_scenarios(const DistributionSpec& spec, const QuerySet& q,
                                                             int cap = kDefaultExactCap);

/// E[r_e + f_e] for an edge that is (or is not) queried.
double overall_death_probability(const DistributionSpec& spec, EdgeId e, bool queried);

struct DeathMonotonicityReport {
  bool passed = true;
  std::vector<EdgeId> violating_edges;
};

/// Passes iff querying never raises an edge's overall death probability.
DeathMonotonicityReport check_death_monotonicity(const DistributionSpec& spec);

}  // namespace kxq

template <class Tag>
struct std::hash<kxq::EdgeIndicator<Tag>> {
  std::size_t operator()(const kxq::EdgeIndicator<Tag>& v) const noexcept {
    return std::hash<std::string_view>{}(v.key());
  }
};

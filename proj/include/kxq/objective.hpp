#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "kxq/graph.hpp"
#include "kxq/matching.hpp"
#include "kxq/uncertainty.hpp"

namespace kxq {

enum class EvaluationMode { exact, sampled };

std::string to_string(EvaluationMode mode);

struct EvalConfig {
  /// Query sets with fewer edges than this are evaluated exactly.
  int exact_cap = kDefaultExactCap;
  /// Rejection scenarios drawn for larger query sets.
  int samples = 1000;
  /// Seed of the common-random-number rejection streams.
  std::uint64_t seed = 0;
  /// Use the OpenMP scenario kernel.
  bool parallel = false;
  /// Cache values by the relevant part of the query set.
  bool memoize = true;
};

/// The single-stage objective V^S(q) = E_r[W(M(r); q, r)] for one graph,
/// distribution and policy.
///
/// Below `exact_cap` queried edges every rejection pattern is enumerated;
/// otherwise `samples` scenarios are drawn from counter streams keyed by
/// (seed, scenario, edge), so every query set sees the same draw for the
/// same edge in the same scenario.
///
/// Queried edges that lie in no cycle or chain cannot change any matching,
/// so scenarios range over the relevant queried edges only and the memo is
/// keyed on that projection (plus the evaluation mode). Not thread safe;
/// use one evaluator per search.
class ObjectiveEvaluator {
 public:
  ObjectiveEvaluator(ExchangeGraph graph, DistributionSpec spec, PolicyKind policy, EvalConfig cfg = {},
                     StructureCaps caps = {});

  /// V^S(q).
  double value(const QuerySet& q);

  EvaluationMode mode_for(const QuerySet& q) const;
  std::size_t scenario_count(const QuerySet& q) const;

  /// Per-scenario values of `count` sampled rejection scenarios, in
  /// scenario order, from the stream seeded with `seed`.
  std::vector<double> sampled_scenario_values(const QuerySet& q, int count, std::uint64_t seed);

  /// W(M(r); q, r) for a fully observed outcome. One oracle call.
  double outcome_value(const QuerySet& q, const RejectionVector& r);
  /// M(r) for a fully observed outcome. One oracle call.
  Matching outcome_matching(const QuerySet& q, const RejectionVector& r);

  /// Queried edges restricted to those some structure uses.
  QuerySet relevant_part(const QuerySet& q) const;

  const ExchangeGraph& graph() const noexcept { return graph_; }
  const DistributionSpec& spec() const noexcept { return spec_; }
  const StructurePool& pool() const noexcept { return pool_; }
  PolicyKind policy() const noexcept { return policy_; }
  const EvalConfig& config() const noexcept { return cfg_; }
  std::size_t edge_count() const noexcept { return graph_.edge_count(); }
  QuerySet empty_query() const { return QuerySet(graph_.edge_count()); }

  /// Matching-solver invocations so far.
  std::uint64_t oracle_calls() const noexcept { return oracle_calls_; }
  /// value() requests, including memo hits.
  std::uint64_t value_requests() const noexcept { return value_requests_; }
  void reset_counters() noexcept {
    oracle_calls_ = 0;
    value_requests_ = 0;
  }

 private:
  std::vector<double> run_kernel(const QuerySet& q, const std::vector<RejectionVector>& scenarios);
  std::vector<RejectionVector> sample_scenarios(const QuerySet& relevant, int count, std::uint64_t seed) const;

  ExchangeGraph graph_;
  DistributionSpec spec_;
  PolicyKind policy_;
  EvalConfig cfg_;
  StructurePool pool_;
  std::unordered_map<std::string, double> memo_;
  std::uint64_t oracle_calls_ = 0;
  std::uint64_t value_requests_ = 0;
};

}  // namespace kxq

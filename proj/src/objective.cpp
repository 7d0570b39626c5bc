#include "kxq/objective.hpp"

#include "kxq/errors.hpp"
#include "kxq/scenario_kernels.hpp"

namespace kxq {

std::string to_string(EvaluationMode mode) { return mode == EvaluationMode::exact ? "exact" : "sampled"; }

ObjectiveEvaluator::ObjectiveEvaluator(ExchangeGraph graph, DistributionSpec spec, PolicyKind policy, EvalConfig cfg,
                                       StructureCaps caps)
    : graph_(std::move(graph)), spec_(std::move(spec)), policy_(policy), cfg_(cfg), pool_(graph_, caps) {
  if (spec_.size() != graph_.edge_count()) {
    throw ValidationError("distribution covers " + std::to_string(spec_.size()) + " edges but the graph has " +
                          std::to_string(graph_.edge_count()));
  }
  if (cfg_.samples < 1) throw ValidationError("sample count must be >= 1");
  if (cfg_.exact_cap < 0) throw ValidationError("exact-evaluation cap must be >= 0");
}

EvaluationMode ObjectiveEvaluator::mode_for(const QuerySet& q) const {
  return static_cast<long>(q.count()) < cfg_.exact_cap ? EvaluationMode::exact : EvaluationMode::sampled;
}

std::size_t ObjectiveEvaluator::scenario_count(const QuerySet& q) const {
  if (mode_for(q) == EvaluationMode::sampled) return static_cast<std::size_t>(cfg_.samples);
  return std::size_t{1} << relevant_part(q).count();
}

QuerySet ObjectiveEvaluator::relevant_part(const QuerySet& q) const {
  QuerySet out(q.size());
  for (EdgeId e : q.members())
    if (pool_.is_relevant(e)) out.set(e);
  return out;
}

std::vector<double> ObjectiveEvaluator::run_kernel(const QuerySet& q, const std::vector<RejectionVector>& scenarios) {
  const ScenarioContext ctx{pool_, spec_, policy_};
  oracle_calls_ += scenarios.size();
  return cfg_.parallel ? scenario_values_parallel(ctx, q, scenarios) : scenario_values_serial(ctx, q, scenarios);
}

std::vector<RejectionVector> ObjectiveEvaluator::sample_scenarios(const QuerySet& relevant, int count,
                                                                  std::uint64_t seed) const {
  const CounterStream root(seed, Phase::rejection);
  std::vector<RejectionVector> scenarios;
  scenarios.reserve(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s) {
    scenarios.push_back(sample_rejections(spec_, relevant, root.child(static_cast<std::uint64_t>(s))));
  }
  return scenarios;
}

double ObjectiveEvaluator::value(const QuerySet& q) {
  if (q.size() != graph_.edge_count()) throw ValidationError("query set length does not match the graph");
  ++value_requests_;
  const EvaluationMode mode = mode_for(q);
  const QuerySet relevant = relevant_part(q);
  std::string key;
  if (cfg_.memoize) {
    key.reserve(relevant.size() + 1);
    key.push_back(mode == EvaluationMode::exact ? 'x' : 's');
    key.append(relevant.key());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }

  double result = 0.0;
  if (mode == EvaluationMode::exact) {
    auto enumerated = enumerate_rejection_scenarios(spec_, relevant, cfg_.exact_cap);
    std::vector<RejectionVector> scenarios;
    std::vector<double> weights;
    scenarios.reserve(enumerated.size());
    weights.reserve(enumerated.size());
    for (auto& s : enumerated) {
      scenarios.push_back(std::move(s.rejections));
      weights.push_back(s.probability);
    }
    // W depends on q itself (queried-and-accepted edges survive with P_Q),
    // so the kernel sees the full query set.
    result = weighted_sum(run_kernel(q, scenarios), weights);
  } else {
    const auto values = run_kernel(q, sample_scenarios(relevant, cfg_.samples, cfg_.seed));
    for (double v : values) result += v;
    result /= static_cast<double>(values.size());
  }
  if (cfg_.memoize) memo_.emplace(std::move(key), result);
  return result;
}

std::vector<double> ObjectiveEvaluator::sampled_scenario_values(const QuerySet& q, int count, std::uint64_t seed) {
  if (count < 1) throw ValidationError("scenario count must be >= 1");
  return run_kernel(q, sample_scenarios(relevant_part(q), count, seed));
}

double ObjectiveEvaluator::outcome_value(const QuerySet& q, const RejectionVector& r) {
  if (!consistent(q, r)) throw ValidationError("rejections are inconsistent with the query set");
  ++oracle_calls_;
  return scenario_value(ScenarioContext{pool_, spec_, policy_}, q, r);
}

Matching ObjectiveEvaluator::outcome_matching(const QuerySet& q, const RejectionVector& r) {
  if (!consistent(q, r)) throw ValidationError("rejections are inconsistent with the query set");
  ++oracle_calls_;
  return solve_policy(policy_, pool_, spec_, q, r);
}

}  // namespace kxq

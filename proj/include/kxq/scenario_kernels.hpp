#pragma once

#include <span>
#include <vector>

#include "kxq/matching.hpp"
#include "kxq/uncertainty.hpp"

namespace kxq {

/// Inputs shared by every scenario of one objective evaluation.
struct ScenarioContext {
  const StructurePool& pool;
  const DistributionSpec& spec;
  PolicyKind policy;
};

/// W(M(r); q, r): clear the exchange under the policy, then take the
/// expected post-match weight of the result. One oracle call.
double scenario_value(const ScenarioContext& ctx, const QuerySet& q, const RejectionVector& r);

/// Reference kernel: scenarios valued one after another.
std::vector<double> scenario_values_serial(const ScenarioContext& ctx, const QuerySet& q,
                                           std::span<const RejectionVector> scenarios);

/// OpenMP kernel. Each scenario is independent and writes its own slot, so
/// the output is identical to the serial kernel. Falls back to the serial
/// loop when built without OpenMP.
std::vector<double> scenario_values_parallel(const ScenarioContext& ctx, const QuerySet& q,
                                             std::span<const RejectionVector> scenarios);

/// Sum of weights[i] * values[i] in index order.
double weighted_sum(std::span<const double> values, std::span<const double> weights);

bool parallel_kernels_available() noexcept;
int parallel_thread_count() noexcept;

}  // namespace kxq

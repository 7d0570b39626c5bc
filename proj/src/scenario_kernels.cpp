#include "kxq/scenario_kernels.hpp"

#include "kxq/errors.hpp"

#ifdef KXQ_HAVE_OPENMP
#include <omp.h>
#endif

namespace kxq {

double scenario_value(const ScenarioContext& ctx, const QuerySet& q, const RejectionVector& r) {
  const Matching m = solve_policy(ctx.policy, ctx.pool, ctx.spec, q, r);
  return post_match_expected_weight(ctx.pool, m, ctx.spec, q, r);
}

std::vector<double> scenario_values_serial(const ScenarioContext& ctx, const QuerySet& q,
                                           std::span<const RejectionVector> scenarios) {
  std::vector<double> out(scenarios.size());
  for (std::size_t i = 0; i < scenarios.size(); ++i) out[i] = scenario_value(ctx, q, scenarios[i]);
  return out;
}

std::vector<double> scenario_values_parallel(const ScenarioContext& ctx, const QuerySet& q,
                                             std::span<const RejectionVector> scenarios) {
#ifdef KXQ_HAVE_OPENMP
  std::vector<double> out(scenarios.size());
  const auto n = static_cast<long>(scenarios.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = scenario_value(ctx, q, scenarios[static_cast<std::size_t>(i)]);
  }
  return out;
#else
  return scenario_values_serial(ctx, q, scenarios);
#endif
}

double weighted_sum(std::span<const double> values, std::span<const double> weights) {
  if (values.size() != weights.size()) throw ValidationError("one weight per value is required");
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) total += weights[i] * values[i];
  return total;
}

bool parallel_kernels_available() noexcept {
#ifdef KXQ_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

int parallel_thread_count() noexcept {
#ifdef KXQ_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace kxq

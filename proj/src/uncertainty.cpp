#include "kxq/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kxq/errors.hpp"

namespace kxq {

DeadVector combine(const RejectionVector& r, const FailureVector& f) {
  if (r.size() != f.size()) throw ValidationError("rejection and failure vectors differ in length");
  DeadVector dead(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto e = static_cast<EdgeId>(i);
    if (r[e] || f[e]) dead.set(e);
  }
  return dead;
}

bool consistent(const QuerySet& q, const RejectionVector& r) noexcept {
  if (q.size() != r.size()) return false;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto e = static_cast<EdgeId>(i);
    if (r[e] && !q[e]) return false;
  }
  return true;
}

namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

DistributionSpec::DistributionSpec(std::vector<EdgeProbabilities> per_edge, DistributionProvenance provenance)
    : per_edge_(std::move(per_edge)), provenance_(std::move(provenance)) {
  for (std::size_t i = 0; i < per_edge_.size(); ++i) {
    const auto& p = per_edge_[i];
    if (!is_probability(p.p_reject) || !is_probability(p.p_success_queried) ||
        !is_probability(p.p_success_unqueried)) {
      throw ValidationError("edge " + std::to_string(i) + ": probabilities must lie in [0, 1]");
    }
  }
}

double DistributionSpec::rejection_probability(EdgeId e, const QuerySet&, const RejectionVector&) const {
  return at(e).p_reject;
}

double DistributionSpec::survival(EdgeId e, const QuerySet& q, const RejectionVector& r) const {
  if (r[e]) return 0.0;
  const auto& p = at(e);
  return q[e] ? p.p_success_queried : p.p_success_unqueried;
}

DistributionSpec make_simple(const ExchangeGraph& graph) {
  return DistributionSpec(std::vector<EdgeProbabilities>(graph.edge_count(), {0.5, 1.0, 0.5}),
                          DistributionProvenance{"simple", 0, {}});
}

DistributionSpec make_kpd(const ExchangeGraph& graph, std::span<const EdgeId> high_risk, std::uint64_t seed) {
  std::vector<char> risky(graph.edge_count(), 0);
  for (EdgeId e : high_risk) {
    if (e < 0 || static_cast<std::size_t>(e) >= graph.edge_count()) {
      throw ValidationError("high-risk edge " + std::to_string(e) + " is not an edge of the graph");
    }
    risky[static_cast<std::size_t>(e)] = 1;
  }
  const CounterStream stream(seed, Phase::distribution);
  auto draw = [](double u, double lo, double hi) { return lo + (hi - lo) * u; };
  std::vector<EdgeProbabilities> per_edge(graph.edge_count());
  for (std::size_t i = 0; i < per_edge.size(); ++i) {
    const auto s = stream.child(i);
    auto& p = per_edge[i];
    p.p_reject = draw(s.uniform(0), 0.25, 0.43);
    if (risky[i]) {
      p.p_success_queried = draw(s.uniform(1), 0.2, 0.5);
      p.p_success_unqueried = draw(s.uniform(2), 0.0, 0.2);
    } else {
      p.p_success_queried = draw(s.uniform(1), 0.9, 1.0);
      p.p_success_unqueried = draw(s.uniform(2), 0.8, 0.9);
    }
  }
  std::vector<EdgeId> recorded(high_risk.begin(), high_risk.end());
  std::sort(recorded.begin(), recorded.end());
  recorded.erase(std::unique(recorded.begin(), recorded.end()), recorded.end());
  return DistributionSpec(std::move(per_edge), DistributionProvenance{"kpd", seed, std::move(recorded)});
}

std::vector<EdgeId> pick_high_risk_edges(const ExchangeGraph& graph, double fraction, std::uint64_t seed) {
  if (!is_probability(fraction)) throw ValidationError("high-risk fraction must lie in [0, 1]");
  const auto m = graph.edge_count();
  const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(m)));
  std::vector<EdgeId> ids(m);
  std::iota(ids.begin(), ids.end(), 0);
  // Partial Fisher-Yates.
  SplitMix64 rng(seed, Phase::high_risk);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(m - i));
    std::swap(ids[i], ids[j]);
  }
  ids.resize(k);
  std::sort(ids.begin(), ids.end());
  return ids;
}

RejectionVector sample_rejections(const DistributionSpec& spec, const QuerySet& q, const CounterStream& stream) {
  if (q.size() != spec.size()) throw ValidationError("query set length does not match the distribution");
  RejectionVector r(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto e = static_cast<EdgeId>(i);
    if (q[e] && stream.uniform(i) < spec.at(e).p_reject) r.set(e);
  }
  return r;
}

FailureVector sample_failures(const DistributionSpec& spec, const QuerySet& q, const RejectionVector& r,
                              const CounterStream& stream) {
  if (q.size() != spec.size() || !consistent(q, r)) {
    throw ValidationError("rejections are inconsistent with the query set");
  }
  FailureVector f(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto e = static_cast<EdgeId>(i);
    if (r[e]) continue;
    const auto& p = spec.at(e);
    const double success = q[e] ? p.p_success_queried : p.p_success_unqueried;
    if (stream.uniform(i) >= success) f.set(e);
  }
  return f;
}

std::vector<RejectionScenario> enumerate_rejection_scenarios(const DistributionSpec& spec, const QuerySet& q,
                                                             int cap) {
  if (q.size() != spec.size()) throw ValidationError("query set length does not match the distribution");
  const auto queried = q.members();
  if (static_cast<long>(queried.size()) > cap) {
    throw CapacityError("exact enumeration of " + std::to_string(queried.size()) +
                        " queried edges exceeds the cap of " + std::to_string(cap) +
                        "; evaluate with sampled scenarios instead");
  }
  const std::size_t count = std::size_t{1} << queried.size();
  std::vector<RejectionScenario> out;
  out.reserve(count);
  for (std::size_t pattern = 0; pattern < count; ++pattern) {
    RejectionScenario s{RejectionVector(q.size()), 1.0};
    for (std::size_t i = 0; i < queried.size(); ++i) {
      const double p_reject = spec.at(queried[i]).p_reject;
      if (pattern >> i & 1U) {
        s.rejections.set(queried[i]);
        s.probability *= p_reject;
      } else {
        s.probability *= 1.0 - p_reject;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

double overall_death_probability(const DistributionSpec& spec, EdgeId e, bool queried) {
  const auto& p = spec.at(e);
  if (queried) return p.p_reject + (1.0 - p.p_reject) * (1.0 - p.p_success_queried);
  return 1.0 - p.p_success_unqueried;
}

DeathMonotonicityReport check_death_monotonicity(const DistributionSpec& spec) {
  DeathMonotonicityReport report;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto e = static_cast<EdgeId>(i);
    if (overall_death_probability(spec, e, true) > overall_death_probability(spec, e, false) + 1e-12) {
      report.violating_edges.push_back(e);
    }
  }
  report.passed = report.violating_edges.empty();
  return report;
}

}  // namespace kxq

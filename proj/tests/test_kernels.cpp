#include <doctest.h>

#include "kxq/objective.hpp"
#include "kxq/scenario_kernels.hpp"

using namespace kxq;

TEST_CASE("parallel scenario kernel reproduces the serial kernel bit for bit") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto g = generate_random_graph(40, 0.03, seed);
    const StructurePool pool(g, StructureCaps{});
    const auto spec = make_kpd(g, pick_high_risk_edges(g, 0.2, seed), seed);
    std::vector<EdgeId> first_edges;
    for (EdgeId e = 0; e < static_cast<EdgeId>(std::min<std::size_t>(12, g.edge_count())); ++e) first_edges.push_back(e);
    const auto q = QuerySet::of(g.edge_count(), first_edges);
    std::vector<RejectionVector> scenarios;
    const CounterStream root(seed, Phase::rejection);
    for (std::uint64_t s = 0; s < 500; ++s) scenarios.push_back(sample_rejections(spec, q, root.child(s)));

    for (auto policy : {PolicyKind::max_weight, PolicyKind::failure_aware}) {
      const ScenarioContext ctx{pool, spec, policy};
      const auto serial = scenario_values_serial(ctx, q, scenarios);
      const auto parallel = scenario_values_parallel(ctx, q, scenarios);
      REQUIRE(serial.size() == scenarios.size());
      CHECK(serial == parallel);
      for (std::size_t i = 0; i < scenarios.size(); i += 97) CHECK(serial[i] == scenario_value(ctx, q, scenarios[i]));
    }
  }
}

TEST_CASE("objective values do not depend on the kernel choice") {
  const auto g = generate_random_graph(50, 0.02, 3);
  EvalConfig serial_cfg;
  serial_cfg.exact_cap = 4;  // force sampling above three edges
  serial_cfg.samples = 300;
  EvalConfig parallel_cfg = serial_cfg;
  parallel_cfg.parallel = true;
  ObjectiveEvaluator a(g, make_simple(g), PolicyKind::max_weight, serial_cfg);
  ObjectiveEvaluator b(g, make_simple(g), PolicyKind::max_weight, parallel_cfg);
  for (std::size_t k : {0u, 2u, 6u, 10u}) {
    std::vector<EdgeId> edges;
    for (EdgeId e = 0; e < static_cast<EdgeId>(std::min(k, g.edge_count())); ++e) edges.push_back(e);
    const auto q = QuerySet::of(g.edge_count(), edges);
    CHECK(a.value(q) == b.value(q));
  }
  CHECK(a.oracle_calls() == b.oracle_calls());
}

TEST_CASE("weighted sum accumulates in index order") {
  const std::vector<double> v{1.0, 2.0, 4.0};
  const std::vector<double> w{0.5, 0.25, 0.125};
  CHECK(weighted_sum(v, w) == 1.5);
  CHECK(weighted_sum({}, {}) == 0.0);
}

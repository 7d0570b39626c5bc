// Serial reference kernel against the OpenMP kernel on sampled rejection
// scenarios. Arguments: vertices, scenarios.

#include <benchmark/benchmark.h>

#include "kxq/objective.hpp"
#include "kxq/scenario_kernels.hpp"

namespace {

struct Workload {
  kxq::ExchangeGraph graph;
  kxq::StructurePool pool;
  kxq::DistributionSpec spec;
  kxq::QuerySet q;
  std::vector<kxq::RejectionVector> scenarios;
};

Workload make_workload(int n, int scenario_count) {
  Workload w;
  // Edge probability scaled so the expected in-degree stays near one.
  w.graph = kxq::generate_random_graph(n, 1.0 / n, 17);
  w.pool = kxq::StructurePool(w.graph, kxq::StructureCaps{});
  w.spec = kxq::make_simple(w.graph);
  w.q = kxq::QuerySet(w.graph.edge_count());
  for (kxq::EdgeId e = 0; e < static_cast<kxq::EdgeId>(w.graph.edge_count()); e += 2) w.q.set(e);
  const kxq::CounterStream root(17, kxq::Phase::rejection);
  for (int s = 0; s < scenario_count; ++s) {
    w.scenarios.push_back(kxq::sample_rejections(w.spec, w.q, root.child(static_cast<std::uint64_t>(s))));
  }
  return w;
}

template <bool Parallel>
void BM_ScenarioKernel(benchmark::State& state) {
  const Workload w = make_workload(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const kxq::ScenarioContext ctx{w.pool, w.spec, kxq::PolicyKind::max_weight};
  for (auto _ : state) {
    auto values = Parallel ? kxq::scenario_values_parallel(ctx, w.q, w.scenarios)
                           : kxq::scenario_values_serial(ctx, w.q, w.scenarios);
    benchmark::DoNotOptimize(values.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(1));
  state.counters["structures"] = static_cast<double>(w.pool.size());
  state.counters["threads"] = Parallel ? kxq::parallel_thread_count() : 1;
}

void sizes(benchmark::internal::Benchmark* b) {
  for (int n : {50, 100, 200})
    for (int scenarios : {100, 1000}) b->Args({n, scenarios});
  b->Unit(benchmark::kMillisecond);
}

}  // namespace

BENCHMARK(BM_ScenarioKernel<false>)->Name("serial")->Apply(sizes);
BENCHMARK(BM_ScenarioKernel<true>)->Name("parallel")->Apply(sizes);

BENCHMARK_MAIN();

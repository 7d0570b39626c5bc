#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kxq/graph.hpp"
#include "kxq/io.hpp"
#include "kxq/legal_sets.hpp"
#include "kxq/matching.hpp"
#include "kxq/objective.hpp"
#include "kxq/uncertainty.hpp"

namespace kxq {

/// Everything a harness run depends on. Serialized into each run manifest;
/// rerunning from that manifest reproduces the CSV output byte for byte.
struct ExperimentConfig {
  // Graph source: "random", a fixture name, or "file" (graph_file).
  std::string graph_source = "random";
  std::string graph_file;
  int n = 50;
  double p = 0.01;
  int graph_count = 10;
  /// Drop graphs whose only matching is empty.
  bool skip_trivial = true;
  StructureCaps caps{};

  // Distribution: "simple", "kpd" or "file" (distribution_file).
  std::string distribution = "simple";
  std::string distribution_file;
  double high_risk_fraction = 0.0;

  PolicyKind policy = PolicyKind::max_weight;
  std::vector<std::string> methods{"none", "random", "greedy", "mcts"};
  std::vector<int> budgets{3};
  /// 0 disables the per-recipient cap.
  int per_vertex_cap = 0;
  /// Restrict queries to these edge ids (empty: all edges).
  std::vector<EdgeId> ground_edges;

  int exact_cap = kDefaultExactCap;
  int samples = 1000;
  bool parallel = false;

  int mcts_lookahead = 2;
  long mcts_iterations = 1000;
  double mcts_seconds = 0.0;
  std::uint64_t exhaustive_node_cap = 5'000'000;

  int realizations = 10;

  std::vector<int> bootstrap_sizes{10, 30, 50, 100, 1000};
  int bootstrap_replications = 200;

  std::uint64_t seed = 0;
  std::string output_dir = "results";
};

io::Json config_to_json(const ExperimentConfig& cfg);
/// Missing fields keep their defaults; unknown fields are an error.
ExperimentConfig config_from_json(const io::Json& doc);
/// Throws ValidationError describing the first bad field.
void validate_config(const ExperimentConfig& cfg);

/// Single-stage method names accepted by run_single_stage.
const std::vector<std::string>& single_stage_methods();
/// Multi-stage method names accepted by run_multi_stage.
const std::vector<std::string>& multi_stage_methods();

/// One graph with its distribution, ready for a run.
struct Instance {
  int graph_id = 0;
  std::uint64_t graph_seed = 0;
  ExchangeGraph graph;
  DistributionSpec spec;
  std::size_t structure_count = 0;
};

/// Builds the run's graphs in graph-id order. Random graphs are drawn from
/// per-index seeds until `graph_count` non-trivial graphs exist (at most
/// 100 attempts per kept graph).
std::vector<Instance> build_instances(const ExperimentConfig& cfg);

EvalConfig eval_config_for(const ExperimentConfig& cfg, const Instance& inst);
LegalEdgeSets legal_sets_for(const ExperimentConfig& cfg, const ExchangeGraph& graph, int budget);

/// One CSV row of a single-stage run.
struct MethodResult {
  int graph_id = 0;
  std::string method;
  int budget = 0;
  std::string status = "ok";  // or "skipped"
  std::string note;
  double value = 0.0;
  double baseline = 0.0;
  double delta_max = 0.0;
  std::vector<EdgeId> queried;
  double final_value = 0.0;
  std::uint64_t oracle_calls = 0;
  double seconds = 0.0;  // wall clock; reported separately
};

/// (V_X - V(empty)) / V(empty); NaN when the baseline is 0.
double delta_max(double value, double baseline);

/// 100 (v_opt - v_method) / v_opt. Throws ValidationError for v_opt <= 0
/// and std::logic_error when v_method beats v_opt by more than 1e-9
/// relative.
double compute_pct_opt(double v_opt, double v_method);

/// Nearest-rank percentile (rank ceil(pct/100 * n), 1-based) of the finite
/// values; NaN for an empty input.
double nearest_rank_percentile(std::vector<double> values, double pct);

struct SummaryRow {
  std::string method;
  int budget = 0;
  std::size_t count = 0;
  double p10 = 0, p50 = 0, p90 = 0;
};

/// P10/P50/P90 of delta_max per (method, budget), methods in first-seen
/// order.
std::vector<SummaryRow> summarize(const std::vector<MethodResult>& rows);

struct SingleStageRun {
  std::vector<Instance> instances;
  std::vector<MethodResult> rows;
};

/// Every instance x method x budget of a single-stage experiment. Each row
/// gets a fresh objective evaluator so oracle-call counts are per method.
SingleStageRun run_single_stage(const ExperimentConfig& cfg);
SingleStageRun run_single_stage(const ExperimentConfig& cfg, std::vector<Instance> instances);

/// One simulated sequential querying episode, or (realization = -1) the
/// mean over episodes.
struct MultiStageRow {
  int graph_id = 0;
  std::string method;
  int budget = 0;
  int realization = -1;
  double value = 0.0;  // final expected weight, or mean of them
  double std_error = 0.0;
  double baseline = 0.0;
  double delta_max = 0.0;
  std::vector<EdgeId> queried;
  std::vector<EdgeId> rejected;
  std::uint64_t oracle_calls = 0;
  double seconds = 0.0;
};

struct MultiStageRun {
  std::vector<Instance> instances;
  std::vector<MultiStageRow> rows;
};

/// Sequential loop per realization: recommend, reveal the realization's
/// response for that edge, repeat up to the budget, then clear. Responses
/// are common random numbers: realization k answers edge e the same way for
/// every method.
MultiStageRun run_multi_stage(const ExperimentConfig& cfg);
MultiStageRun run_multi_stage(const ExperimentConfig& cfg, std::vector<Instance> instances);

/// Response of edge e in realization k of graph g: true when rejected.
bool realized_rejection(std::uint64_t seed, int graph_id, int realization, EdgeId e, double p_reject);

struct BootstrapRow {
  int graph_id = 0;
  std::size_t query_size = 0;
  int sample_size = 0;
  double pool_mean = 0.0;
  double std_of_means = 0.0;
  double normalized_std = 0.0;
};

/// Resamples `pool` with replacement: for each N, `replications` means of N
/// draws; reports their standard deviation over the pool mean.
std::vector<BootstrapRow> bootstrap_objective_std(const std::vector<double>& pool, const std::vector<int>& sample_sizes,
                                                  int replications, std::uint64_t seed);

/// Bootstrap study on greedy edge sets: per instance, the end node of the
/// greedy descent at budgets[0], a pool of `samples` scenario values, then
/// bootstrap_objective_std.
std::vector<BootstrapRow> run_bootstrap(const ExperimentConfig& cfg);

struct OptGapRow {
  int graph_id = 0;
  int budget = 0;
  double v_opt = 0.0;
  double v_greedy = 0.0;
  double pct_opt = 0.0;
  bool match = false;
  std::uint64_t greedy_calls = 0;
  std::uint64_t exhaustive_calls = 0;
  std::string status = "ok";
};

/// Greedy against exhaustive search per instance and budget. A "match"
/// means a gap below 1e-6 percent. Instances with V_OPT <= 0 or where the
/// node cap trips are marked skipped.
std::vector<OptGapRow> run_opt_gap(const ExperimentConfig& cfg);

// CSV rendering. Columns are fixed; see the README.
std::string single_stage_csv(const std::vector<MethodResult>& rows);
std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string timings_csv(const std::vector<MethodResult>& rows);
std::string multi_stage_csv(const std::vector<MultiStageRow>& rows);
std::string multi_stage_timings_csv(const std::vector<MultiStageRow>& rows);
std::string bootstrap_csv(const std::vector<BootstrapRow>& rows);
std::string opt_gap_csv(const std::vector<OptGapRow>& rows);
std::string instances_csv(const std::vector<Instance>& instances);

}  // namespace kxq

#include "kxq/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "kxq/errors.hpp"
#include "kxq/fixtures.hpp"
#include "kxq/multistage.hpp"
#include "kxq/selection.hpp"

namespace kxq {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::uint64_t derive(std::uint64_t seed, Phase phase, std::uint64_t index, std::uint64_t counter = 0) {
  return CounterStream(seed, phase, index).bits(counter);
}

// One list of (name, member) pairs drives both JSON directions.
template <class Config, class Visitor>
void visit_fields(Config& c, Visitor&& v) {
  v("graph_source", c.graph_source);
  v("graph_file", c.graph_file);
  v("n", c.n);
  v("p", c.p);
  v("graph_count", c.graph_count);
  v("skip_trivial", c.skip_trivial);
  v("max_cycle_len", c.caps.max_cycle_len);
  v("max_chain_len", c.caps.max_chain_len);
  v("distribution", c.distribution);
  v("distribution_file", c.distribution_file);
  v("high_risk_fraction", c.high_risk_fraction);
  v("policy", c.policy);
  v("methods", c.methods);
  v("budgets", c.budgets);
  v("per_vertex_cap", c.per_vertex_cap);
  v("ground_edges", c.ground_edges);
  v("exact_cap", c.exact_cap);
  v("samples", c.samples);
  v("parallel", c.parallel);
  v("mcts_lookahead", c.mcts_lookahead);
  v("mcts_iterations", c.mcts_iterations);
  v("mcts_seconds", c.mcts_seconds);
  v("exhaustive_node_cap", c.exhaustive_node_cap);
  v("realizations", c.realizations);
  v("bootstrap_sizes", c.bootstrap_sizes);
  v("bootstrap_replications", c.bootstrap_replications);
  v("seed", c.seed);
  v("output_dir", c.output_dir);
}

struct FieldWriter {
  io::Json& out;
  template <class T>
  void operator()(const char* name, const T& value) {
    out[name] = value;
  }
  void operator()(const char* name, const PolicyKind& value) { out[name] = to_string(value); }
};

struct FieldReader {
  const io::Json& in;
  std::set<std::string>& used;
  template <class T>
  void operator()(const char* name, T& value) {
    if (!in.contains(name)) return;
    used.insert(name);
    try {
      value = in.at(name).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ValidationError(std::string("config field '") + name + "' has the wrong type");
    }
  }
  void operator()(const char* name, PolicyKind& value) {
    if (!in.contains(name)) return;
    used.insert(name);
    if (!in.at(name).is_string()) throw ValidationError("config field 'policy' must be a string");
    value = parse_policy(in.at(name).get<std::string>());
  }
};

std::string join_ids(const std::vector<EdgeId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(ids[i]);
  }
  return out;
}

std::string csv_text(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

DistributionSpec make_distribution(const ExperimentConfig& cfg, const ExchangeGraph& g, std::uint64_t index) {
  if (cfg.distribution == "simple") return make_simple(g);
  if (cfg.distribution == "kpd") {
    const auto high = pick_high_risk_edges(g, cfg.high_risk_fraction, derive(cfg.seed, Phase::high_risk, index));
    return make_kpd(g, high, derive(cfg.seed, Phase::distribution, index));
  }
  return io::distribution_from_json(io::read_json_file(cfg.distribution_file), g.edge_count());
}

void check_methods(const std::vector<std::string>& methods, const std::vector<std::string>& known, const char* what) {
  for (const auto& m : methods) {
    if (std::find(known.begin(), known.end(), m) == known.end()) {
      throw ValidationError(std::string("unknown ") + what + " method '" + m + "'");
    }
  }
}

}  // namespace

io::Json config_to_json(const ExperimentConfig& cfg) {
  io::Json out = io::Json::object();
  visit_fields(cfg, FieldWriter{out});
  return out;
}

ExperimentConfig config_from_json(const io::Json& doc) {
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");
  ExperimentConfig cfg;
  std::set<std::string> used;
  visit_fields(cfg, FieldReader{doc, used});
  for (const auto& [key, _] : doc.items()) {
    if (!used.count(key)) throw ValidationError("unknown config field '" + key + "'");
  }
  return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& msg) { throw ValidationError("config: " + msg); };
  if (cfg.graph_source == "random") {
    if (cfg.n < 1) fail("n must be >= 1");
    if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) fail("p must lie in [0, 1]");
    if (cfg.graph_count < 1) fail("graph_count must be >= 1");
  } else if (cfg.graph_source == "file") {
    if (cfg.graph_file.empty()) fail("graph_source 'file' needs graph_file");
  } else {
    const auto names = fixtures::names();
    if (std::find(names.begin(), names.end(), cfg.graph_source) == names.end()) {
      fail("graph_source must be 'random', 'file' or a fixture name");
    }
  }
  if (cfg.caps.max_cycle_len < 1 || cfg.caps.max_chain_len < 1) fail("structure caps must be >= 1");
  if (cfg.distribution == "file") {
    if (cfg.distribution_file.empty()) fail("distribution 'file' needs distribution_file");
    if (cfg.graph_source == "random") fail("a distribution file needs a fixed graph");
  } else if (cfg.distribution != "simple" && cfg.distribution != "kpd") {
    fail("distribution must be 'simple', 'kpd' or 'file'");
  }
  if (!(cfg.high_risk_fraction >= 0.0 && cfg.high_risk_fraction <= 1.0)) fail("high_risk_fraction must lie in [0, 1]");
  if (cfg.methods.empty()) fail("methods must not be empty");
  if (cfg.budgets.empty()) fail("budgets must not be empty");
  for (int b : cfg.budgets)
    if (b < 0) fail("budgets must be >= 0");
  if (cfg.per_vertex_cap < 0) fail("per_vertex_cap must be >= 0");
  if (cfg.exact_cap < 0 || cfg.exact_cap > 20) fail("exact_cap must lie in [0, 20]");
  if (cfg.samples < 1) fail("samples must be >= 1");
  if (cfg.mcts_lookahead < 1) fail("mcts_lookahead must be >= 1");
  if (cfg.mcts_seconds <= 0.0 && cfg.mcts_iterations < 1) fail("mcts_iterations must be >= 1");
  if (cfg.mcts_seconds < 0.0) fail("mcts_seconds must be >= 0");
  if (cfg.exhaustive_node_cap < 1) fail("exhaustive_node_cap must be >= 1");
  if (cfg.realizations < 1) fail("realizations must be >= 1");
  if (cfg.bootstrap_replications < 2) fail("bootstrap_replications must be >= 2");
  for (int n : cfg.bootstrap_sizes)
    if (n < 1) fail("bootstrap_sizes must be >= 1");
}

const std::vector<std::string>& single_stage_methods() {
  static const std::vector<std::string> names{"none", "random", "greedy", "mcts", "exhaustive",
                                              "fail-aware-no-queries"};
  return names;
}

const std::vector<std::string>& multi_stage_methods() {
  static const std::vector<std::string> names{"none", "random", "greedy", "mcts"};
  return names;
}

std::vector<Instance> build_instances(const ExperimentConfig& cfg) {
  validate_config(cfg);
  std::vector<Instance> out;
  auto finish = [&](Instance inst) {
    inst.structure_count = enumerate_structures(inst.graph, cfg.caps).size();
    if (!cfg.ground_edges.empty()) {
      for (EdgeId e : cfg.ground_edges) {
        if (e < 0 || static_cast<std::size_t>(e) >= inst.graph.edge_count()) {
          throw ValidationError("config: ground edge " + std::to_string(e) + " is not an edge of graph " +
                                std::to_string(inst.graph_id));
        }
      }
    }
    return inst;
  };

  if (cfg.graph_source != "random") {
    Instance inst;
    inst.graph = cfg.graph_source == "file" ? io::load_graph(cfg.graph_file) : fixtures::by_name(cfg.graph_source);
    inst.spec = make_distribution(cfg, inst.graph, 0);
    out.push_back(finish(std::move(inst)));
    return out;
  }

  const long max_attempts = 100L * cfg.graph_count;
  for (long attempt = 0; static_cast<int>(out.size()) < cfg.graph_count; ++attempt) {
    if (attempt >= max_attempts) {
      throw ValidationError("could only build " + std::to_string(out.size()) + " non-trivial graphs in " +
                            std::to_string(max_attempts) + " attempts; raise n or p");
    }
    const auto index = static_cast<std::uint64_t>(attempt);
    Instance inst;
    inst.graph_id = static_cast<int>(attempt);
    inst.graph_seed = derive(cfg.seed, Phase::graph, index);
    inst.graph = generate_random_graph(cfg.n, cfg.p, inst.graph_seed);
    inst = finish(std::move(inst));
    if (cfg.skip_trivial && inst.structure_count == 0) continue;
    inst.spec = make_distribution(cfg, inst.graph, index);
    out.push_back(std::move(inst));
  }
  return out;
}

EvalConfig eval_config_for(const ExperimentConfig& cfg, const Instance& inst) {
  EvalConfig e;
  e.exact_cap = cfg.exact_cap;
  e.samples = cfg.samples;
  e.seed = derive(cfg.seed, Phase::rejection, static_cast<std::uint64_t>(inst.graph_id));
  e.parallel = cfg.parallel;
  return e;
}

LegalEdgeSets legal_sets_for(const ExperimentConfig& cfg, const ExchangeGraph& graph, int budget) {
  LegalEdgeSets legal = cfg.per_vertex_cap > 0 ? LegalEdgeSets::composite(graph, budget, cfg.per_vertex_cap)
                                               : LegalEdgeSets::budget(graph, budget);
  return cfg.ground_edges.empty() ? legal : legal.restricted_to(cfg.ground_edges);
}

double delta_max(double value, double baseline) {
  if (baseline == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (value - baseline) / baseline;
}

double compute_pct_opt(double v_opt, double v_method) {
  if (!(v_opt > 0.0)) throw ValidationError("optimality gap needs a positive optimum");
  if (v_method > v_opt + 1e-9 * v_opt) throw std::logic_error("method value exceeds the optimum");
  return std::max(0.0, 100.0 * (v_opt - v_method) / v_opt);
}

double nearest_rank_percentile(std::vector<double> values, double pct) {
  values.erase(std::remove_if(values.begin(), values.end(), [](double x) { return !std::isfinite(x); }), values.end());
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  const auto rank = static_cast<std::size_t>(std::max(1.0, std::ceil(pct / 100.0 * n)));
  return values[std::min(rank, values.size()) - 1];
}

std::vector<SummaryRow> summarize(const std::vector<MethodResult>& rows) {
  std::vector<std::pair<std::string, int>> keys;
  for (const auto& r : rows) {
    const std::pair key{r.method, r.budget};
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  std::vector<SummaryRow> out;
  for (const auto& [method, budget] : keys) {
    std::vector<double> deltas;
    for (const auto& r : rows)
      if (r.method == method && r.budget == budget && r.status == "ok") deltas.push_back(r.delta_max);
    SummaryRow s;
    s.method = method;
    s.budget = budget;
    s.count = deltas.size();
    s.p10 = nearest_rank_percentile(deltas, 10);
    s.p50 = nearest_rank_percentile(deltas, 50);
    s.p90 = nearest_rank_percentile(deltas, 90);
    out.push_back(s);
  }
  return out;
}

SingleStageRun run_single_stage(const ExperimentConfig& cfg) { return run_single_stage(cfg, build_instances(cfg)); }

SingleStageRun run_single_stage(const ExperimentConfig& cfg, std::vector<Instance> instances) {
  validate_config(cfg);
  check_methods(cfg.methods, single_stage_methods(), "single-stage");
  SingleStageRun run;
  for (const auto& inst : instances) {
    const EvalConfig eval = eval_config_for(cfg, inst);
    ObjectiveEvaluator base(inst.graph, inst.spec, cfg.policy, eval, cfg.caps);
    const double baseline = base.value(base.empty_query());

    for (int budget : cfg.budgets) {
      const auto legal = legal_sets_for(cfg, inst.graph, budget);
      const auto gid = static_cast<std::uint64_t>(inst.graph_id);
      const auto bud = static_cast<std::uint64_t>(budget);
      for (const auto& method : cfg.methods) {
        MethodResult row;
        row.graph_id = inst.graph_id;
        row.method = method;
        row.budget = budget;
        row.baseline = baseline;
        const auto start = Clock::now();
        const PolicyKind policy = method == "fail-aware-no-queries" ? PolicyKind::failure_aware : cfg.policy;
        ObjectiveEvaluator obj(inst.graph, inst.spec, policy, eval, cfg.caps);

        SelectionResult result;
        if (method == "none" || method == "fail-aware-no-queries") {
          result.queried = obj.empty_query();
          result.value = obj.value(result.queried);
          result.final_value = result.value;
          result.oracle_calls = obj.oracle_calls();
        } else if (method == "random") {
          result = random_selection(obj, legal, derive(cfg.seed, Phase::random_method, gid, bud));
        } else if (method == "greedy") {
          result = greedy_single_stage(obj, legal);
        } else if (method == "mcts") {
          const MctsConfig mc{cfg.mcts_lookahead, cfg.mcts_iterations, cfg.mcts_seconds,
                              derive(cfg.seed, Phase::rollout, gid, bud)};
          result = mcts_single_stage(obj, legal, mc);
        } else {  // exhaustive
          try {
            result = exhaustive_opt(obj, legal, cfg.exhaustive_node_cap);
          } catch (const NodeCapExceeded& e) {
            result = e.partial();
            row.status = "skipped";
            row.note = "node cap of " + std::to_string(cfg.exhaustive_node_cap) + " exceeded; value is partial";
          }
        }
        row.seconds = seconds_since(start);
        row.value = result.value;
        row.final_value = result.final_value;
        row.queried = result.queried.members();
        row.oracle_calls = result.oracle_calls;
        row.delta_max = delta_max(row.value, baseline);
        run.rows.push_back(std::move(row));
      }
    }
  }
  run.instances = std::move(instances);
  return run;
}

bool realized_rejection(std::uint64_t seed, int graph_id, int realization, EdgeId e, double p_reject) {
  const CounterStream stream =
      CounterStream(seed, Phase::response, static_cast<std::uint64_t>(graph_id)).child(static_cast<std::uint64_t>(realization));
  return stream.uniform(static_cast<std::uint64_t>(e)) < p_reject;
}

MultiStageRun run_multi_stage(const ExperimentConfig& cfg) { return run_multi_stage(cfg, build_instances(cfg)); }

MultiStageRun run_multi_stage(const ExperimentConfig& cfg, std::vector<Instance> instances) {
  validate_config(cfg);
  check_methods(cfg.methods, multi_stage_methods(), "multi-stage");
  MultiStageRun run;
  for (const auto& inst : instances) {
    const EvalConfig eval = eval_config_for(cfg, inst);
    ObjectiveEvaluator base(inst.graph, inst.spec, cfg.policy, eval, cfg.caps);
    const double baseline = base.value(base.empty_query());
    const auto gid = static_cast<std::uint64_t>(inst.graph_id);

    for (int budget : cfg.budgets) {
      const auto legal = legal_sets_for(cfg, inst.graph, budget);
      for (const auto& method : cfg.methods) {
        ObjectiveEvaluator obj(inst.graph, inst.spec, cfg.policy, eval, cfg.caps);
        std::vector<MultiStageRow> episodes;
        for (int k = 0; k < cfg.realizations; ++k) {
          const auto start = Clock::now();
          const std::uint64_t calls_before = obj.oracle_calls();
          const auto kk = static_cast<std::uint64_t>(k);
          SplitMix64 random_rng(derive(cfg.seed, Phase::random_method, gid, kk));
          QuerySet q = obj.empty_query();
          RejectionVector r(q.size());
          for (int step = 0; step < budget; ++step) {
            std::optional<EdgeId> next;
            if (method == "greedy") {
              if (auto b = greedy_next_edge(obj, legal, q, r)) next = b->edge;
            } else if (method == "mcts") {
              const MultiStageMctsConfig mc{cfg.mcts_lookahead, cfg.mcts_iterations, cfg.mcts_seconds,
                                            CounterStream(cfg.seed, Phase::rollout, gid).child(kk).bits(
                                                static_cast<std::uint64_t>(step))};
              if (auto rec = mcts_next_edge(obj, legal, q, r, mc)) next = rec->edge;
            } else if (method == "random") {
              const auto ext = legal_extensions(q, legal);
              if (!ext.empty()) next = ext[static_cast<std::size_t>(random_rng.below(ext.size()))];
            }
            if (!next) break;
            q.set(*next);
            if (realized_rejection(cfg.seed, inst.graph_id, k, *next, inst.spec.rejection_probability(*next, q, r))) {
              r.set(*next);
            }
          }
          MultiStageRow row;
          row.graph_id = inst.graph_id;
          row.method = method;
          row.budget = budget;
          row.realization = k;
          row.value = obj.outcome_value(q, r);
          row.baseline = baseline;
          row.delta_max = delta_max(row.value, baseline);
          row.queried = q.members();
          row.rejected = r.members();
          row.oracle_calls = obj.oracle_calls() - calls_before;
          row.seconds = seconds_since(start);
          episodes.push_back(std::move(row));
        }
        MultiStageRow mean;
        mean.graph_id = inst.graph_id;
        mean.method = method;
        mean.budget = budget;
        mean.baseline = baseline;
        for (const auto& e : episodes) {
          mean.value += e.value;
          mean.oracle_calls += e.oracle_calls;
          mean.seconds += e.seconds;
        }
        const auto n = static_cast<double>(episodes.size());
        mean.value /= n;
        double sq = 0.0;
        for (const auto& e : episodes) sq += (e.value - mean.value) * (e.value - mean.value);
        mean.std_error = episodes.size() > 1 ? std::sqrt(sq / (n - 1) / n) : 0.0;
        mean.delta_max = delta_max(mean.value, baseline);
        for (auto& e : episodes) run.rows.push_back(std::move(e));
        run.rows.push_back(std::move(mean));
      }
    }
  }
  run.instances = std::move(instances);
  return run;
}

std::vector<BootstrapRow> bootstrap_objective_std(const std::vector<double>& pool, const std::vector<int>& sample_sizes,
                                                  int replications, std::uint64_t seed) {
  if (pool.empty()) throw ValidationError("bootstrap needs a non-empty pool");
  if (replications < 2) throw ValidationError("bootstrap needs at least two replications");
  double pool_mean = 0.0;
  for (double x : pool) pool_mean += x;
  pool_mean /= static_cast<double>(pool.size());

  std::vector<BootstrapRow> out;
  SplitMix64 rng(seed, Phase::bootstrap);
  for (int n : sample_sizes) {
    if (n < 1) throw ValidationError("bootstrap sample sizes must be >= 1");
    std::vector<double> means;
    means.reserve(static_cast<std::size_t>(replications));
    for (int rep = 0; rep < replications; ++rep) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += pool[static_cast<std::size_t>(rng.below(pool.size()))];
      means.push_back(sum / n);
    }
    double m = 0.0;
    for (double x : means) m += x;
    m /= static_cast<double>(means.size());
    double sq = 0.0;
    for (double x : means) sq += (x - m) * (x - m);
    BootstrapRow row;
    row.sample_size = n;
    row.pool_mean = pool_mean;
    row.std_of_means = std::sqrt(sq / static_cast<double>(means.size() - 1));
    row.normalized_std = pool_mean != 0.0 ? row.std_of_means / pool_mean : std::numeric_limits<double>::quiet_NaN();
    out.push_back(row);
  }
  return out;
}

std::vector<BootstrapRow> run_bootstrap(const ExperimentConfig& cfg) {
  const auto instances = build_instances(cfg);
  std::vector<BootstrapRow> out;
  for (const auto& inst : instances) {
    const EvalConfig eval = eval_config_for(cfg, inst);
    ObjectiveEvaluator obj(inst.graph, inst.spec, cfg.policy, eval, cfg.caps);
    const auto legal = legal_sets_for(cfg, inst.graph, cfg.budgets.front());
    const auto greedy = greedy_single_stage(obj, legal);
    const auto pool = obj.sampled_scenario_values(greedy.final_set, cfg.samples, eval.seed);
    auto rows = bootstrap_objective_std(pool, cfg.bootstrap_sizes, cfg.bootstrap_replications,
                                        derive(cfg.seed, Phase::bootstrap, static_cast<std::uint64_t>(inst.graph_id)));
    for (auto& r : rows) {
      r.graph_id = inst.graph_id;
      r.query_size = greedy.final_set.count();
      out.push_back(r);
    }
  }
  return out;
}

std::vector<OptGapRow> run_opt_gap(const ExperimentConfig& cfg) {
  const auto instances = build_instances(cfg);
  std::vector<OptGapRow> out;
  for (const auto& inst : instances) {
    const EvalConfig eval = eval_config_for(cfg, inst);
    for (int budget : cfg.budgets) {
      const auto legal = legal_sets_for(cfg, inst.graph, budget);
      OptGapRow row;
      row.graph_id = inst.graph_id;
      row.budget = budget;
      ObjectiveEvaluator greedy_obj(inst.graph, inst.spec, cfg.policy, eval, cfg.caps);
      const auto greedy = greedy_single_stage(greedy_obj, legal);
      row.v_greedy = greedy.value;
      row.greedy_calls = greedy.oracle_calls;
      ObjectiveEvaluator opt_obj(inst.graph, inst.spec, cfg.policy, eval, cfg.caps);
      try {
        const auto opt = exhaustive_opt(opt_obj, legal, cfg.exhaustive_node_cap);
        row.v_opt = opt.value;
        row.exhaustive_calls = opt.oracle_calls;
        if (row.v_opt > 0.0) {
          row.pct_opt = compute_pct_opt(row.v_opt, row.v_greedy);
          row.match = row.pct_opt < 1e-6;
        } else {
          row.status = "skipped";
        }
      } catch (const NodeCapExceeded& e) {
        row.v_opt = e.partial().value;
        row.status = "skipped";
      }
      out.push_back(row);
    }
  }
  return out;
}

std::string single_stage_csv(const std::vector<MethodResult>& rows) {
  std::ostringstream out;
  out << "graph_id,method,budget,status,value,baseline,delta_max,final_value,oracle_calls,queried_edges,note\n";
  for (const auto& r : rows) {
    out << r.graph_id << ',' << r.method << ',' << r.budget << ',' << r.status << ',' << io::format_double(r.value)
        << ',' << io::format_double(r.baseline) << ',' << io::format_double(r.delta_max) << ','
        << io::format_double(r.final_value) << ',' << r.oracle_calls << ',' << join_ids(r.queried) << ','
        << csv_text(r.note) << '\n';
  }
  return out.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "method,budget,count,delta_max_p10,delta_max_p50,delta_max_p90\n";
  for (const auto& r : rows) {
    out << r.method << ',' << r.budget << ',' << r.count << ',' << io::format_double(r.p10) << ','
        << io::format_double(r.p50) << ',' << io::format_double(r.p90) << '\n';
  }
  return out.str();
}

std::string timings_csv(const std::vector<MethodResult>& rows) {
  std::ostringstream out;
  out << "graph_id,method,budget,seconds\n";
  for (const auto& r : rows)
    out << r.graph_id << ',' << r.method << ',' << r.budget << ',' << io::format_double(r.seconds) << '\n';
  return out.str();
}

std::string multi_stage_csv(const std::vector<MultiStageRow>& rows) {
  std::ostringstream out;
  out << "graph_id,method,budget,realization,value,std_error,baseline,delta_max,oracle_calls,queried_edges,"
         "rejected_edges\n";
  for (const auto& r : rows) {
    out << r.graph_id << ',' << r.method << ',' << r.budget << ','
        << (r.realization < 0 ? std::string("mean") : std::to_string(r.realization)) << ','
        << io::format_double(r.value) << ',' << io::format_double(r.std_error) << ','
        << io::format_double(r.baseline) << ',' << io::format_double(r.delta_max) << ',' << r.oracle_calls << ','
        << join_ids(r.queried) << ',' << join_ids(r.rejected) << '\n';
  }
  return out.str();
}

std::string multi_stage_timings_csv(const std::vector<MultiStageRow>& rows) {
  std::ostringstream out;
  out << "graph_id,method,budget,realization,seconds\n";
  for (const auto& r : rows) {
    out << r.graph_id << ',' << r.method << ',' << r.budget << ','
        << (r.realization < 0 ? std::string("mean") : std::to_string(r.realization)) << ','
        << io::format_double(r.seconds) << '\n';
  }
  return out.str();
}

std::string bootstrap_csv(const std::vector<BootstrapRow>& rows) {
  std::ostringstream out;
  out << "graph_id,query_size,sample_size,pool_mean,std_of_means,normalized_std\n";
  for (const auto& r : rows) {
    out << r.graph_id << ',' << r.query_size << ',' << r.sample_size << ',' << io::format_double(r.pool_mean) << ','
        << io::format_double(r.std_of_means) << ',' << io::format_double(r.normalized_std) << '\n';
  }
  return out.str();
}

std::string opt_gap_csv(const std::vector<OptGapRow>& rows) {
  std::ostringstream out;
  out << "graph_id,budget,status,v_opt,v_greedy,pct_opt,match,greedy_oracle_calls,exhaustive_oracle_calls\n";
  for (const auto& r : rows) {
    out << r.graph_id << ',' << r.budget << ',' << r.status << ',' << io::format_double(r.v_opt) << ','
        << io::format_double(r.v_greedy) << ',' << io::format_double(r.pct_opt) << ',' << (r.match ? 1 : 0) << ','
        << r.greedy_calls << ',' << r.exhaustive_calls << '\n';
  }
  return out.str();
}

std::string instances_csv(const std::vector<Instance>& instances) {
  std::ostringstream out;
  out << "graph_id,graph_seed,vertices,edges,ndds,structures\n";
  for (const auto& i : instances) {
    out << i.graph_id << ',' << i.graph_seed << ',' << i.graph.vertex_count() << ',' << i.graph.edge_count() << ','
        << i.graph.ndd_count() << ',' << i.structure_count << '\n';
  }
  return out.str();
}

}  // namespace kxq

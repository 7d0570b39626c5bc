// kxq: experiment harness and session server.
//
//   kxq gen-graph     write generated graphs and distributions
//   kxq single-stage  one-shot query selection methods
//   kxq multi-stage   sequential querying with simulated responses
//   kxq bootstrap     resampling study of the sampled objective
//   kxq opt-gap       greedy against exhaustive search
//   kxq serve         HTTP JSON session service
//
// Every experiment writes CSV files plus manifest.json into the output
// directory. `--config manifest.json` reruns a previous experiment; flags
// given alongside it override the stored values. KXQ_OUTPUT_DIR overrides
// the output directory unless --output-dir is given.

#include <CLI11.hpp>
#include <httplib.h>

#include <csignal>
#include <cstdlib>
#include <functional>
#include <iostream>

#include "kxq/errors.hpp"
#include "kxq/experiments.hpp"
#include "kxq/scenario_kernels.hpp"
#include "kxq/service.hpp"

namespace {

using kxq::ExperimentConfig;
namespace fs = std::filesystem;

template <class T>
struct is_vector : std::false_type {};
template <class T>
struct is_vector<std::vector<T>> : std::true_type {};

/// Registers one flag per config field. A field is copied onto the final
/// config only when its flag was actually given, so manifest values survive.
class ConfigFlags {
 public:
  explicit ConfigFlags(CLI::App* app) : app_(app) {
    add("--graph-source", &ExperimentConfig::graph_source, "random, file, or a fixture name");
    add("--graph-file", &ExperimentConfig::graph_file, "graph JSON for --graph-source file");
    add("-n,--vertices", &ExperimentConfig::n, "vertices per random graph");
    add("-p,--edge-probability", &ExperimentConfig::p, "edge probability per ordered vertex pair");
    add("--graphs", &ExperimentConfig::graph_count, "number of non-trivial random graphs");
    add("--skip-trivial", &ExperimentConfig::skip_trivial, "drop graphs without any cycle or chain (true/false)");
    add_nested("--max-cycle-len", [](ExperimentConfig& c) -> int& { return c.caps.max_cycle_len; }, "longest cycle");
    add_nested("--max-chain-len", [](ExperimentConfig& c) -> int& { return c.caps.max_chain_len; }, "longest chain");
    add("--distribution", &ExperimentConfig::distribution, "simple, kpd, or file");
    add("--distribution-file", &ExperimentConfig::distribution_file, "distribution JSON for --distribution file");
    add("--high-risk-fraction", &ExperimentConfig::high_risk_fraction, "share of high-risk edges under kpd");
    add("--methods", &ExperimentConfig::methods, "methods to run");
    add("--budgets", &ExperimentConfig::budgets, "query budgets");
    add("--per-vertex-cap", &ExperimentConfig::per_vertex_cap, "max queried edges into one recipient (0: off)");
    add("--ground-edges", &ExperimentConfig::ground_edges, "restrict queries to these edge ids");
    add("--exact-cap", &ExperimentConfig::exact_cap, "query sets smaller than this are evaluated exactly");
    add("--samples", &ExperimentConfig::samples, "sampled rejection scenarios above the exact cap");
    add("--parallel", &ExperimentConfig::parallel, "use the OpenMP scenario kernel (true/false)");
    add("--mcts-lookahead", &ExperimentConfig::mcts_lookahead, "tree-search lookahead levels");
    add("--mcts-iterations", &ExperimentConfig::mcts_iterations, "tree-search iterations per level");
    add("--mcts-seconds", &ExperimentConfig::mcts_seconds, "wall-clock seconds per level (overrides iterations)");
    add("--node-cap", &ExperimentConfig::exhaustive_node_cap, "exhaustive search node cap");
    add("--realizations", &ExperimentConfig::realizations, "simulated response realizations per graph");
    add("--bootstrap-sizes", &ExperimentConfig::bootstrap_sizes, "bootstrap sample sizes");
    add("--bootstrap-replications", &ExperimentConfig::bootstrap_replications, "bootstrap replications");
    add("--seed", &ExperimentConfig::seed, "master seed");
    output_dir_ = add("-o,--output-dir", &ExperimentConfig::output_dir, "output directory");
    app_->add_option("--config", config_path_, "rerun from a manifest.json or a bare config JSON")
        ->check(CLI::ExistingFile);
    app_->add_option("--policy", policy_, "max_weight or failure_aware");
  }

  ExperimentConfig resolve() const {
    ExperimentConfig cfg;
    if (!config_path_.empty()) {
      const auto doc = kxq::io::read_json_file(config_path_);
      cfg = kxq::config_from_json(doc.contains("config") ? doc.at("config") : doc);
    }
    for (const auto& apply : appliers_) apply(cfg);
    if (!policy_.empty()) cfg.policy = kxq::parse_policy(policy_);
    if (output_dir_->count() == 0) {
      if (const char* env = std::getenv("KXQ_OUTPUT_DIR"); env && *env) cfg.output_dir = env;
    }
    kxq::validate_config(cfg);
    return cfg;
  }

 private:
  template <class T>
  CLI::Option* add(const std::string& name, T ExperimentConfig::*field, const std::string& help) {
    auto value = std::make_shared<T>(ExperimentConfig{}.*field);
    CLI::Option* opt = app_->add_option(name, *value, help)->capture_default_str();
    if constexpr (is_vector<T>::value) opt->delimiter(',');
    appliers_.push_back([opt, value, field](ExperimentConfig& cfg) {
      if (opt->count() > 0) cfg.*field = *value;
    });
    return opt;
  }

  void add_nested(const std::string& name, int& (*field)(ExperimentConfig&), const std::string& help) {
    auto value = std::make_shared<int>(3);
    CLI::Option* opt = app_->add_option(name, *value, help)->capture_default_str();
    appliers_.push_back([opt, value, field](ExperimentConfig& cfg) {
      if (opt->count() > 0) field(cfg) = *value;
    });
  }

  CLI::App* app_;
  std::vector<std::function<void(ExperimentConfig&)>> appliers_;
  CLI::Option* output_dir_ = nullptr;
  std::string config_path_;
  std::string policy_;
};

kxq::io::Json manifest(const std::string& command, const ExperimentConfig& cfg,
                       const std::vector<std::string>& outputs) {
  return {{"tool", "kxq"},
          {"command", command},
          {"config", kxq::config_to_json(cfg)},
          {"outputs", outputs},
          {"build", {{"openmp", kxq::parallel_kernels_available()}}}};
}

void write_outputs(const std::string& command, const ExperimentConfig& cfg,
                   const std::vector<std::pair<std::string, std::string>>& files) {
  const fs::path dir = cfg.output_dir;
  std::vector<std::string> names;
  for (const auto& [name, text] : files) {
    kxq::io::write_text_file(dir / name, text);
    names.push_back(name);
  }
  kxq::io::write_json_file(dir / "manifest.json", manifest(command, cfg, names));
  std::cout << command << ": wrote " << names.size() << " file(s) and manifest.json to " << dir.string() << "\n";
}

int gen_graph(const ExperimentConfig& cfg) {
  const auto instances = kxq::build_instances(cfg);
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& inst : instances) {
    const auto id = std::to_string(inst.graph_id);
    files.emplace_back("graphs/graph_" + id + ".json", kxq::io::graph_to_json(inst.graph).dump(2) + "\n");
    files.emplace_back("graphs/distribution_" + id + ".json",
                       kxq::io::distribution_to_json(inst.spec).dump(2) + "\n");
  }
  files.emplace_back("instances.csv", kxq::instances_csv(instances));
  write_outputs("gen-graph", cfg, files);
  return 0;
}

int single_stage(const ExperimentConfig& cfg) {
  const auto run = kxq::run_single_stage(cfg);
  const auto summary = kxq::summarize(run.rows);
  write_outputs("single-stage", cfg,
                {{"instances.csv", kxq::instances_csv(run.instances)},
                 {"single_stage.csv", kxq::single_stage_csv(run.rows)},
                 {"single_stage_summary.csv", kxq::summary_csv(summary)},
                 {"single_stage_timings.csv", kxq::timings_csv(run.rows)}});
  std::cout << kxq::summary_csv(summary);
  return 0;
}

int multi_stage(const ExperimentConfig& cfg) {
  const auto run = kxq::run_multi_stage(cfg);
  std::vector<kxq::MethodResult> means;
  for (const auto& r : run.rows) {
    if (r.realization >= 0) continue;
    kxq::MethodResult m;
    m.graph_id = r.graph_id;
    m.method = r.method;
    m.budget = r.budget;
    m.delta_max = r.delta_max;
    means.push_back(m);
  }
  const auto summary = kxq::summarize(means);
  write_outputs("multi-stage", cfg,
                {{"instances.csv", kxq::instances_csv(run.instances)},
                 {"multi_stage.csv", kxq::multi_stage_csv(run.rows)},
                 {"multi_stage_summary.csv", kxq::summary_csv(summary)},
                 {"multi_stage_timings.csv", kxq::multi_stage_timings_csv(run.rows)}});
  std::cout << kxq::summary_csv(summary);
  return 0;
}

int bootstrap(const ExperimentConfig& cfg) {
  const auto rows = kxq::run_bootstrap(cfg);
  write_outputs("bootstrap", cfg, {{"bootstrap.csv", kxq::bootstrap_csv(rows)}});
  return 0;
}

int opt_gap(const ExperimentConfig& cfg) {
  const auto rows = kxq::run_opt_gap(cfg);
  int compared = 0, matches = 0;
  double worst = 0.0;
  for (const auto& r : rows) {
    if (r.status != "ok") continue;
    ++compared;
    matches += r.match;
    worst = std::max(worst, r.pct_opt);
  }
  write_outputs("opt-gap", cfg, {{"opt_gap.csv", kxq::opt_gap_csv(rows)}});
  std::cout << "greedy optimal on " << matches << " of " << compared << " instances; max %OPT "
            << kxq::io::format_double(worst) << "\n";
  return 0;
}

httplib::Server* g_server = nullptr;

int serve(const std::string& host, int port, const kxq::service::ServiceOptions& options) {
  kxq::service::SessionService service(options);
  httplib::Server server;
  kxq::service::mount_routes(server, service);
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  std::cout << "listening on http://" << host << ":" << port << " (" << service.session_ids().size()
            << " session(s) restored)" << std::endl;
  if (!server.listen(host, port)) {
    std::cerr << "could not bind " << host << ":" << port << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Policy-constrained edge querying for kidney exchange"};
  app.require_subcommand(1);

  struct Command {
    CLI::App* app;
    std::unique_ptr<ConfigFlags> flags;
    int (*run)(const ExperimentConfig&);
  };
  std::vector<Command> commands;
  auto add_command = [&](const char* name, const char* help, int (*run)(const ExperimentConfig&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    commands.push_back({sub, std::make_unique<ConfigFlags>(sub), run});
  };
  add_command("gen-graph", "Generate graphs and distributions", gen_graph);
  add_command("single-stage", "Run single-stage selection methods", single_stage);
  add_command("multi-stage", "Run multi-stage methods over simulated responses", multi_stage);
  add_command("bootstrap", "Bootstrap study of the sampled objective", bootstrap);
  add_command("opt-gap", "Compare greedy with exhaustive search", opt_gap);

  CLI::App* serve_cmd = app.add_subcommand("serve", "Run the HTTP session service");
  std::string host = "127.0.0.1";
  int port = 8080;
  kxq::service::ServiceOptions options;
  std::string storage;
  serve_cmd->add_option("--host", host)->capture_default_str();
  serve_cmd->add_option("--port", port)->capture_default_str();
  serve_cmd->add_option("--storage", storage, "directory for session logs and uploaded graphs");
  serve_cmd->add_option("--token", options.token, "require this bearer token");
  serve_cmd->add_option("--max-mcts-iterations", options.max_mcts_iterations)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (serve_cmd->parsed()) {
      options.storage_dir = storage;
      return serve(host, port, options);
    }
    for (const auto& c : commands) {
      if (c.app->parsed()) return c.run(c.flags->resolve());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

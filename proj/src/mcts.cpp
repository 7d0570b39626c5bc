#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "kxq/errors.hpp"
#include "kxq/selection.hpp"

namespace kxq {

namespace {

using Clock = std::chrono::steady_clock;

/// Stops a level's sampling loop after a fixed iteration count or, in
/// wall-clock mode, once the time allowance is spent.
class LevelBudget {
 public:
  LevelBudget(long iterations, double seconds)
      : iterations_(iterations), seconds_(seconds), start_(Clock::now()) {}

  bool more() {
    if (seconds_ > 0.0) {
      return std::chrono::duration<double>(Clock::now() - start_).count() < seconds_;
    }
    return done_++ < iterations_;
  }

 private:
  long iterations_;
  double seconds_;
  long done_ = 0;
  Clock::time_point start_;
};

class SingleStageSearch {
 public:
  SingleStageSearch(ObjectiveEvaluator& objective, const LegalEdgeSets& legal, const MctsConfig& cfg)
      : objective_(objective), legal_(legal), cfg_(cfg), rng_(cfg.seed, Phase::rollout), max_size_(legal.rank()) {
    if (cfg.lookahead < 1) throw ValidationError("MCTS lookahead must be >= 1");
  }

  SelectionResult run() {
    const std::uint64_t calls_before = objective_.oracle_calls();
    result_.method = "mcts";
    QuerySet root = objective_.empty_query();
    result_.queried = root;
    result_.value = evaluate(root);
    result_.trace.push_back(result_.value);

    for (int level = 1; level <= max_size_; ++level) {
      const auto extensions = legal_extensions(root, legal_);
      if (extensions.empty()) break;
      const int level_cap = std::min(level + cfg_.lookahead, max_size_);
      stats_.clear();
      LevelBudget budget(cfg_.iterations_per_level, cfg_.seconds_per_level);
      while (budget.more()) sample(root, level_cap);

      // Advance to the child with the largest accumulated value.
      EdgeId chosen = extensions.front();
      double chosen_total = -std::numeric_limits<double>::infinity();
      for (EdgeId e : extensions) {
        const double total = stats_for(root.with(e)).total_value;
        if (total > chosen_total) {
          chosen_total = total;
          chosen = e;
        }
      }
      root.set(chosen);
      result_.trace.push_back(result_.value);
    }
    stats_.clear();
    result_.final_set = root;
    result_.final_value = evaluate(root);
    result_.oracle_calls = objective_.oracle_calls() - calls_before;
    return result_;
  }

 private:
  UcbStats& stats_for(const QuerySet& q) { return stats_[std::string(q.key())]; }

  double evaluate(const QuerySet& q) {
    const double v = objective_.value(q);
    ++result_.nodes_evaluated;
    v_min_ = std::min(v_min_, v);
    v_max_ = std::max(v_max_, v);
    if (v > result_.value + 1e-12 * std::max(1.0, std::abs(result_.value))) {
      result_.queried = q;
      result_.value = v;
    }
    return v;
  }

  double sample(const QuerySet& q, int level_cap) {
    UcbStats& node = stats_for(q);
    ++node.visits;
    const long visits = node.visits;
    const double node_value = evaluate(q);

    const auto extensions = legal_extensions(q, legal_);
    if (extensions.empty()) {
      stats_for(q).total_value += node_value;
      return node_value;
    }

    double backed_up = 0.0;
    if (static_cast<int>(q.count()) < level_cap) {
      EdgeId pick = extensions.front();
      double best_score = -std::numeric_limits<double>::infinity();
      for (EdgeId e : extensions) {
        const double score = ucb_score(stats_for(q.with(e)), visits, v_min_, v_max_);
        if (score > best_score) {
          best_score = score;
          pick = e;
        }
      }
      backed_up = sample(q.with(pick), level_cap);
    } else {
      backed_up = evaluate(random_descendant(q));
    }
    stats_for(q).total_value += backed_up;
    return backed_up;
  }

  // Uniform target depth in (|q|, K], then uniform legal extensions.
  QuerySet random_descendant(QuerySet q) {
    const int from = static_cast<int>(q.count());
    const int depth = from + 1 + static_cast<int>(rng_.below(static_cast<std::uint64_t>(max_size_ - from)));
    while (static_cast<int>(q.count()) < depth) {
      const auto extensions = legal_extensions(q, legal_);
      if (extensions.empty()) break;
      q.set(extensions[static_cast<std::size_t>(rng_.below(extensions.size()))]);
    }
    return q;
  }

  ObjectiveEvaluator& objective_;
  const LegalEdgeSets& legal_;
  MctsConfig cfg_;
  SplitMix64 rng_;
  int max_size_;
  std::unordered_map<std::string, UcbStats> stats_;
  double v_min_ = std::numeric_limits<double>::infinity();
  double v_max_ = -std::numeric_limits<double>::infinity();
  SelectionResult result_;
};

}  // namespace

SelectionResult mcts_single_stage(ObjectiveEvaluator& objective, const LegalEdgeSets& legal, const MctsConfig& cfg) {
  return SingleStageSearch(objective, legal, cfg).run();
}

}  // namespace kxq

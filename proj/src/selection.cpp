#include "kxq/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kxq/errors.hpp"

namespace kxq {

namespace {

// Objective values come from sums of products; a relative slack keeps
// float noise from reordering otherwise tied candidates.
bool strictly_better(double candidate, double incumbent) {
  if (!std::isfinite(incumbent)) return candidate > incumbent;
  return candidate > incumbent + 1e-12 * std::max(1.0, std::abs(incumbent));
}

void note_level(std::vector<double>& trace, std::size_t level, double value) {
  if (trace.size() <= level) trace.resize(level + 1, -std::numeric_limits<double>::infinity());
  trace[level] = std::max(trace[level], value);
}

/// Turn per-level maxima into "best known up to this level".
void make_cumulative(std::vector<double>& trace) {
  for (std::size_t i = 1; i < trace.size(); ++i) trace[i] = std::max(trace[i], trace[i - 1]);
}

class ExhaustiveSearch {
 public:
  ExhaustiveSearch(ObjectiveEvaluator& objective, const LegalEdgeSets& legal, std::uint64_t cap)
      : objective_(objective), legal_(legal), cap_(cap) {}

  SelectionResult run() {
    const std::uint64_t calls_before = objective_.oracle_calls();
    result_.method = "exhaustive";
    QuerySet root = objective_.empty_query();
    result_.queried = root;
    result_.value = objective_.value(root);
    result_.nodes_evaluated = 1;
    note_level(result_.trace, 0, result_.value);
    descend(root, 0);
    make_cumulative(result_.trace);
    result_.final_set = result_.queried;
    result_.final_value = result_.value;
    result_.oracle_calls = objective_.oracle_calls() - calls_before;
    return result_;
  }

 private:
  void descend(const QuerySet& q, EdgeId next_edge) {
    for (EdgeId e = next_edge; e < static_cast<EdgeId>(q.size()); ++e) {
      if (!legal_.can_add(q, e)) continue;
      if (result_.nodes_evaluated >= cap_) {
        SelectionResult partial = result_;
        make_cumulative(partial.trace);
        partial.final_set = partial.queried;
        partial.final_value = partial.value;
        throw NodeCapExceeded(cap_, std::move(partial));
      }
      const QuerySet child = q.with(e);
      const double v = objective_.value(child);
      ++result_.nodes_evaluated;
      note_level(result_.trace, child.count(), v);
      if (strictly_better(v, result_.value)) {
        result_.queried = child;
        result_.value = v;
      }
      descend(child, e + 1);
    }
  }

  ObjectiveEvaluator& objective_;
  const LegalEdgeSets& legal_;
  std::uint64_t cap_;
  SelectionResult result_;
};

}  // namespace

NodeCapExceeded::NodeCapExceeded(std::uint64_t cap, SelectionResult partial)
    : std::runtime_error("exhaustive search exceeded its node cap of " + std::to_string(cap) +
                         "; best value so far " + std::to_string(partial.value)),
      partial_(std::move(partial)) {}

SelectionResult exhaustive_opt(ObjectiveEvaluator& objective, const LegalEdgeSets& legal, std::uint64_t node_cap) {
  return ExhaustiveSearch(objective, legal, node_cap).run();
}

SelectionResult greedy_single_stage(ObjectiveEvaluator& objective, const LegalEdgeSets& legal) {
  const std::uint64_t calls_before = objective.oracle_calls();
  SelectionResult result;
  result.method = "greedy";
  QuerySet current = objective.empty_query();
  double current_value = objective.value(current);
  result.nodes_evaluated = 1;
  result.queried = current;
  result.value = current_value;
  result.trace.push_back(current_value);

  for (;;) {
    const auto extensions = legal_extensions(current, legal);
    if (extensions.empty()) break;
    EdgeId best_edge = extensions.front();
    double best_value = -std::numeric_limits<double>::infinity();
    for (EdgeId e : extensions) {
      const double v = objective.value(current.with(e));
      ++result.nodes_evaluated;
      if (strictly_better(v, best_value)) {
        best_value = v;
        best_edge = e;
      }
    }
    current.set(best_edge);
    current_value = best_value;
    if (strictly_better(current_value, result.value)) {
      result.queried = current;
      result.value = current_value;
    }
    result.trace.push_back(result.value);
  }
  result.final_set = current;
  result.final_value = current_value;
  result.oracle_calls = objective.oracle_calls() - calls_before;
  return result;
}

SelectionResult random_selection(ObjectiveEvaluator& objective, const LegalEdgeSets& legal, std::uint64_t seed) {
  const std::uint64_t calls_before = objective.oracle_calls();
  SplitMix64 rng(seed, Phase::random_method);
  QuerySet q = objective.empty_query();
  for (;;) {
    const auto extensions = legal_extensions(q, legal);
    if (extensions.empty()) break;
    q.set(extensions[static_cast<std::size_t>(rng.below(extensions.size()))]);
  }
  SelectionResult result;
  result.method = "random";
  result.queried = q;
  result.value = objective.value(q);
  result.final_set = q;
  result.final_value = result.value;
  result.trace = {result.value};
  result.nodes_evaluated = 1;
  result.oracle_calls = objective.oracle_calls() - calls_before;
  return result;
}

double ucb_score(const UcbStats& node, long parent_visits, double v_min, double v_max) {
  if (node.visits <= 0) return std::numeric_limits<double>::infinity();
  const double n = static_cast<double>(node.visits);
  const double mean = node.total_value / n;
  const double exploit = v_max > v_min ? (mean - v_min) / (v_max - v_min) : 0.0;
  return exploit + std::sqrt(static_cast<double>(parent_visits) / n);
}

}  // namespace kxq

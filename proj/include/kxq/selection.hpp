#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kxq/legal_sets.hpp"
#include "kxq/objective.hpp"

namespace kxq {

/// Outcome of a single-stage selection method.
struct SelectionResult {
  std::string method;
  /// The returned query set and its objective value.
  QuerySet queried;
  double value = 0.0;
  /// Last node the method stood on. For greedy this is the node the plain
  /// greedy descent ends at; `queried` is the best node along the path.
  QuerySet final_set;
  double final_value = 0.0;
  /// Best objective known after each level (index 0 is the empty set).
  std::vector<double> trace;
  std::uint64_t oracle_calls = 0;
  std::uint64_t nodes_evaluated = 0;
};

/// Thrown when exhaustive search hits its node cap; carries the best node
/// found so far.
class NodeCapExceeded : public std::runtime_error {
 public:
  NodeCapExceeded(std::uint64_t cap, SelectionResult partial);
  const SelectionResult& partial() const noexcept { return partial_; }

 private:
  SelectionResult partial_;
};

/// Depth-first search over every legal set (each set visited once: children
/// only add edges above the largest edge already present). The optimum may
/// sit at any level; ties keep the first set in DFS order.
SelectionResult exhaustive_opt(ObjectiveEvaluator& objective, const LegalEdgeSets& legal,
                               std::uint64_t node_cap = 5'000'000);

/// Start at the empty set and move to the best child until none remain;
/// ties go to the smallest added edge id.
SelectionResult greedy_single_stage(ObjectiveEvaluator& objective, const LegalEdgeSets& legal);

/// Uniformly random legal extensions until no child remains.
SelectionResult random_selection(ObjectiveEvaluator& objective, const LegalEdgeSets& legal, std::uint64_t seed);

/// Running statistics of one search node.
struct UcbStats {
  double total_value = 0.0;  // U
  long visits = 0;           // N
};

/// (U/N - vmin)/(vmax - vmin) + sqrt(parent_visits / N). Unvisited nodes
/// score +infinity; a degenerate value range contributes 0 to the first
/// term.
double ucb_score(const UcbStats& node, long parent_visits, double v_min, double v_max);

/// Per-level search budget: a fixed iteration count, or wall-clock seconds
/// when `seconds_per_level` is positive.
struct MctsConfig {
  int lookahead = 2;
  long iterations_per_level = 1000;
  double seconds_per_level = 0.0;
  std::uint64_t seed = 0;
};

/// Tree search with iterative root advancement: UCB sampling over the next
/// `lookahead` levels below the current root, then the root moves to its
/// child with the largest accumulated value. Returns the best node evaluated
/// anywhere, including rollout nodes.
SelectionResult mcts_single_stage(ObjectiveEvaluator& objective, const LegalEdgeSets& legal, const MctsConfig& cfg);

}  // namespace kxq

#pragma once

#include <cstdint>
#include <optional>

#include "kxq/legal_sets.hpp"
#include "kxq/objective.hpp"
#include "kxq/selection.hpp"

namespace kxq {

/// One candidate next query with both response branches valued.
struct BranchValues {
  EdgeId edge = -1;
  double p_reject = 0.0;
  double accept_value = 0.0;  // W(M(r^A); q', r^A)
  double reject_value = 0.0;  // W(M(r^R); q', r^R)
  double value = 0.0;         // (1 - p_reject) * accept + p_reject * reject
};

/// Values querying e next, treating it as the last query. Two oracle calls.
BranchValues branch_values(ObjectiveEvaluator& objective, const QuerySet& q, const RejectionVector& r, EdgeId e);

/// Myopic multi-stage greedy: the legal next edge with the largest
/// one-step expected final weight (smallest edge id on ties). Empty when no
/// extension is legal. Throws ValidationError for inconsistent (q, r).
std::optional<BranchValues> greedy_next_edge(ObjectiveEvaluator& objective, const LegalEdgeSets& legal,
                                             const QuerySet& q, const RejectionVector& r);

struct MultiStageMctsConfig {
  int lookahead = 2;
  long iterations = 1000;
  double seconds = 0.0;  // wall-clock mode when positive
  std::uint64_t seed = 0;
};

struct MctsRecommendation {
  EdgeId edge = -1;
  long visits = 0;
  double total_value = 0.0;
};

/// Multi-stage tree search over alternating outcome nodes (q, r) and query
/// nodes (q, r, e). Query nodes carry UCB statistics; only leaf outcomes are
/// valued. Below the level cap min(|q| + lookahead, K) the search follows
/// the best UCB query child and samples its response; at the cap it rolls
/// out a random leaf. Recommends the root query child with the largest
/// accumulated value (smallest edge id on ties).
std::optional<MctsRecommendation> mcts_next_edge(ObjectiveEvaluator& objective, const LegalEdgeSets& legal,
                                                 const QuerySet& q, const RejectionVector& r,
                                                 const MultiStageMctsConfig& cfg);

}  // namespace kxq

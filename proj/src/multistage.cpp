#include "kxq/multistage.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "kxq/errors.hpp"

namespace kxq {

BranchValues branch_values(ObjectiveEvaluator& objective, const QuerySet& q, const RejectionVector& r, EdgeId e) {
  BranchValues b;
  b.edge = e;
  b.p_reject = objective.spec().rejection_probability(e, q, r);
  const QuerySet next = q.with(e);
  RejectionVector rejected = r;
  rejected.set(e);
  b.accept_value = objective.outcome_value(next, r);
  b.reject_value = objective.outcome_value(next, rejected);
  b.value = (1.0 - b.p_reject) * b.accept_value + b.p_reject * b.reject_value;
  return b;
}

std::optional<BranchValues> greedy_next_edge(ObjectiveEvaluator& objective, const LegalEdgeSets& legal,
                                             const QuerySet& q, const RejectionVector& r) {
  if (!consistent(q, r) || q.size() != objective.edge_count()) {
    throw ValidationError("rejections are inconsistent with the query set");
  }
  std::optional<BranchValues> best;
  for (EdgeId e : legal_extensions(q, legal)) {
    BranchValues b = branch_values(objective, q, r, e);
    if (!best || b.value > best->value + 1e-12 * std::max(1.0, std::abs(best->value))) best = b;
  }
  return best;
}

namespace {

class MultiStageSearch {
 public:
  MultiStageSearch(ObjectiveEvaluator& objective, const LegalEdgeSets& legal, const MultiStageMctsConfig& cfg)
      : objective_(objective), legal_(legal), cfg_(cfg), rng_(cfg.seed, Phase::rollout), max_size_(legal.rank()) {
    if (cfg.lookahead < 1) throw ValidationError("MCTS lookahead must be >= 1");
  }

  std::optional<MctsRecommendation> run(const QuerySet& q, const RejectionVector& r) {
    const auto extensions = legal_extensions(q, legal_);
    if (extensions.empty()) return std::nullopt;
    const int level_cap = std::min(static_cast<int>(q.count()) + cfg_.lookahead, max_size_);

    const auto start = std::chrono::steady_clock::now();
    for (long i = 0;; ++i) {
      if (cfg_.seconds > 0.0) {
        if (std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >= cfg_.seconds) break;
      } else if (i >= cfg_.iterations) {
        break;
      }
      query_sample(q, r, level_cap);
    }

    MctsRecommendation best;
    best.total_value = -std::numeric_limits<double>::infinity();
    for (EdgeId e : extensions) {
      const UcbStats& s = query_stats(q, r, e);
      if (s.total_value > best.total_value) best = {e, s.visits, s.total_value};
    }
    return best;
  }

 private:
  static std::string outcome_key(const QuerySet& q, const RejectionVector& r) {
    std::string key(q.key());
    key.append(r.key());
    return key;
  }

  UcbStats& query_stats(const QuerySet& q, const RejectionVector& r, EdgeId e) {
    std::string key = outcome_key(q, r);
    key.append(reinterpret_cast<const char*>(&e), sizeof e);
    return query_stats_[key];
  }

  double leaf_value(const QuerySet& q, const RejectionVector& r) {
    auto key = outcome_key(q, r);
    auto it = leaf_values_.find(key);
    if (it == leaf_values_.end()) it = leaf_values_.emplace(std::move(key), objective_.outcome_value(q, r)).first;
    v_min_ = std::min(v_min_, it->second);
    v_max_ = std::max(v_max_, it->second);
    return it->second;
  }

  bool rejects(const QuerySet& q, const RejectionVector& r, EdgeId e) {
    return rng_.uniform() < objective_.spec().rejection_probability(e, q, r);
  }

  double query_sample(const QuerySet& q, const RejectionVector& r, int level_cap) {
    const auto extensions = legal_extensions(q, legal_);
    if (extensions.empty()) return leaf_value(q, r);

    if (static_cast<int>(q.count()) < level_cap) {
      const long parent_visits = ++outcome_visits_[outcome_key(q, r)];
      EdgeId pick = extensions.front();
      double best_score = -std::numeric_limits<double>::infinity();
      for (EdgeId e : extensions) {
        const double score = ucb_score(query_stats(q, r, e), parent_visits, v_min_, v_max_);
        if (score > best_score) {
          best_score = score;
          pick = e;
        }
      }
      return outcome_sample(q, r, pick, level_cap);
    }

    QuerySet leaf_q = q;
    RejectionVector leaf_r = r;
    for (;;) {
      const auto more = legal_extensions(leaf_q, legal_);
      if (more.empty()) break;
      const EdgeId e = more[static_cast<std::size_t>(rng_.below(more.size()))];
      const bool rejected = rejects(leaf_q, leaf_r, e);
      leaf_q.set(e);
      if (rejected) leaf_r.set(e);
    }
    return leaf_value(leaf_q, leaf_r);
  }

  double outcome_sample(const QuerySet& q, const RejectionVector& r, EdgeId e, int level_cap) {
    ++query_stats(q, r, e).visits;
    const bool rejected = rejects(q, r, e);
    const QuerySet next_q = q.with(e);
    RejectionVector next_r = r;
    if (rejected) next_r.set(e);
    const double v = query_sample(next_q, next_r, level_cap);
    query_stats(q, r, e).total_value += v;
    return v;
  }

  ObjectiveEvaluator& objective_;
  const LegalEdgeSets& legal_;
  MultiStageMctsConfig cfg_;
  SplitMix64 rng_;
  int max_size_;
  std::unordered_map<std::string, UcbStats> query_stats_;
  std::unordered_map<std::string, long> outcome_visits_;
  std::unordered_map<std::string, double> leaf_values_;
  double v_min_ = std::numeric_limits<double>::infinity();
  double v_max_ = -std::numeric_limits<double>::infinity();
};

}  // namespace

std::optional<MctsRecommendation> mcts_next_edge(ObjectiveEvaluator& objective, const LegalEdgeSets& legal,
                                                 const QuerySet& q, const RejectionVector& r,
                                                 const MultiStageMctsConfig& cfg) {
  if (!consistent(q, r) || q.size() != objective.edge_count()) {
    throw ValidationError("rejections are inconsistent with the query set");
  }
  return MultiStageSearch(objective, legal, cfg).run(q, r);
}

}  // namespace kxq

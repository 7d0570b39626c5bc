#include "kxq/matching.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <bit>
#include <string>
#include <unordered_map>
#include <cmath>

#include "kxq/errors.hpp"

namespace kxq {

double realized_weight(const CycleChain& c, const DeadVector& dead) {
  double total = 0.0;
  for (std::size_t k = 0; k < c.edges.size(); ++k) {
    if (dead[c.edges[k]]) return c.kind == StructureKind::cycle ? 0.0 : total;
    total += c.weights[k];
  }
  return total;
}

double expected_structure_weight(const CycleChain& c, const DistributionSpec& spec, const QuerySet& q,
                                 const RejectionVector& r) {
  if (c.kind == StructureKind::cycle) {
    double alive = 1.0;
    for (EdgeId e : c.edges) alive *= spec.survival(e, q, r);
    return c.nominal_weight * alive;
  }
  // Edge k contributes its weight exactly when edges 1..k all survive.
  double alive = 1.0;
  double total = 0.0;
  for (std::size_t k = 0; k < c.edges.size(); ++k) {
    alive *= spec.survival(c.edges[k], q, r);
    if (alive == 0.0) break;
    total += c.weights[k] * alive;
  }
  return total;
}

std::string to_string(PolicyKind policy) {
  return policy == PolicyKind::failure_aware ? "failure_aware" : "max_weight";
}

PolicyKind parse_policy(const std::string& name) {
  if (name == "max_weight" || name == "max-weight") return PolicyKind::max_weight;
  if (name == "failure_aware" || name == "failure-aware") return PolicyKind::failure_aware;
  throw ValidationError("unknown matching policy '" + name + "'");
}

StructurePool::StructurePool(const ExchangeGraph& graph, std::vector<CycleChain> structures)
    : structures_(std::move(structures)), edge_count_(graph.edge_count()) {
  by_edge_.assign(edge_count_, {});
  for (std::size_t i = 0; i < structures_.size(); ++i) {
    for (EdgeId e : structures_[i].edges) by_edge_.at(static_cast<std::size_t>(e)).push_back(static_cast<int>(i));
  }
  build_conflicts(graph.vertex_count());
}

StructurePool::StructurePool(const ExchangeGraph& graph, StructureCaps caps)
    : StructurePool(graph, enumerate_structures(graph, caps)) {}

void StructurePool::build_conflicts(std::size_t vertex_count) {
  const std::size_t n = structures_.size();
  words_ = (n + 63) / 64;
  conflict_words_.assign(n * words_, 0);
  std::vector<std::vector<int>> by_vertex(vertex_count);
  for (std::size_t i = 0; i < n; ++i) {
    for (VertexId v : structures_[i].vertices) by_vertex[static_cast<std::size_t>(v)].push_back(static_cast<int>(i));
  }
  for (const auto& users : by_vertex) {
    for (int a : users) {
      for (int b : users) {
        conflict_words_[static_cast<std::size_t>(a) * words_ + static_cast<std::size_t>(b) / 64] |=
            std::uint64_t{1} << (b % 64);
      }
    }
  }
}

std::vector<std::uint8_t> Matching::indicator(std::size_t structure_count) const {
  std::vector<std::uint8_t> x(structure_count, 0);
  for (int i : selected) x.at(static_cast<std::size_t>(i)) = 1;
  return x;
}

bool is_vertex_disjoint(const StructurePool& pool, const Matching& x) {
  for (std::size_t a = 0; a < x.selected.size(); ++a) {
    for (std::size_t b = a + 1; b < x.selected.size(); ++b) {
      if (pool.conflicts(static_cast<std::size_t>(x.selected[a]), static_cast<std::size_t>(x.selected[b]))) {
        return false;
      }
    }
  }
  return true;
}

double post_match_expected_weight(const StructurePool& pool, const Matching& x, const DistributionSpec& spec,
                                  const QuerySet& q, const RejectionVector& r) {
  double total = 0.0;
  for (int i : x.selected) total += expected_structure_weight(pool[static_cast<std::size_t>(i)], spec, q, r);
  return total;
}

std::vector<double> policy_values(PolicyKind policy, const StructurePool& pool, const DistributionSpec& spec,
                                  const QuerySet& q, const RejectionVector& r) {
  std::vector<double> values(pool.size());
  if (policy == PolicyKind::failure_aware) {
    for (std::size_t i = 0; i < pool.size(); ++i) values[i] = expected_structure_weight(pool[i], spec, q, r);
  } else {
    const DeadVector dead = combine(r, FailureVector(r.size()));
    for (std::size_t i = 0; i < pool.size(); ++i) values[i] = realized_weight(pool[i], dead);
  }
  return values;
}

namespace {

constexpr double kRelativeTie = 1e-9;

double tie_tolerance(double best) { return kRelativeTie * std::max(1.0, std::abs(best)); }

/// Plain enumeration of every packing in include-first index order. A
/// candidate replaces the incumbent only when strictly better.
class PackingSearch {
 public:
  PackingSearch(const StructurePool& pool, std::span<const double> values)
      : pool_(pool), values_(values), blocked_(pool.words(), 0) {
    if (values.size() != pool.size()) throw ValidationError("one value per structure is required");
  }

  Matching run() {
    search(0);
    Matching m;
    m.selected = best_set_;
    for (int i : m.selected) m.nominal_weight += pool_[static_cast<std::size_t>(i)].nominal_weight;
    return m;
  }

 private:
  bool open(std::size_t j) const {
    return values_[j] > 0.0 && !((blocked_[j / 64] >> (j % 64)) & 1U);
  }

  void search(std::size_t pos) {
    const std::size_t n = pool_.size();
    for (std::size_t j = pos; j < n; ++j) {
      if (!open(j)) continue;
      const std::vector<std::uint64_t> saved = blocked_;
      const auto row = pool_.conflict_row(j);
      for (std::size_t w = 0; w < blocked_.size(); ++w) blocked_[w] |= row[w];
      chosen_.push_back(static_cast<int>(j));
      current_ += values_[j];
      if (current_ > best_ + tie_tolerance(best_)) {
        best_ = current_;
        best_set_ = chosen_;
      }
      search(j + 1);
      current_ -= values_[j];
      chosen_.pop_back();
      blocked_ = saved;
    }
  }

  const StructurePool& pool_;
  std::span<const double> values_;
  std::vector<std::uint64_t> blocked_;
  std::vector<int> chosen_;
  double current_ = 0.0;
  double best_ = 0.0;
  std::vector<int> best_set_;
};


/// Connected components of the conflict graph restricted to structures
/// with positive value. Members of each component are ascending.
std::vector<std::vector<int>> positive_components(const StructurePool& pool, std::span<const double> values) {
  const std::size_t n = pool.size();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<int>> components;
  for (std::size_t root = 0; root < n; ++root) {
    if (seen[root] || !(values[root] > 0.0)) continue;
    std::vector<int> members{static_cast<int>(root)};
    seen[root] = 1;
    for (std::size_t head = 0; head < members.size(); ++head) {
      const auto row = pool.conflict_row(static_cast<std::size_t>(members[head]));
      for (std::size_t w = 0; w < row.size(); ++w) {
        for (std::uint64_t bits = row[w]; bits != 0; bits &= bits - 1) {
          const std::size_t j = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
          if (!seen[j] && values[j] > 0.0) {
            seen[j] = 1;
            members.push_back(static_cast<int>(j));
          }
        }
      }
    }
    std::sort(members.begin(), members.end());
    components.push_back(std::move(members));
  }
  return components;
}

/// Fixed-width structure set for the component solver.
template <std::size_t W>
struct Bits {
  std::array<std::uint64_t, W> w{};

  bool test(std::size_t j) const { return (w[j / 64] >> (j % 64)) & 1U; }
  void set(std::size_t j) { w[j / 64] |= std::uint64_t{1} << (j % 64); }
  void reset(std::size_t j) { w[j / 64] &= ~(std::uint64_t{1} << (j % 64)); }
  bool none() const {
    for (auto x : w)
      if (x) return false;
    return true;
  }
  int count() const {
    int c = 0;
    for (auto x : w) c += std::popcount(x);
    return c;
  }
  std::size_t first() const {
    for (std::size_t i = 0; i < W; ++i)
      if (w[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(w[i]));
    return W * 64;
  }
  Bits operator&(const Bits& o) const {
    Bits r;
    for (std::size_t i = 0; i < W; ++i) r.w[i] = w[i] & o.w[i];
    return r;
  }
  Bits minus(const Bits& o) const {
    Bits r;
    for (std::size_t i = 0; i < W; ++i) r.w[i] = w[i] & ~o.w[i];
    return r;
  }
  bool subset_of(const Bits& o) const {
    for (std::size_t i = 0; i < W; ++i)
      if (w[i] & ~o.w[i]) return false;
    return true;
  }
  bool operator==(const Bits&) const = default;

  template <class F>
  void each(F f) const {
    for (std::size_t i = 0; i < W; ++i)
      for (std::uint64_t x = w[i]; x != 0; x &= x - 1) f(i * 64 + static_cast<std::size_t>(std::countr_zero(x)));
  }
};

template <std::size_t W>
struct BitsHash {
  std::size_t operator()(const Bits<W>& b) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto x : b.w) h = (h ^ x) * 0xbf58476d1ce4e5b9ULL + (h >> 29);
    return static_cast<std::size_t>(h);
  }
};

/// Exact packing over one conflict component.
///
/// The optimum comes from a memoized independent-set recursion. Each call
/// splits the remaining structures into connected pieces, applies two
/// value-preserving reductions (a structure whose conflicts form a clique
/// and that outweighs all of them is taken; a structure whose conflicts
/// contain those of a heavier neighbour is dropped), and otherwise branches
/// on the structure with the most conflicts. The reported packing is the
/// first optimum in include-first index order: walk the indices once and
/// take a structure exactly when an optimal completion still exists with it.
template <std::size_t W>
class ComponentSolver {
 public:
  using Set = Bits<W>;

  ComponentSolver(const StructurePool& pool, std::span<const double> values, const std::vector<int>& members)
      : members_(members), m_(members.size()), rows_(m_) {
    for (std::size_t a = 0; a < m_; ++a) {
      const std::size_t ga = static_cast<std::size_t>(members_[a]);
      values_.push_back(values[ga]);
      rows_[a].set(a);
      for (std::size_t b = 0; b < m_; ++b)
        if (pool.conflicts(ga, static_cast<std::size_t>(members_[b]))) rows_[a].set(b);
    }
  }

  std::vector<int> run() {
    Set open;
    for (std::size_t j = 0; j < m_; ++j) open.set(j);
    const double target = best(open);
    const double tol = tie_tolerance(target);
    std::vector<int> out;
    double current = 0.0;
    for (std::size_t j = 0; j < m_ && current < target - tol; ++j) {
      if (!open.test(j)) continue;
      const Set with = open.minus(rows_[j]);
      if (current + values_[j] + best(with) >= target - tol) {
        current += values_[j];
        out.push_back(members_[j]);
        open = with;
      } else {
        open.reset(j);
      }
    }
    return out;
  }

 private:
  Set piece_of(const Set& s, std::size_t first) const {
    Set piece, frontier;
    piece.set(first);
    frontier.set(first);
    while (!frontier.none()) {
      Set next;
      frontier.each([&](std::size_t j) {
        for (std::size_t i = 0; i < W; ++i) next.w[i] |= rows_[j].w[i];
      });
      next = (next & s).minus(piece);
      for (std::size_t i = 0; i < W; ++i) piece.w[i] |= next.w[i];
      frontier = next;
    }
    return piece;
  }

  /// Value of a connected piece after reductions and branching.
  double solve_piece(const Set& s) {
    std::size_t pivot = m_;
    int pivot_degree = -1;
    std::optional<std::size_t> take, drop;
    s.each([&](std::size_t j) {
      if (take || drop) return;
      const Set nj = rows_[j] & s;
      bool clique = true, heaviest = true;
      nj.each([&](std::size_t u) {
        if (u == j) return;
        if (values_[u] > values_[j]) heaviest = false;
        if (!nj.subset_of(rows_[u])) clique = false;
        // u's conflicts cover j's and u is no heavier: drop u.
        if (!drop && values_[j] >= values_[u] && nj.subset_of(rows_[u] & s)) drop = u;
      });
      if (clique && heaviest) take = j;
      const int degree = nj.count();
      if (degree > pivot_degree) {
        pivot_degree = degree;
        pivot = j;
      }
    });
    if (take) return values_[*take] + best(s.minus(rows_[*take]));
    if (drop) {
      Set rest = s;
      rest.reset(*drop);
      return best(rest);
    }
    Set skip = s;
    skip.reset(pivot);
    return std::max(best(skip), values_[pivot] + best(s.minus(rows_[pivot])));
  }

  double best(const Set& s) {
    const std::size_t first = s.first();
    if (first >= m_) return 0.0;
    if (auto it = memo_.find(s); it != memo_.end()) return it->second;
    double result;
    const Set piece = piece_of(s, first);
    if (!(piece == s)) {
      result = best(piece) + best(s.minus(piece));
    } else {
      result = solve_piece(s);
    }
    memo_.emplace(s, result);
    return result;
  }

  const std::vector<int>& members_;
  std::size_t m_;
  std::vector<double> values_;
  std::vector<Set> rows_;
  std::unordered_map<Set, double, BitsHash<W>> memo_;
};

template <std::size_t W>
std::vector<int> solve_component(const StructurePool& pool, std::span<const double> values,
                                 const std::vector<int>& members) {
  if (members.size() <= W * 64) return ComponentSolver<W>(pool, values, members).run();
  if constexpr (W < 16) {
    return solve_component<W * 2>(pool, values, members);
  } else {
    throw CapacityError("a conflict component of " + std::to_string(members.size()) +
                        " structures exceeds the exact solver's limit of " + std::to_string(W * 64));
  }
}

}  // namespace

Matching pack_max_value(const StructurePool& pool, std::span<const double> values) {
  if (values.size() != pool.size()) throw ValidationError("one value per structure is required");
  Matching m;
  for (const auto& component : positive_components(pool, values)) {
    for (int i : solve_component<1>(pool, values, component)) m.selected.push_back(i);
  }
  std::sort(m.selected.begin(), m.selected.end());
  for (int i : m.selected) m.nominal_weight += pool[static_cast<std::size_t>(i)].nominal_weight;
  return m;
}

Matching brute_force_packing(const StructurePool& pool, std::span<const double> values, int cap) {
  if (static_cast<long>(pool.size()) > cap) {
    throw CapacityError("brute-force packing of " + std::to_string(pool.size()) + " structures exceeds the cap of " +
                        std::to_string(cap));
  }
  return PackingSearch(pool, values).run();
}

Matching solve_policy(PolicyKind policy, const StructurePool& pool, const DistributionSpec& spec, const QuerySet& q,
                      const RejectionVector& r) {
  const auto values = policy_values(policy, pool, spec, q, r);
  return pack_max_value(pool, values);
}

}  // namespace kxq

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kxq/graph.hpp"
#include "kxq/uncertainty.hpp"

namespace kxq {

/// The family of query sets an exchange allows. Three kinds, each a matroid:
///  - budget(G): at most G edges;
///  - per_vertex_cap(k): at most k queried edges into any one recipient
///    vertex (a partition matroid, one block per target vertex);
///  - composite: both limits at once (a truncated partition matroid).
/// Any kind can be restricted to a ground set of edge ids.
class LegalEdgeSets {
 public:
  enum class Kind { budget, per_vertex_cap, composite };

  static LegalEdgeSets budget(const ExchangeGraph& graph, int max_edges);
  static LegalEdgeSets per_vertex_cap(const ExchangeGraph& graph, int cap);
  static LegalEdgeSets composite(const ExchangeGraph& graph, int max_edges, int cap);

  /// Copy limited to the given ground set.
  LegalEdgeSets restricted_to(const std::vector<EdgeId>& ground) const;

  Kind kind() const noexcept { return kind_; }
  std::size_t edge_count() const noexcept { return in_ground_.size(); }
  std::optional<int> max_edges() const noexcept { return max_edges_; }
  std::optional<int> vertex_cap() const noexcept { return vertex_cap_; }
  std::vector<EdgeId> ground_set() const;
  bool in_ground(EdgeId e) const { return in_ground_.at(static_cast<std::size_t>(e)) != 0; }

  bool contains(const QuerySet& q) const;
  /// Whether q + {e} is legal, assuming q is.
  bool can_add(const QuerySet& q, EdgeId e) const;
  /// Size of the largest legal set (the matroid rank).
  int rank() const;

  /// Human-readable reason q + {e} is illegal, or empty if it is legal.
  std::string why_not(const QuerySet& q, EdgeId e) const;

 private:
  LegalEdgeSets() = default;

  Kind kind_ = Kind::budget;
  std::optional<int> max_edges_;
  std::optional<int> vertex_cap_;
  std::vector<VertexId> owner_;  // target vertex of each edge
  std::size_t vertex_count_ = 0;
  std::vector<std::uint8_t> in_ground_;
};

/// C(q): legal supersets of q with exactly one more edge, ascending by the
/// added edge id.
std::vector<QuerySet> children(const QuerySet& q, const LegalEdgeSets& legal);

/// Edges e with q + {e} legal, ascending.
std::vector<EdgeId> legal_extensions(const QuerySet& q, const LegalEdgeSets& legal);

}  // namespace kxq

#include "kxq/legal_sets.hpp"

#include "kxq/errors.hpp"

namespace kxq {

namespace {

LegalEdgeSets::Kind kind_for(bool budget, bool cap) {
  if (budget && cap) return LegalEdgeSets::Kind::composite;
  return cap ? LegalEdgeSets::Kind::per_vertex_cap : LegalEdgeSets::Kind::budget;
}

}  // namespace

LegalEdgeSets LegalEdgeSets::budget(const ExchangeGraph& graph, int max_edges) {
  if (max_edges < 0) throw ValidationError("edge budget must be >= 0");
  LegalEdgeSets s;
  s.kind_ = Kind::budget;
  s.max_edges_ = max_edges;
  s.vertex_count_ = graph.vertex_count();
  for (const Edge& e : graph.edges) s.owner_.push_back(e.target);
  s.in_ground_.assign(graph.edge_count(), 1);
  return s;
}

LegalEdgeSets LegalEdgeSets::per_vertex_cap(const ExchangeGraph& graph, int cap) {
  if (cap < 0) throw ValidationError("per-vertex cap must be >= 0");
  LegalEdgeSets s = budget(graph, 0);
  s.max_edges_.reset();
  s.vertex_cap_ = cap;
  s.kind_ = kind_for(false, true);
  return s;
}

LegalEdgeSets LegalEdgeSets::composite(const ExchangeGraph& graph, int max_edges, int cap) {
  LegalEdgeSets s = per_vertex_cap(graph, cap);
  if (max_edges < 0) throw ValidationError("edge budget must be >= 0");
  s.max_edges_ = max_edges;
  s.kind_ = kind_for(true, true);
  return s;
}

LegalEdgeSets LegalEdgeSets::restricted_to(const std::vector<EdgeId>& ground) const {
  LegalEdgeSets s = *this;
  s.in_ground_.assign(in_ground_.size(), 0);
  for (EdgeId e : ground) {
    if (e < 0 || static_cast<std::size_t>(e) >= in_ground_.size()) {
      throw ValidationError("ground-set edge " + std::to_string(e) + " is not an edge of the graph");
    }
    s.in_ground_[static_cast<std::size_t>(e)] = in_ground_[static_cast<std::size_t>(e)];
  }
  return s;
}

std::vector<EdgeId> LegalEdgeSets::ground_set() const {
  std::vector<EdgeId> out;
  for (std::size_t i = 0; i < in_ground_.size(); ++i)
    if (in_ground_[i]) out.push_back(static_cast<EdgeId>(i));
  return out;
}

bool LegalEdgeSets::contains(const QuerySet& q) const {
  if (q.size() != in_ground_.size()) return false;
  std::vector<int> per_vertex(vertex_count_, 0);
  int total = 0;
  for (EdgeId e : q.members()) {
    if (!in_ground(e)) return false;
    ++total;
    if (vertex_cap_ && ++per_vertex[static_cast<std::size_t>(owner_[static_cast<std::size_t>(e)])] > *vertex_cap_) {
      return false;
    }
  }
  return !max_edges_ || total <= *max_edges_;
}

std::string LegalEdgeSets::why_not(const QuerySet& q, EdgeId e) const {
  if (e < 0 || static_cast<std::size_t>(e) >= in_ground_.size()) return "edge " + std::to_string(e) + " does not exist";
  if (q[e]) return "edge " + std::to_string(e) + " is already queried";
  if (!in_ground(e)) return "edge " + std::to_string(e) + " is outside the ground set";
  if (max_edges_ && static_cast<int>(q.count()) + 1 > *max_edges_) {
    return "edge budget of " + std::to_string(*max_edges_) + " is exhausted";
  }
  if (vertex_cap_) {
    const VertexId v = owner_[static_cast<std::size_t>(e)];
    int used = 0;
    for (EdgeId other : q.members())
      if (owner_[static_cast<std::size_t>(other)] == v) ++used;
    if (used + 1 > *vertex_cap_) {
      return "vertex " + std::to_string(v) + " already has " + std::to_string(used) + " queried edge(s), cap is " +
             std::to_string(*vertex_cap_);
    }
  }
  return {};
}

bool LegalEdgeSets::can_add(const QuerySet& q, EdgeId e) const { return why_not(q, e).empty(); }

int LegalEdgeSets::rank() const {
  // Greedy construction reaches the rank of any matroid.
  QuerySet q(in_ground_.size());
  int size = 0;
  for (std::size_t i = 0; i < in_ground_.size(); ++i) {
    if (can_add(q, static_cast<EdgeId>(i))) {
      q.set(static_cast<EdgeId>(i));
      ++size;
    }
  }
  return size;
}

std::vector<EdgeId> legal_extensions(const QuerySet& q, const LegalEdgeSets& legal) {
  std::vector<EdgeId> out;
  if (legal.max_edges() && static_cast<int>(q.count()) >= *legal.max_edges()) return out;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (legal.can_add(q, static_cast<EdgeId>(i))) out.push_back(static_cast<EdgeId>(i));
  }
  return out;
}

std::vector<QuerySet> children(const QuerySet& q, const LegalEdgeSets& legal) {
  std::vector<QuerySet> out;
  for (EdgeId e : legal_extensions(q, legal)) out.push_back(q.with(e));
  return out;
}

}  // namespace kxq

#include "kxq/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "kxq/errors.hpp"
#include "kxq/rng.hpp"

namespace kxq {

std::string to_string(VertexKind kind) { return kind == VertexKind::ndd ? "ndd" : "pair"; }
std::string to_string(StructureKind kind) { return kind == StructureKind::chain ? "chain" : "cycle"; }

std::size_t ExchangeGraph::ndd_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(vertices.begin(), vertices.end(), [](const Vertex& v) { return v.kind == VertexKind::ndd; }));
}

std::vector<std::vector<EdgeId>> ExchangeGraph::out_edges() const {
  std::vector<std::vector<EdgeId>> out(vertices.size());
  for (const Edge& e : edges) out[static_cast<std::size_t>(e.source)].push_back(e.id);
  for (auto& list : out) std::sort(list.begin(), list.end());
  return out;
}

std::vector<Violation> validate_graph(const ExchangeGraph& graph) {
  std::vector<Violation> out;
  const auto n = static_cast<long>(graph.vertices.size());

  std::set<long> vertex_ids;
  for (std::size_t i = 0; i < graph.vertices.size(); ++i) {
    const long id = graph.vertices[i].id;
    const std::string entity = "vertex " + std::to_string(id);
    if (!vertex_ids.insert(id).second) {
      out.push_back({entity, "duplicate vertex id"});
    } else if (id != static_cast<long>(i)) {
      out.push_back({entity, "vertex ids must be contiguous from 0 (expected " + std::to_string(i) + ")"});
    }
  }

  auto vertex_exists = [&](long v) { return v >= 0 && v < n; };
  std::set<long> edge_ids;
  std::set<std::pair<long, long>> arcs;
  for (std::size_t i = 0; i < graph.edges.size(); ++i) {
    const Edge& e = graph.edges[i];
    const std::string entity = "edge " + std::to_string(e.id);
    if (!edge_ids.insert(e.id).second) {
      out.push_back({entity, "duplicate edge id"});
    } else if (e.id != static_cast<long>(i)) {
      out.push_back({entity, "edge ids must be contiguous from 0 (expected " + std::to_string(i) + ")"});
    }
    const bool endpoints_ok = vertex_exists(e.source) && vertex_exists(e.target);
    if (!endpoints_ok) {
      out.push_back({entity, "references a vertex that does not exist"});
    }
    if (e.source == e.target) out.push_back({entity, "self-loop (source equals target)"});
    if (endpoints_ok && graph.vertices[static_cast<std::size_t>(e.target)].kind == VertexKind::ndd) {
      out.push_back({entity, "edge into ndd vertex " + std::to_string(e.target)});
    }
    if (!arcs.insert({e.source, e.target}).second) {
      out.push_back({entity, "parallel edge (more than one edge for this ordered vertex pair)"});
    }
    if (!std::isfinite(e.weight) || e.weight < 0.0) out.push_back({entity, "weight must be a finite value >= 0"});
  }
  return out;
}

void require_valid(const ExchangeGraph& graph) {
  const auto violations = validate_graph(graph);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid exchange graph:";
  for (const auto& v : violations) msg << "\n  " << v.to_string();
  throw ValidationError(msg.str());
}

namespace {

class StructureEnumerator {
 public:
  StructureEnumerator(const ExchangeGraph& graph, StructureCaps caps)
      : graph_(graph), caps_(caps), out_edges_(graph.out_edges()), on_path_(graph.vertex_count(), 0) {}

  std::vector<CycleChain> run() {
    for (const Vertex& v : graph_.vertices) {
      if (v.kind == VertexKind::pair && caps_.max_cycle_len >= 2) {
        start_ = v.id;
        visit_cycle(v.id);
      }
    }
    for (const Vertex& v : graph_.vertices) {
      if (v.kind == VertexKind::ndd && caps_.max_chain_len >= 1) {
        path_vertices_ = {v.id};
        on_path_[static_cast<std::size_t>(v.id)] = 1;
        extend_chain(v.id);
        on_path_[static_cast<std::size_t>(v.id)] = 0;
      }
    }
    std::sort(found_.begin(), found_.end(), [](const CycleChain& a, const CycleChain& b) { return a.edges < b.edges; });
    return std::move(found_);
  }

 private:
  const Edge& edge(EdgeId id) const { return graph_.edges[static_cast<std::size_t>(id)]; }

  // Cycles are grown only through vertices larger than the start, so each
  // cycle is found once, already rotated to its smallest vertex.
  void visit_cycle(VertexId at) {
    on_path_[static_cast<std::size_t>(at)] = 1;
    path_vertices_.push_back(at);
    for (EdgeId id : out_edges_[static_cast<std::size_t>(at)]) {
      const VertexId next = edge(id).target;
      path_edges_.push_back(id);
      if (next == start_) {
        if (path_edges_.size() >= 2) emit(StructureKind::cycle);
      } else if (next > start_ && !on_path_[static_cast<std::size_t>(next)] &&
                 static_cast<int>(path_edges_.size()) < caps_.max_cycle_len) {
        visit_cycle(next);
      }
      path_edges_.pop_back();
    }
    path_vertices_.pop_back();
    on_path_[static_cast<std::size_t>(at)] = 0;
  }

  void extend_chain(VertexId at) {
    for (EdgeId id : out_edges_[static_cast<std::size_t>(at)]) {
      const VertexId next = edge(id).target;
      if (on_path_[static_cast<std::size_t>(next)]) continue;
      path_edges_.push_back(id);
      path_vertices_.push_back(next);
      on_path_[static_cast<std::size_t>(next)] = 1;
      emit(StructureKind::chain);
      if (static_cast<int>(path_edges_.size()) < caps_.max_chain_len) extend_chain(next);
      on_path_[static_cast<std::size_t>(next)] = 0;
      path_vertices_.pop_back();
      path_edges_.pop_back();
    }
  }

  void emit(StructureKind kind) {
    CycleChain c;
    c.kind = kind;
    c.edges = path_edges_;
    c.vertices = path_vertices_;
    for (EdgeId id : c.edges) {
      c.weights.push_back(edge(id).weight);
      c.nominal_weight += edge(id).weight;
    }
    found_.push_back(std::move(c));
  }

  const ExchangeGraph& graph_;
  StructureCaps caps_;
  std::vector<std::vector<EdgeId>> out_edges_;
  std::vector<char> on_path_;
  std::vector<EdgeId> path_edges_;
  std::vector<VertexId> path_vertices_;
  VertexId start_ = 0;
  std::vector<CycleChain> found_;
};

}  // namespace

std::vector<CycleChain> enumerate_structures(const ExchangeGraph& graph, StructureCaps caps) {
  require_valid(graph);
  if (caps.max_cycle_len < 1 || caps.max_chain_len < 1) {
    throw ValidationError("structure length caps must be >= 1");
  }
  return StructureEnumerator(graph, caps).run();
}

ExchangeGraph generate_random_graph(int n, double p, std::uint64_t seed) {
  if (n < 1) throw ValidationError("random graph needs n >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("edge probability must lie in [0, 1]");

  const CounterStream stream(seed, Phase::graph);
  const auto un = static_cast<std::uint64_t>(n);
  ExchangeGraph g;
  std::vector<char> has_incoming(static_cast<std::size_t>(n), 0);
  auto maybe_add = [&](int from, int to) {
    if (stream.uniform(static_cast<std::uint64_t>(from) * un + static_cast<std::uint64_t>(to)) < p) {
      g.edges.push_back({static_cast<EdgeId>(g.edges.size()), from, to, 1.0});
      has_incoming[static_cast<std::size_t>(to)] = 1;
    }
  };
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      maybe_add(i, j);
      maybe_add(j, i);
    }
  }
  g.vertices.reserve(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) {
    g.vertices.push_back({v, has_incoming[static_cast<std::size_t>(v)] ? VertexKind::pair : VertexKind::ndd});
  }
  return g;
}

}  // namespace kxq

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kxq {

using VertexId = int;
using EdgeId = int;

enum class VertexKind { pair, ndd };

struct Vertex {
  VertexId id = 0;
  VertexKind kind = VertexKind::pair;

  bool operator==(const Vertex&) const = default;
};

struct Edge {
  EdgeId id = 0;
  VertexId source = 0;
  VertexId target = 0;
  double weight = 1.0;

  bool operator==(const Edge&) const = default;
};

/// Compatibility graph. Edge ids index every per-edge vector in the library
/// (query sets, rejections, failures, distributions), so they must be
/// contiguous from 0; validate_graph checks this.
struct ExchangeGraph {
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;

  std::size_t vertex_count() const noexcept { return vertices.size(); }
  std::size_t edge_count() const noexcept { return edges.size(); }
  std::size_t ndd_count() const noexcept;
  bool is_ndd(VertexId v) const { return vertices.at(static_cast<std::size_t>(v)).kind == VertexKind::ndd; }

  /// Out-edge ids per vertex, ascending. Assumes a valid graph.
  std::vector<std::vector<EdgeId>> out_edges() const;

  bool operator==(const ExchangeGraph&) const = default;
};

struct Violation {
  std::string entity;  // e.g. "edge 4"
  std::string rule;    // the invariant that does not hold

  std::string to_string() const { return entity + ": " + rule; }
  bool operator==(const Violation&) const = default;
};

/// Empty iff every graph invariant holds.
std::vector<Violation> validate_graph(const ExchangeGraph& graph);

/// Throws ValidationError listing every violation.
void require_valid(const ExchangeGraph& graph);

enum class StructureKind { cycle, chain };

/// A cycle or chain, the unit the clearing problem selects. `edges` is in
/// traversal order with `weights` alongside; `vertices` lists every vertex
/// the structure occupies (for a chain, the ndd first).
struct CycleChain {
  StructureKind kind = StructureKind::cycle;
  std::vector<EdgeId> edges;
  std::vector<double> weights;
  std::vector<VertexId> vertices;
  double nominal_weight = 0.0;

  std::size_t length() const noexcept { return edges.size(); }
  bool operator==(const CycleChain&) const = default;
};

struct StructureCaps {
  int max_cycle_len = 3;
  int max_chain_len = 3;
};

/// Every cycle (rotated to start at its smallest vertex id) and every chain
/// of each length up to the caps, sorted by edge-id sequence.
std::vector<CycleChain> enumerate_structures(const ExchangeGraph& graph, StructureCaps caps = {});

/// Directed Erdos-Renyi exchange graph: each ordered vertex pair gets an edge
/// with probability p; vertices left without incoming edges become ndds.
/// Edge ids follow (i, j) row-major order with i < j visited first in the
/// i -> j then j -> i direction. All weights are 1.
ExchangeGraph generate_random_graph(int n, double p, std::uint64_t seed);

std::string to_string(VertexKind kind);
std::string to_string(StructureKind kind);

}  // namespace kxq

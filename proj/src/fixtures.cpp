#include "kxq/fixtures.hpp"

#include "kxq/errors.hpp"

namespace kxq::fixtures {

namespace {

ExchangeGraph build(int vertex_count, const std::vector<int>& ndds, const std::vector<Edge>& edges) {
  ExchangeGraph g;
  for (int v = 0; v < vertex_count; ++v) g.vertices.push_back({v, VertexKind::pair});
  for (int v : ndds) g.vertices[static_cast<std::size_t>(v)].kind = VertexKind::ndd;
  g.edges = edges;
  return g;
}

}  // namespace

ExchangeGraph counterexample_graph() {
  enum : int { A, B, C, D, E, F };
  return build(6, {},
               {
                   {0, A, B, 1.0},
                   {1, B, C, 1.0},
                   {2, C, D, 1.0},
                   {3, B, A, 1.0},
                   {4, C, E, 1.0},
                   {5, E, B, 1.5},
                   {6, D, F, 1.0},
                   {7, F, C, 1.0},
               });
}

ExchangeGraph chain_example_graph() {
  enum : int { n, p1, p2, p3, p4, p5 };
  return build(6, {n},
               {
                   {0, n, p1, 1.0},
                   {1, p1, p2, 1.0},
                   {2, p2, p3, 1.0},
                   {3, p1, p4, 1.0},
                   {4, p4, p1, 1.0},
                   {5, p2, p5, 1.0},
                   {6, p5, p2, 1.0},
               });
}

std::vector<std::string> names() { return {"counterexample", "chain-example"}; }

ExchangeGraph by_name(const std::string& name) {
  if (name == "counterexample") return counterexample_graph();
  if (name == "chain-example") return chain_example_graph();
  throw NotFoundError("unknown fixture graph '" + name + "'");
}

}  // namespace kxq::fixtures

#include <doctest.h>

#include <cmath>

#include "kxq/errors.hpp"
#include "kxq/fixtures.hpp"
#include "kxq/graph.hpp"
#include "oracles.hpp"

using namespace kxq;

namespace {

std::vector<std::vector<VertexId>> cycle_vertex_lists(const std::vector<CycleChain>& all) {
  std::vector<std::vector<VertexId>> out;
  for (const auto& c : all)
    if (c.kind == StructureKind::cycle) out.push_back(c.vertices);
  return out;
}

}  // namespace

TEST_CASE("counterexample graph has exactly three cycles and no chains") {
  const auto g = fixtures::counterexample_graph();
  CHECK(validate_graph(g).empty());
  const auto all = enumerate_structures(g, {3, 3});
  REQUIRE(all.size() == 3);
  // A=0 B=1 C=2 D=3 E=4 F=5
  const auto cycles = cycle_vertex_lists(all);
  CHECK(cycles == std::vector<std::vector<VertexId>>{{0, 1}, {1, 2, 4}, {2, 3, 5}});
  CHECK(all[0].nominal_weight == 2.0);
  CHECK(all[1].nominal_weight == 3.5);
  CHECK(all[2].nominal_weight == 3.0);
}

TEST_CASE("chain example enumerates every chain length and both 2-cycles") {
  const auto g = fixtures::chain_example_graph();
  const auto all = enumerate_structures(g, {3, 3});
  int chains = 0, cycles = 0;
  for (const auto& c : all) (c.kind == StructureKind::chain ? chains : cycles)++;
  CHECK(cycles == 2);
  // n->p1, n->p1->p2, n->p1->p4, n->p1->p2->p3, n->p1->p2->p5
  CHECK(chains == 5);
  CHECK(oracle::edge_sequences(oracle::brute_force_structures(g, 3, 3)).size() == all.size());
}

TEST_CASE("empty graph enumerates nothing") {
  CHECK(enumerate_structures(ExchangeGraph{}).empty());
  CHECK(validate_graph(ExchangeGraph{}).empty());
}

TEST_CASE("structure invariants: nominal weight, shared vertices, canonical rotation") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = generate_random_graph(12, 0.2, seed);
    const auto all = enumerate_structures(g, {3, 3});
    for (std::size_t i = 0; i < all.size(); ++i) {
      const auto& c = all[i];
      double w = 0;
      for (EdgeId e : c.edges) w += g.edges[e].weight;
      CHECK(c.nominal_weight == doctest::Approx(w));
      for (std::size_t k = 0; k + 1 < c.edges.size(); ++k) {
        CHECK(g.edges[c.edges[k]].target == g.edges[c.edges[k + 1]].source);
      }
      if (c.kind == StructureKind::cycle) {
        CHECK(g.edges[c.edges.back()].target == g.edges[c.edges.front()].source);
        CHECK(*std::min_element(c.vertices.begin(), c.vertices.end()) == g.edges[c.edges.front()].source);
        for (VertexId v : c.vertices) CHECK_FALSE(g.is_ndd(v));
      } else {
        CHECK(g.is_ndd(g.edges[c.edges.front()].source));
      }
      if (i > 0) CHECK(all[i - 1].edges < c.edges);
    }
  }
}

TEST_CASE("enumeration equals brute force over vertex sequences on small graphs") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 3 + static_cast<int>(seed % 6);  // up to 8 vertices
    const double p = 0.15 + 0.05 * static_cast<double>(seed % 7);
    const auto g = generate_random_graph(n, p, seed);
    for (auto caps : {StructureCaps{3, 3}, StructureCaps{2, 4}, StructureCaps{4, 1}}) {
      std::set<std::vector<EdgeId>> got;
      for (const auto& c : enumerate_structures(g, caps)) got.insert(c.edges);
      CHECK(got == oracle::edge_sequences(oracle::brute_force_structures(g, caps.max_cycle_len, caps.max_chain_len)));
    }
  }
}

TEST_CASE("enumeration is deterministic") {
  const auto g = generate_random_graph(20, 0.1, 7);
  CHECK(enumerate_structures(g) == enumerate_structures(g));
}

TEST_CASE("random graph generator: degenerate probabilities and reproducibility") {
  const auto empty = generate_random_graph(5, 0.0, 1);
  CHECK(empty.edge_count() == 0);
  CHECK(empty.ndd_count() == 5);

  const auto full = generate_random_graph(3, 1.0, 1);
  CHECK(full.edge_count() == 6);
  CHECK(full.ndd_count() == 0);
  CHECK(validate_graph(full).empty());

  CHECK(generate_random_graph(30, 0.05, 99) == generate_random_graph(30, 0.05, 99));
  CHECK_FALSE(generate_random_graph(30, 0.05, 99) == generate_random_graph(30, 0.05, 100));
}

TEST_CASE("random graph edge count matches the binomial mean") {
  // n(n-1)p = 24.5 edges expected; variance n(n-1)p(1-p).
  const int n = 50;
  const double p = 0.01;
  const int runs = 1000;
  double sum = 0;
  for (int s = 0; s < runs; ++s) {
    const auto g = generate_random_graph(n, p, static_cast<std::uint64_t>(s));
    CHECK(validate_graph(g).empty());
    sum += static_cast<double>(g.edge_count());
  }
  const double mean = n * (n - 1) * p;
  const double se = std::sqrt(n * (n - 1) * p * (1 - p) / runs);
  CHECK(std::abs(sum / runs - mean) < 3 * se);
}

TEST_CASE("generator marks exactly the vertices without incoming edges as ndds") {
  const auto g = generate_random_graph(40, 0.03, 5);
  std::vector<int> indegree(g.vertex_count(), 0);
  for (const auto& e : g.edges) indegree[e.target]++;
  for (const auto& v : g.vertices) CHECK((v.kind == VertexKind::ndd) == (indegree[v.id] == 0));
}

TEST_CASE("validation reports each broken invariant") {
  SUBCASE("edge into an ndd") {
    ExchangeGraph g{{{0, VertexKind::ndd}, {1, VertexKind::pair}}, {{0, 0, 1, 1.0}, {1, 1, 0, 1.0}}};
    const auto v = validate_graph(g);
    REQUIRE(v.size() == 1);
    CHECK(v[0].entity == "edge 1");
  }
  SUBCASE("duplicate edge ids, one violation per duplicate") {
    ExchangeGraph g{{{0, VertexKind::pair}, {1, VertexKind::pair}, {2, VertexKind::pair}},
                    {{0, 0, 1, 1.0}, {0, 1, 2, 1.0}, {0, 2, 0, 1.0}}};
    int duplicates = 0;
    for (const auto& x : validate_graph(g))
      if (x.rule.find("duplicate") != std::string::npos) ++duplicates;
    CHECK(duplicates == 2);
  }
  SUBCASE("self loop, negative weight, missing vertex, parallel edge") {
    ExchangeGraph g{{{0, VertexKind::pair}, {1, VertexKind::pair}},
                    {{0, 0, 0, 1.0}, {1, 0, 1, -1.0}, {2, 0, 7, 1.0}, {3, 0, 1, 1.0}}};
    CHECK(validate_graph(g).size() >= 4);
    CHECK_THROWS_AS(require_valid(g), ValidationError);
    CHECK_THROWS_AS(enumerate_structures(g), ValidationError);
  }
  SUBCASE("non-contiguous vertex ids") {
    ExchangeGraph g{{{0, VertexKind::pair}, {2, VertexKind::pair}}, {}};
    CHECK_FALSE(validate_graph(g).empty());
  }
}

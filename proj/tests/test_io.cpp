#include <doctest.h>

#include <filesystem>

#include "kxq/errors.hpp"
#include "kxq/fixtures.hpp"
#include "kxq/io.hpp"

using namespace kxq;
using io::Json;

namespace fs = std::filesystem;

TEST_CASE("graphs and distributions survive a JSON round trip") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = generate_random_graph(30, 0.05, seed);
    CHECK(io::graph_from_json(io::graph_to_json(g)) == g);
    const auto spec = make_kpd(g, pick_high_risk_edges(g, 0.3, seed), seed);
    const auto back = io::distribution_from_json(io::distribution_to_json(spec), g.edge_count());
    CHECK(back.per_edge() == spec.per_edge());
    CHECK(back.provenance() == spec.provenance());
  }
  const auto fig = fixtures::counterexample_graph();
  const auto text = io::graph_to_json(fig).dump();
  CHECK(io::graph_from_json(Json::parse(text)) == fig);
}

TEST_CASE("invalid graph documents are rejected") {
  CHECK_THROWS_AS(io::graph_from_json(Json::array()), ValidationError);
  CHECK_THROWS_AS(io::graph_from_json(Json{{"vertices", Json::array()}}), ValidationError);
  Json bad_kind = {{"vertices", {{{"id", 0}, {"kind", "donor"}}}}, {"edges", Json::array()}};
  CHECK_THROWS_AS(io::graph_from_json(bad_kind), ValidationError);
  // Edge into a non-directed donor.
  Json into_ndd = {{"vertices", {{{"id", 0}, {"kind", "pair"}}, {{"id", 1}, {"kind", "ndd"}}}},
                   {"edges", {{{"id", 0}, {"source", 0}, {"target", 1}}}}};
  CHECK_THROWS_AS(io::graph_from_json(into_ndd), ValidationError);
  Json wrong_type = {{"vertices", {{{"id", "zero"}, {"kind", "pair"}}}}, {"edges", Json::array()}};
  CHECK_THROWS_AS(io::graph_from_json(wrong_type), ValidationError);
}

TEST_CASE("distribution documents must cover every edge") {
  const auto g = fixtures::counterexample_graph();
  auto doc = io::distribution_to_json(make_simple(g));
  CHECK_THROWS_AS(io::distribution_from_json(doc, g.edge_count() + 1), ValidationError);
  doc["per_edge"].erase("3");
  CHECK_THROWS_AS(io::distribution_from_json(doc, g.edge_count()), ValidationError);
  // A bare per-edge map is accepted.
  const auto bare = io::distribution_to_json(make_simple(g)).at("per_edge");
  CHECK(io::distribution_from_json(bare, g.edge_count()).per_edge() == make_simple(g).per_edge());
}

TEST_CASE("doubles print in the shortest form that reads back exactly") {
  CHECK(io::format_double(0.875) == "0.875");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1.0 / 3.0) == "0.3333333333333333");
  for (double x : {1.0 / 7.0, 2.0 / 3.0, 1e-300, 123456.789}) CHECK(std::stod(io::format_double(x)) == x);
  CHECK(io::format_double(std::nan("")) == "nan");
}

TEST_CASE("files are written with parent directories and read back") {
  const fs::path dir = fs::temp_directory_path() / "kxq_test_io";
  fs::remove_all(dir);
  const auto g = fixtures::chain_example_graph();
  io::write_json_file(dir / "nested" / "graph.json", io::graph_to_json(g));
  CHECK(io::load_graph(dir / "nested" / "graph.json") == g);
  CHECK_THROWS_AS(io::read_json_file(dir / "missing.json"), NotFoundError);
  io::write_text_file(dir / "x.txt", "not json");
  CHECK_THROWS_AS(io::read_json_file(dir / "x.txt"), ValidationError);
  fs::remove_all(dir);
}

#include "kxq/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kxq/errors.hpp"

namespace kxq::io {

namespace {

template <class T>
T required(const Json& obj, const char* field, const std::string& where) {
  if (!obj.is_object() || !obj.contains(field)) throw ValidationError(where + ": missing field '" + field + "'");
  try {
    return obj.at(field).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(where + ": field '" + field + "' has the wrong type");
  }
}

VertexKind parse_kind(const std::string& s, const std::string& where) {
  if (s == "pair") return VertexKind::pair;
  if (s == "ndd") return VertexKind::ndd;
  throw ValidationError(where + ": unknown vertex kind '" + s + "'");
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

Json graph_to_json(const ExchangeGraph& graph) {
  Json vertices = Json::array();
  for (const auto& v : graph.vertices) vertices.push_back({{"id", v.id}, {"kind", to_string(v.kind)}});
  Json edges = Json::array();
  for (const auto& e : graph.edges) {
    edges.push_back({{"id", e.id}, {"source", e.source}, {"target", e.target}, {"weight", e.weight}});
  }
  return {{"vertices", vertices}, {"edges", edges}};
}

ExchangeGraph graph_from_json(const Json& doc) {
  if (!doc.is_object()) throw ValidationError("graph: expected a JSON object");
  ExchangeGraph g;
  const auto vertices = required<Json>(doc, "vertices", "graph");
  const auto edges = required<Json>(doc, "edges", "graph");
  if (!vertices.is_array() || !edges.is_array()) throw ValidationError("graph: vertices and edges must be arrays");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string where = "vertices[" + std::to_string(i) + "]";
    g.vertices.push_back(
        {required<int>(vertices[i], "id", where), parse_kind(required<std::string>(vertices[i], "kind", where), where)});
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    const auto& e = edges[i];
    g.edges.push_back({required<int>(e, "id", where), required<int>(e, "source", where),
                       required<int>(e, "target", where), e.contains("weight") ? required<double>(e, "weight", where) : 1.0});
  }
  require_valid(g);
  return g;
}

Json distribution_to_json(const DistributionSpec& spec) {
  Json per_edge = Json::object();
  for (std::size_t e = 0; e < spec.size(); ++e) {
    const auto& p = spec.per_edge()[e];
    per_edge[std::to_string(e)] = {{"p_reject", p.p_reject},
                                   {"p_success_queried", p.p_success_queried},
                                   {"p_success_unqueried", p.p_success_unqueried}};
  }
  const auto& prov = spec.provenance();
  return {{"per_edge", per_edge},
          {"provenance", {{"kind", prov.kind}, {"seed", prov.seed}, {"high_risk", prov.high_risk}}}};
}

DistributionSpec distribution_from_json(const Json& doc, std::size_t edge_count) {
  if (!doc.is_object()) throw ValidationError("distribution: expected a JSON object");
  const Json& map = doc.contains("per_edge") ? doc.at("per_edge") : doc;
  if (!map.is_object()) throw ValidationError("distribution: per_edge must be an object keyed by edge id");
  std::vector<EdgeProbabilities> per(edge_count);
  std::vector<bool> seen(edge_count, false);
  for (const auto& [key, value] : map.items()) {
    std::size_t pos = 0;
    long id = -1;
    try {
      id = std::stol(key, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != key.size() || id < 0 || static_cast<std::size_t>(id) >= edge_count) {
      throw ValidationError("distribution: '" + key + "' is not an edge id of the graph");
    }
    const auto e = static_cast<std::size_t>(id);
    if (seen[e]) throw ValidationError("distribution: edge " + key + " appears twice");
    seen[e] = true;
    const std::string where = "distribution edge " + key;
    per[e] = {required<double>(value, "p_reject", where), required<double>(value, "p_success_queried", where),
              required<double>(value, "p_success_unqueried", where)};
  }
  for (std::size_t e = 0; e < edge_count; ++e) {
    if (!seen[e]) throw ValidationError("distribution: edge " + std::to_string(e) + " is missing");
  }
  DistributionProvenance prov;
  if (doc.contains("provenance")) {
    const auto& p = doc.at("provenance");
    prov.kind = p.value("kind", std::string("custom"));
    prov.seed = p.value("seed", std::uint64_t{0});
    prov.high_risk = p.value("high_risk", std::vector<EdgeId>{});
  }
  return DistributionSpec(std::move(per), std::move(prov));
}

Json structure_to_json(const CycleChain& c) {
  return {{"kind", to_string(c.kind)},
          {"edges", c.edges},
          {"vertices", c.vertices},
          {"nominal_weight", c.nominal_weight}};
}

Json matching_to_json(const StructurePool& pool, const Matching& matching, const DistributionSpec& spec,
                      const QuerySet& q, const RejectionVector& r) {
  Json selected = Json::array();
  double expected = 0.0;
  for (int i : matching.selected) {
    const auto& c = pool[static_cast<std::size_t>(i)];
    Json item = structure_to_json(c);
    const double w = expected_structure_weight(c, spec, q, r);
    item["index"] = i;
    item["expected_weight"] = w;
    expected += w;
    selected.push_back(std::move(item));
  }
  return {{"structures", selected}, {"nominal_weight", matching.nominal_weight}, {"expected_weight", expected}};
}

Json selection_to_json(const SelectionResult& result, const EvalConfig& eval) {
  return {{"method", result.method},
          {"queried_edges", result.queried.members()},
          {"objective_value", result.value},
          {"evaluation",
           {{"mode", result.queried.count() < static_cast<std::size_t>(std::max(eval.exact_cap, 0)) ? "exact" : "sampled"},
            {"exact_cap", eval.exact_cap},
            {"samples", eval.samples},
            {"seed", eval.seed}}},
          {"trace", result.trace},
          {"final_edges", result.final_set.members()},
          {"final_value", result.final_value},
          {"oracle_calls", result.oracle_calls},
          {"nodes_evaluated", result.nodes_evaluated}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw NotFoundError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json_file(const std::filesystem::path& path, const Json& doc) { write_text_file(path, doc.dump(2) + "\n"); }

ExchangeGraph load_graph(const std::filesystem::path& path) { return graph_from_json(read_json_file(path)); }

}  // namespace kxq::io

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "kxq/graph.hpp"
#include "kxq/matching.hpp"
#include "kxq/objective.hpp"
#include "kxq/selection.hpp"
#include "kxq/uncertainty.hpp"

namespace kxq::io {

using Json = nlohmann::ordered_json;

/// {"vertices": [{id, kind}], "edges": [{id, source, target, weight}]}
Json graph_to_json(const ExchangeGraph& graph);
/// Parses and validates; throws ValidationError naming every violation.
ExchangeGraph graph_from_json(const Json& doc);

/// {"per_edge": {"<edge id>": {p_reject, p_success_queried,
/// p_success_unqueried}}, "provenance": {kind, seed, high_risk}}
Json distribution_to_json(const DistributionSpec& spec);
/// Accepts the document above or a bare per-edge map. The map must cover
/// edge ids 0..edge_count-1 exactly once.
DistributionSpec distribution_from_json(const Json& doc, std::size_t edge_count);

/// Selected structures with their nominal and expected weights.
Json matching_to_json(const StructurePool& pool, const Matching& matching, const DistributionSpec& spec,
                      const QuerySet& q, const RejectionVector& r);

Json structure_to_json(const CycleChain& c);

/// {method, queried_edges, objective_value, evaluation{mode, samples, seed},
/// trace, final_edges, final_value, oracle_calls}
Json selection_to_json(const SelectionResult& result, const EvalConfig& eval);

Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline; parent directories are created.
void write_json_file(const std::filesystem::path& path, const Json& doc);
void write_text_file(const std::filesystem::path& path, const std::string& text);

ExchangeGraph load_graph(const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

}  // namespace kxq::io

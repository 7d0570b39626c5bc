#include "kxq/service.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <fstream>
#include <random>
#include <regex>

#include "kxq/errors.hpp"
#include "kxq/fixtures.hpp"

namespace kxq::service {

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[80];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

std::string new_session_id() {
  static std::atomic<std::uint64_t> counter{0};
  static const std::uint64_t salt = [] {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }();
  const std::uint64_t bits = mix64(salt ^ mix64(counter.fetch_add(1) + 1));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(bits));
  return buf;
}

ApiError bad_request(const std::string& message, Json detail = Json::object()) {
  return ApiError(400, "invalid_request", message, std::move(detail));
}

template <class T>
T field_or(const Json& obj, const char* name, T fallback) {
  if (!obj.is_object() || !obj.contains(name) || obj.at(name).is_null()) return fallback;
  try {
    return obj.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw bad_request(std::string("field '") + name + "' has the wrong type");
  }
}

Json graph_summary(const std::string& name, const std::string& source, const ExchangeGraph& g) {
  return {{"name", name},
          {"source", source},
          {"vertices", g.vertex_count()},
          {"edges", g.edge_count()},
          {"ndds", g.ndd_count()},
          {"structures", enumerate_structures(g).size()}};
}

bool valid_graph_name(const std::string& name) {
  static const std::regex pattern("[A-Za-z0-9_-]{1,64}");
  return std::regex_match(name, pattern);
}

}  // namespace

SessionService::SessionService(ServiceOptions options) : options_(std::move(options)) {
  if (!options_.storage_dir.empty()) {
    std::filesystem::create_directories(options_.storage_dir / "sessions");
    std::filesystem::create_directories(options_.storage_dir / "graphs");
    replay_from_disk();
  }
}

Json SessionService::list_graphs() const {
  Json out = Json::array();
  for (const auto& name : fixtures::names()) out.push_back(graph_summary(name, "fixture", fixtures::by_name(name)));
  std::shared_lock lock(graphs_mutex_);
  for (const auto& [name, g] : uploads_) out.push_back(graph_summary(name, "upload", g));
  return {{"graphs", out}};
}

Json SessionService::upload_graph(const std::string& name, const Json& graph) {
  if (!valid_graph_name(name)) throw bad_request("graph names use 1-64 letters, digits, '-' or '_'");
  ExchangeGraph g;
  try {
    g = io::graph_from_json(graph);
  } catch (const ValidationError& e) {
    throw ApiError(422, "invalid_graph", e.what());
  }
  const auto names = fixtures::names();
  std::unique_lock lock(graphs_mutex_);
  if (uploads_.count(name) || std::find(names.begin(), names.end(), name) != names.end()) {
    throw ApiError(409, "graph_exists", "a graph named '" + name + "' already exists");
  }
  if (!options_.storage_dir.empty()) {
    io::write_json_file(options_.storage_dir / "graphs" / (name + ".json"), io::graph_to_json(g));
  }
  uploads_.emplace(name, g);
  return graph_summary(name, "upload", g);
}

ExchangeGraph SessionService::resolve_graph(const Json& ref) const {
  if (ref.is_string()) {
    const auto name = ref.get<std::string>();
    {
      std::shared_lock lock(graphs_mutex_);
      if (auto it = uploads_.find(name); it != uploads_.end()) return it->second;
    }
    try {
      return fixtures::by_name(name);
    } catch (const NotFoundError&) {
      throw ApiError(404, "graph_not_found", "no graph named '" + name + "'");
    }
  }
  if (ref.is_object()) {
    try {
      return io::graph_from_json(ref);
    } catch (const ValidationError& e) {
      throw ApiError(422, "invalid_graph", e.what());
    }
  }
  throw bad_request("'graph' must be a graph name or a graph object");
}

std::shared_ptr<Session> SessionService::build_session(const std::string& id, const Json& request) {
  if (!request.is_object()) throw bad_request("request body must be a JSON object");
  auto s = std::make_shared<Session>();
  s->id = id;

  if (!request.contains("graph")) throw bad_request("missing field 'graph'");
  const Json& graph_ref = request.at("graph");
  ExchangeGraph graph = resolve_graph(graph_ref);
  s->graph_name = graph_ref.is_string() ? graph_ref.get<std::string>() : field_or<std::string>(request, "graph_name", "inline");

  const Json dist = field_or<Json>(request, "distribution", Json{{"kind", "simple"}});
  DistributionSpec spec;
  try {
    const std::string kind = field_or<std::string>(dist, "kind", dist.contains("per_edge") ? "custom" : "simple");
    if (dist.contains("per_edge")) {
      spec = io::distribution_from_json(dist, graph.edge_count());
    } else if (kind == "simple") {
      spec = make_simple(graph);
    } else if (kind == "kpd") {
      const auto seed = field_or<std::uint64_t>(dist, "seed", 0);
      const auto fraction = field_or<double>(dist, "high_risk_fraction", 0.0);
      if (!(fraction >= 0.0 && fraction <= 1.0)) throw ValidationError("high_risk_fraction must lie in [0, 1]");
      spec = make_kpd(graph, pick_high_risk_edges(graph, fraction, seed), seed);
    } else {
      throw ValidationError("distribution kind must be 'simple' or 'kpd', or give per_edge");
    }
  } catch (const ValidationError& e) {
    throw ApiError(422, "invalid_distribution", e.what());
  }

  PolicyKind policy;
  try {
    policy = parse_policy(field_or<std::string>(request, "policy", "max_weight"));
  } catch (const ValidationError& e) {
    throw bad_request(e.what());
  }

  s->method = field_or<std::string>(request, "method", "greedy");
  if (s->method != "greedy" && s->method != "mcts") throw bad_request("method must be 'greedy' or 'mcts'");
  s->seed = field_or<std::uint64_t>(request, "seed", 0);

  const Json mcts = field_or<Json>(request, "mcts", Json::object());
  s->mcts.lookahead = field_or<int>(mcts, "lookahead", 2);
  s->mcts.iterations = std::min(field_or<long>(mcts, "iterations", 500), options_.max_mcts_iterations);
  if (s->mcts.lookahead < 1 || s->mcts.iterations < 1) throw bad_request("mcts lookahead and iterations must be >= 1");

  const Json eval_doc = field_or<Json>(request, "eval", Json::object());
  EvalConfig eval;
  eval.exact_cap = field_or<int>(eval_doc, "exact_cap", kDefaultExactCap);
  eval.samples = field_or<int>(eval_doc, "samples", 1000);
  eval.seed = s->seed;
  if (eval.exact_cap < 0 || eval.exact_cap > 20 || eval.samples < 1) {
    throw bad_request("eval.exact_cap must lie in [0, 20] and eval.samples be >= 1");
  }

  const Json legal_doc = field_or<Json>(request, "legal", Json::object());
  const int budget = field_or<int>(legal_doc, "budget", static_cast<int>(graph.edge_count()));
  const int cap = field_or<int>(legal_doc, "per_vertex_cap", 0);
  const auto ground = field_or<std::vector<EdgeId>>(legal_doc, "ground_edges", {});
  try {
    LegalEdgeSets legal = cap > 0 ? LegalEdgeSets::composite(graph, budget, cap) : LegalEdgeSets::budget(graph, budget);
    s->legal = ground.empty() ? legal : legal.restricted_to(ground);
  } catch (const ValidationError& e) {
    throw bad_request(e.what());
  }

  s->create_request = {{"graph", io::graph_to_json(graph)},
                       {"graph_name", s->graph_name},
                       {"distribution", io::distribution_to_json(spec)},
                       {"policy", to_string(policy)},
                       {"legal", {{"budget", budget}, {"per_vertex_cap", cap}, {"ground_edges", ground}}},
                       {"method", s->method},
                       {"seed", s->seed},
                       {"mcts", {{"lookahead", s->mcts.lookahead}, {"iterations", s->mcts.iterations}}},
                       {"eval", {{"exact_cap", eval.exact_cap}, {"samples", eval.samples}}}};

  s->objective = std::make_unique<ObjectiveEvaluator>(std::move(graph), std::move(spec), policy, eval);
  s->q = s->objective->empty_query();
  s->r = RejectionVector(s->q.size());
  s->baseline = s->objective->value(s->q);
  return s;
}

Json SessionService::create_session(const Json& request) {
  const std::string id = new_session_id();
  auto s = build_session(id, request);
  append_event(id, {{"type", "created"}, {"id", id}, {"timestamp", utc_timestamp()}, {"request", s->create_request}});
  Json state;
  {
    std::lock_guard lock(s->mutex);
    state = state_of(*s);
  }
  std::unique_lock lock(sessions_mutex_);
  sessions_.emplace(id, std::move(s));
  return state;
}

std::shared_ptr<Session> SessionService::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ApiError(404, "session_not_found", "no session '" + id + "'");
  return it->second;
}

Json SessionService::state_of(Session& s) const {
  const auto& g = s.objective->graph();
  Json state = {{"id", s.id},
                {"status", s.finalized ? "finalized" : "active"},
                {"graph", {{"name", s.graph_name},
                           {"vertices", g.vertex_count()},
                           {"edges", g.edge_count()},
                           {"ndds", g.ndd_count()},
                           {"structures", s.objective->pool().size()}}},
                {"policy", to_string(s.objective->policy())},
                {"method", s.method},
                {"budget", {{"used", s.q.count()}, {"total", s.legal->rank()}}},
                {"queried_edges", s.q.members()},
                {"rejected_edges", s.r.members()},
                {"history", s.history},
                {"baseline", s.baseline}};
  const Matching m = s.objective->outcome_matching(s.q, s.r);
  state["current_matching"] = io::matching_to_json(s.objective->pool(), m, s.objective->spec(), s.q, s.r);
  state["expected_weight"] = state["current_matching"]["expected_weight"];
  if (s.final_result) state["final"] = *s.final_result;
  return state;
}

Json SessionService::get_session(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return state_of(*s);
}

Json SessionService::recommendation_of(Session& s) {
  if (s.cached_recommendation) return *s.cached_recommendation;
  auto& obj = *s.objective;
  Json out = {{"session_id", s.id},
              {"method", s.method},
              {"budget", {{"used", s.q.count()}, {"total", s.legal->rank()}}}};
  std::optional<EdgeId> edge;
  std::optional<BranchValues> branches;
  long visits = -1;
  if (s.method == "greedy") {
    branches = greedy_next_edge(obj, *s.legal, s.q, s.r);
    if (branches) edge = branches->edge;
  } else {
    MultiStageMctsConfig cfg = s.mcts;
    cfg.seed = CounterStream(s.seed, Phase::rollout, s.q.count()).bits(0);
    if (auto rec = mcts_next_edge(obj, *s.legal, s.q, s.r, cfg)) {
      edge = rec->edge;
      visits = rec->visits;
      branches = branch_values(obj, s.q, s.r, rec->edge);
    }
  }
  if (!edge) {
    out["edge"] = nullptr;
  } else {
    const auto& e = obj.graph().edges[static_cast<std::size_t>(*edge)];
    Json structures = Json::array();
    for (int i : obj.pool().structures_with_edge(*edge)) {
      Json item = io::structure_to_json(obj.pool()[static_cast<std::size_t>(i)]);
      item["index"] = i;
      structures.push_back(std::move(item));
    }
    out["edge"] = {{"id", e.id},
                   {"source", e.source},
                   {"target", e.target},
                   {"weight", e.weight},
                   {"p_reject", branches->p_reject},
                   {"structures", structures},
                   {"accept_value", branches->accept_value},
                   {"reject_value", branches->reject_value},
                   {"expected_value", branches->value}};
    if (visits >= 0) out["edge"]["visits"] = visits;
  }
  s.cached_recommendation = out;
  return out;
}

Json SessionService::recommend(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (s->finalized) throw ApiError(409, "session_finalized", "session '" + id + "' is finalized");
  return recommendation_of(*s);
}

Json SessionService::apply_response(Session& s, EdgeId edge, bool rejected, const std::string& timestamp) {
  if (s.finalized) throw ApiError(409, "session_finalized", "session '" + s.id + "' is finalized");
  if (edge < 0 || static_cast<std::size_t>(edge) >= s.q.size()) {
    throw ApiError(422, "unknown_edge", "edge " + std::to_string(edge) + " does not exist");
  }
  if (s.q.test(edge)) {
    throw ApiError(409, "already_queried", "edge " + std::to_string(edge) + " already has a response");
  }
  if (!s.legal->can_add(s.q, edge)) {
    throw ApiError(422, "illegal_query", "querying edge " + std::to_string(edge) + " breaks the legal-set limits",
                   {{"reason", s.legal->why_not(s.q, edge)}});
  }
  s.q.set(edge);
  if (rejected) s.r.set(edge);
  s.history.push_back({{"edge_id", edge}, {"response", rejected ? "rejected" : "accepted"}, {"timestamp", timestamp}});
  s.cached_recommendation.reset();
  return state_of(s);
}

Json SessionService::record_response(const std::string& id, const Json& body) {
  if (!body.is_object() || !body.contains("edge_id") || !body.at("edge_id").is_number_integer()) {
    throw bad_request("body needs an integer 'edge_id'");
  }
  const auto response = field_or<std::string>(body, "response", "");
  if (response != "accepted" && response != "rejected") {
    throw bad_request("'response' must be 'accepted' or 'rejected'");
  }
  const auto edge = body.at("edge_id").get<EdgeId>();
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  const std::string ts = utc_timestamp();
  Json state = apply_response(*s, edge, response == "rejected", ts);
  append_event(id, {{"type", "response"}, {"edge_id", edge}, {"response", response}, {"timestamp", ts}});
  return state;
}

Json SessionService::finalize_locked(Session& s) {
  if (s.finalized) throw ApiError(409, "session_finalized", "session '" + s.id + "' is already finalized");
  const Matching m = s.objective->outcome_matching(s.q, s.r);
  Json matching = io::matching_to_json(s.objective->pool(), m, s.objective->spec(), s.q, s.r);
  s.final_result = Json{{"matching", matching}, {"expected_weight", matching["expected_weight"]}};
  s.finalized = true;
  s.cached_recommendation.reset();
  return state_of(s);
}

Json SessionService::finalize(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  Json state = finalize_locked(*s);
  append_event(id, {{"type", "finalized"}, {"timestamp", utc_timestamp()}});
  return state;
}

std::vector<std::string> SessionService::session_ids() const {
  std::shared_lock lock(sessions_mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, _] : sessions_) ids.push_back(id);
  return ids;
}

void SessionService::append_event(const std::string& id, const Json& event) const {
  if (options_.storage_dir.empty()) return;
  std::ofstream out(options_.storage_dir / "sessions" / (id + ".jsonl"), std::ios::app | std::ios::binary);
  if (!out) throw ApiError(500, "storage_error", "cannot append to the log of session '" + id + "'");
  out << event.dump() << '\n';
  out.flush();
}

void SessionService::replay_from_disk() {
  for (const auto& entry : std::filesystem::directory_iterator(options_.storage_dir / "graphs")) {
    if (entry.path().extension() != ".json") continue;
    uploads_.emplace(entry.path().stem().string(), io::load_graph(entry.path()));
  }
  std::vector<std::filesystem::path> logs;
  for (const auto& entry : std::filesystem::directory_iterator(options_.storage_dir / "sessions")) {
    if (entry.path().extension() == ".jsonl") logs.push_back(entry.path());
  }
  std::sort(logs.begin(), logs.end());
  for (const auto& path : logs) {
    std::ifstream in(path);
    std::string line;
    std::shared_ptr<Session> s;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const Json event = Json::parse(line);
      const auto type = event.at("type").get<std::string>();
      if (type == "created") {
        s = build_session(event.at("id").get<std::string>(), event.at("request"));
      } else if (!s) {
        throw std::runtime_error(path.string() + ": event before creation");
      } else if (type == "response") {
        apply_response(*s, event.at("edge_id").get<EdgeId>(), event.at("response").get<std::string>() == "rejected",
                       event.at("timestamp").get<std::string>());
      } else if (type == "finalized") {
        finalize_locked(*s);
      }
    }
    if (s) sessions_.emplace(s->id, std::move(s));
  }
}

}  // namespace kxq::service

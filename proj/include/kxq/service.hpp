#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "kxq/io.hpp"
#include "kxq/legal_sets.hpp"
#include "kxq/multistage.hpp"
#include "kxq/objective.hpp"

namespace httplib {
class Server;
}

namespace kxq::service {

using io::Json;

/// Error with an HTTP status and a machine-readable code. Serialized as
/// {"code", "message", "detail"}.
class ApiError : public std::runtime_error {
 public:
  ApiError(int status, std::string code, const std::string& message, Json detail = Json::object())
      : std::runtime_error(message), status_(status), code_(std::move(code)), detail_(std::move(detail)) {}

  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }
  const Json& detail() const noexcept { return detail_; }
  Json to_json() const { return {{"code", code_}, {"message", what()}, {"detail", detail_}}; }

 private:
  int status_;
  std::string code_;
  Json detail_;
};

struct ServiceOptions {
  /// Where session logs and uploaded graphs live. Empty: memory only.
  std::filesystem::path storage_dir;
  /// Upper bound on tree-search iterations per recommendation.
  long max_mcts_iterations = 5000;
  /// Optional static bearer token; empty disables the check.
  std::string token;
};

/// One live pre-screening round. All access goes through SessionService,
/// which serializes mutations per session.
struct Session {
  std::string id;
  Json create_request;  // resolved: inline graph and distribution
  std::string graph_name;
  std::string method;  // greedy or mcts
  std::uint64_t seed = 0;
  MultiStageMctsConfig mcts;
  std::unique_ptr<ObjectiveEvaluator> objective;
  std::optional<LegalEdgeSets> legal;
  QuerySet q;
  RejectionVector r;
  Json history = Json::array();
  bool finalized = false;
  double baseline = 0.0;
  std::optional<Json> cached_recommendation;
  std::optional<Json> final_result;
  std::mutex mutex;
};

/// Session logic behind the HTTP API. Every method returns the JSON body of
/// a successful response or throws ApiError.
class SessionService {
 public:
  explicit SessionService(ServiceOptions options = {});

  /// Fixture graphs plus uploads, by name.
  Json list_graphs() const;
  /// Stores a graph under `name` (validated). Conflict if the name exists.
  Json upload_graph(const std::string& name, const Json& graph);

  Json create_session(const Json& request);
  Json get_session(const std::string& id);
  Json recommend(const std::string& id);
  Json record_response(const std::string& id, const Json& body);
  Json finalize(const std::string& id);

  std::vector<std::string> session_ids() const;
  const ServiceOptions& options() const noexcept { return options_; }

 private:
  std::shared_ptr<Session> find(const std::string& id) const;
  std::shared_ptr<Session> build_session(const std::string& id, const Json& request);
  Json state_of(Session& s) const;
  Json recommendation_of(Session& s);
  Json apply_response(Session& s, EdgeId edge, bool rejected, const std::string& timestamp);
  Json finalize_locked(Session& s);
  void append_event(const std::string& id, const Json& event) const;
  void replay_from_disk();
  ExchangeGraph resolve_graph(const Json& ref) const;

  ServiceOptions options_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  mutable std::shared_mutex graphs_mutex_;
  std::map<std::string, ExchangeGraph> uploads_;
};

/// Registers every route of the JSON API on `server`.
void mount_routes(httplib::Server& server, SessionService& service);

}  // namespace kxq::service

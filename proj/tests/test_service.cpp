#include <doctest.h>
#include <httplib.h>

#include <filesystem>
#include <thread>

#include "kxq/fixtures.hpp"
#include "kxq/service.hpp"
#include "oracles.hpp"

using namespace kxq;
using service::ApiError;
using service::Json;
using service::ServiceOptions;
using service::SessionService;

namespace fs = std::filesystem;

namespace {

Json counterexample_request() { return {{"graph", "counterexample"}, {"method", "greedy"}}; }

/// Status and code of the ApiError thrown by `fn`.
template <class Fn>
std::pair<int, std::string> api_error_of(Fn fn) {
  try {
    fn();
  } catch (const ApiError& e) {
    return {e.status(), e.code()};
  }
  return {0, ""};
}

Json response(EdgeId e, const char* what) { return {{"edge_id", e}, {"response", what}}; }

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  return dir;
}

/// Runs the HTTP routes on an ephemeral port for the life of the object.
class TestServer {
 public:
  explicit TestServer(SessionService& svc) {
    service::mount_routes(server_, svc);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~TestServer() {
    server_.stop();
    thread_.join();
  }
  int port() const { return port_; }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

}  // namespace

TEST_CASE("counterexample session walkthrough") {
  SessionService svc;
  const Json created = svc.create_session(counterexample_request());
  const std::string id = created.at("id");
  CHECK(created.at("status") == "active");
  CHECK(created.at("baseline").get<double>() == doctest::Approx(7.0 / 8).epsilon(1e-12));
  CHECK(created.at("expected_weight").get<double>() == doctest::Approx(7.0 / 8).epsilon(1e-12));
  CHECK(created.at("budget").at("total") == 8);
  CHECK(created.at("graph").at("structures") == 3);

  // The recommendation is the best single query by the exact objective.
  const auto g = fixtures::counterexample_graph();
  EdgeId best_edge = -1;
  oracle::Fraction best(-1);
  for (EdgeId e = 0; e < 8; ++e) {
    const auto v = oracle::simple_max_weight_objective(g, {e});
    if (best < v) {
      best = v;
      best_edge = e;
    }
  }
  const Json rec = svc.recommend(id);
  CHECK(rec.at("edge").at("id") == best_edge);
  CHECK(rec.at("edge").at("expected_value").get<double>() == doctest::Approx(best.value()).epsilon(1e-12));
  CHECK(rec.at("edge").at("p_reject") == 0.5);
  CHECK_FALSE(rec.at("edge").at("structures").empty());
  CHECK(svc.recommend(id) == rec);  // repeat requests are idempotent

  const Json after = svc.record_response(id, response(fixtures::kE3, "rejected"));
  CHECK(after.at("queried_edges") == Json::array({fixtures::kE3}));
  CHECK(after.at("rejected_edges") == Json::array({fixtures::kE3}));
  CHECK(after.at("history").size() == 1);
  CHECK(after.at("budget").at("used") == 1);

  const Json done = svc.finalize(id);
  CHECK(done.at("status") == "finalized");
  const Json& final_matching = done.at("final").at("matching");
  REQUIRE(final_matching.at("structures").size() == 1);
  // The B -> C -> E -> B cycle, with every edge unqueried.
  CHECK(final_matching.at("structures")[0].at("edges") == Json::array({1, 4, 5}));
  CHECK(done.at("final").at("expected_weight").get<double>() == doctest::Approx(3.5 / 8).epsilon(1e-12));
  CHECK(api_error_of([&] { svc.recommend(id); }) == std::pair{409, std::string("session_finalized")});
}

TEST_CASE("accepting e3 keeps the nominal matching and raises its expected weight") {
  SessionService svc;
  const std::string id = svc.create_session(counterexample_request()).at("id");
  const Json after = svc.record_response(id, response(fixtures::kE3, "accepted"));
  CHECK(after.at("rejected_edges").empty());
  // (A,B) at 2 * 1/4 plus (C,D,F) at 3 * 1/4 with e3 confirmed.
  CHECK(after.at("expected_weight").get<double>() == doctest::Approx(5.0 / 4).epsilon(1e-12));
}

TEST_CASE("session errors carry status codes") {
  ServiceOptions options;
  SessionService svc(options);
  const Json limited = {{"graph", "counterexample"}, {"legal", {{"budget", 1}}}};
  const std::string id = svc.create_session(limited).at("id");

  CHECK(api_error_of([&] { svc.get_session("nope"); }) == std::pair{404, std::string("session_not_found")});
  CHECK(api_error_of([&] { svc.create_session({{"graph", "missing"}}); }) ==
        std::pair{404, std::string("graph_not_found")});
  CHECK(api_error_of([&] { svc.create_session(Json::object()); }).first == 400);
  CHECK(api_error_of([&] { svc.create_session({{"graph", "counterexample"}, {"method", "magic"}}); }).first == 400);
  CHECK(api_error_of([&] { svc.create_session({{"graph", "counterexample"}, {"policy", "best"}}); }).first == 400);
  CHECK(api_error_of([&] { svc.record_response(id, {{"edge_id", 0}}); }).first == 400);
  CHECK(api_error_of([&] { svc.record_response(id, {{"edge_id", "x"}, {"response", "accepted"}}); }).first == 400);
  CHECK(api_error_of([&] { svc.record_response(id, response(99, "accepted")); }) ==
        std::pair{422, std::string("unknown_edge")});

  svc.record_response(id, response(0, "accepted"));
  CHECK(api_error_of([&] { svc.record_response(id, response(0, "rejected")); }) ==
        std::pair{409, std::string("already_queried")});
  try {
    svc.record_response(id, response(1, "accepted"));
    FAIL("budget of one should block a second query");
  } catch (const ApiError& e) {
    CHECK(e.status() == 422);
    CHECK(e.code() == "illegal_query");
    CHECK(e.detail().contains("reason"));
  }
  svc.finalize(id);
  CHECK(api_error_of([&] { svc.finalize(id); }) == std::pair{409, std::string("session_finalized")});
  CHECK(api_error_of([&] { svc.record_response(id, response(2, "accepted")); }) ==
        std::pair{409, std::string("session_finalized")});
}

TEST_CASE("graph uploads are validated and listed") {
  SessionService svc;
  const Json listed = svc.list_graphs();
  CHECK(listed.at("graphs").size() == fixtures::names().size());

  const auto g = generate_random_graph(12, 0.2, 3);
  const Json summary = svc.upload_graph("small", io::graph_to_json(g));
  CHECK(summary.at("edges") == g.edge_count());
  CHECK(svc.list_graphs().at("graphs").size() == fixtures::names().size() + 1);
  CHECK(api_error_of([&] { svc.upload_graph("small", io::graph_to_json(g)); }) ==
        std::pair{409, std::string("graph_exists")});
  CHECK(api_error_of([&] { svc.upload_graph("bad/name", io::graph_to_json(g)); }).first == 400);
  Json broken = io::graph_to_json(g);
  broken["edges"].push_back({{"id", 999}, {"source", 0}, {"target", 1}});
  CHECK(api_error_of([&] { svc.upload_graph("broken", broken); }) == std::pair{422, std::string("invalid_graph")});

  const Json created = svc.create_session({{"graph", "small"}, {"method", "mcts"}, {"mcts", {{"iterations", 50}}}});
  CHECK(created.at("graph").at("name") == "small");
}

TEST_CASE("tree-search sessions recommend reproducibly") {
  SessionService svc(ServiceOptions{{}, 200, {}});
  const Json req = {{"graph", "counterexample"}, {"method", "mcts"}, {"seed", 9}, {"mcts", {{"iterations", 100000}}}};
  const std::string a = svc.create_session(req).at("id");
  const std::string b = svc.create_session(req).at("id");
  const Json ra = svc.recommend(a);
  CHECK(ra.at("edge") == svc.recommend(b).at("edge"));
  CHECK(ra.at("edge").at("visits").get<long>() <= 200);  // server cap on iterations
}

TEST_CASE("sessions are restored from their logs") {
  const auto dir = fresh_dir("kxq_test_service_replay");
  Json before;
  std::string id;
  {
    SessionService svc(ServiceOptions{dir, 5000, {}});
    svc.upload_graph("uploaded", io::graph_to_json(fixtures::chain_example_graph()));
    id = svc.create_session(counterexample_request()).at("id");
    svc.record_response(id, response(fixtures::kE3, "rejected"));
    svc.record_response(id, response(fixtures::kE1, "accepted"));
    before = svc.get_session(id);
  }
  SessionService restored(ServiceOptions{dir, 5000, {}});
  CHECK(restored.session_ids() == std::vector<std::string>{id});
  CHECK(restored.get_session(id) == before);
  CHECK(restored.list_graphs().at("graphs").size() == fixtures::names().size() + 1);

  restored.finalize(id);
  SessionService again(ServiceOptions{dir, 5000, {}});
  CHECK(again.get_session(id).at("status") == "finalized");
  CHECK(again.get_session(id).at("final") == restored.get_session(id).at("final"));
  fs::remove_all(dir);
}

TEST_CASE("HTTP routes speak JSON") {
  SessionService svc;
  TestServer server(svc);
  httplib::Client client("127.0.0.1", server.port());

  auto graphs = client.Get("/graphs");
  REQUIRE(graphs);
  CHECK(graphs->status == 200);
  CHECK(Json::parse(graphs->body).at("graphs")[0].at("name") == "counterexample");
  CHECK(graphs->get_header_value("Access-Control-Allow-Origin") == "*");

  auto created = client.Post("/sessions", counterexample_request().dump(), "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  const std::string id = Json::parse(created->body).at("id");

  auto rec = client.Get("/sessions/" + id + "/recommendation");
  REQUIRE(rec);
  CHECK(rec->status == 200);
  CHECK(Json::parse(rec->body).at("edge").contains("expected_value"));

  auto answered =
      client.Post("/sessions/" + id + "/responses", response(fixtures::kE3, "rejected").dump(), "application/json");
  REQUIRE(answered);
  CHECK(answered->status == 200);

  auto state = client.Get("/sessions/" + id);
  REQUIRE(state);
  CHECK(Json::parse(state->body).at("rejected_edges") == Json::array({fixtures::kE3}));

  auto done = client.Post("/sessions/" + id + "/finalize", "", "application/json");
  REQUIRE(done);
  CHECK(done->status == 200);
  CHECK(Json::parse(done->body).at("final").at("expected_weight").get<double>() == doctest::Approx(3.5 / 8));

  auto again = client.Post("/sessions/" + id + "/finalize", "", "application/json");
  REQUIRE(again);
  CHECK(again->status == 409);
  const Json err = Json::parse(again->body);
  CHECK(err.at("code") == "session_finalized");
  CHECK(err.contains("message"));
  CHECK(err.contains("detail"));

  auto missing = client.Get("/sessions/unknown");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(Json::parse(missing->body).at("code") == "session_not_found");

  auto no_route = client.Get("/nothing/here");
  REQUIRE(no_route);
  CHECK(no_route->status == 404);
  CHECK(Json::parse(no_route->body).at("code") == "not_found");

  auto garbage = client.Post("/sessions", "{not json", "application/json");
  REQUIRE(garbage);
  CHECK(garbage->status == 400);
  CHECK(Json::parse(garbage->body).at("code") == "invalid_json");

  auto preflight = client.Options("/sessions");
  REQUIRE(preflight);
  CHECK(preflight->status == 204);
}

TEST_CASE("HTTP bearer token") {
  SessionService svc(ServiceOptions{{}, 5000, "s3cret"});
  TestServer server(svc);
  httplib::Client client("127.0.0.1", server.port());
  auto denied = client.Get("/graphs");
  REQUIRE(denied);
  CHECK(denied->status == 401);
  CHECK(Json::parse(denied->body).at("code") == "unauthorized");
  client.set_bearer_token_auth("s3cret");
  auto allowed = client.Get("/graphs");
  REQUIRE(allowed);
  CHECK(allowed->status == 200);
}

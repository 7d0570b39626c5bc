#include <httplib.h>

#include "kxq/service.hpp"

namespace kxq::service {

namespace {

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

Json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  try {
    return Json::parse(req.body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ApiError(400, "invalid_json", "request body is not valid JSON", {{"parser", e.what()}});
  }
}

/// Runs a handler and maps ApiError (and anything unexpected) onto the
/// JSON error shape.
template <class Handler>
httplib::Server::Handler wrap(int success_status, Handler handler) {
  return [success_status, handler](const httplib::Request& req, httplib::Response& res) {
    try {
      send(res, success_status, handler(req));
    } catch (const ApiError& e) {
      send(res, e.status(), e.to_json());
    } catch (const std::exception& e) {
      send(res, 500, ApiError(500, "internal_error", e.what()).to_json());
    }
  };
}

}  // namespace

void mount_routes(httplib::Server& server, SessionService& service) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type, Authorization"},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});

  const std::string token = service.options().token;
  server.set_pre_routing_handler([token](const httplib::Request& req, httplib::Response& res) {
    if (req.method == "OPTIONS") {
      res.status = 204;
      return httplib::Server::HandlerResponse::Handled;
    }
    if (!token.empty() && req.get_header_value("Authorization") != "Bearer " + token) {
      send(res, 401, ApiError(401, "unauthorized", "missing or wrong bearer token").to_json());
      return httplib::Server::HandlerResponse::Handled;
    }
    return httplib::Server::HandlerResponse::Unhandled;
  });

  server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    const std::string code = res.status == 404 ? "not_found" : "http_error";
    send(res, res.status, ApiError(res.status, code, "no route for " + req.method + " " + req.path).to_json());
  });

  server.Get("/graphs", wrap(200, [&service](const httplib::Request&) { return service.list_graphs(); }));
  server.Post("/graphs", wrap(201, [&service](const httplib::Request& req) {
                const Json body = parse_body(req);
                if (!body.is_object() || !body.contains("name") || !body.at("name").is_string() ||
                    !body.contains("graph")) {
                  throw ApiError(400, "invalid_request", "body needs a string 'name' and a 'graph'");
                }
                return service.upload_graph(body.at("name").get<std::string>(), body.at("graph"));
              }));

  server.Post("/sessions",
              wrap(201, [&service](const httplib::Request& req) { return service.create_session(parse_body(req)); }));
  server.Get("/sessions/:id", wrap(200, [&service](const httplib::Request& req) {
               return service.get_session(req.path_params.at("id"));
             }));
  server.Get("/sessions/:id/recommendation", wrap(200, [&service](const httplib::Request& req) {
               return service.recommend(req.path_params.at("id"));
             }));
  server.Post("/sessions/:id/responses", wrap(200, [&service](const httplib::Request& req) {
                return service.record_response(req.path_params.at("id"), parse_body(req));
              }));
  server.Post("/sessions/:id/finalize", wrap(200, [&service](const httplib::Request& req) {
                return service.finalize(req.path_params.at("id"));
              }));
}

}  // namespace kxq::service

#pragma once

// Local HTTP facade over the engine.
//
//   GET  /api/v1/health    {"status":"ok","version":...}
//   GET  /api/v1/presets   [{"name":...,"config":{...}}, ...]
//   POST /api/v1/evaluate  EvaluateRequest -> serialised EvaluationBundle
//
// Handlers hold no state. The transport-free handle_* functions carry all of
// the logic and are what the tests drive; install_routes wires them into a
// cpp-httplib server.

#include <filesystem>
#include <regex>
#include <string>
#include <string_view>

#include <httplib.h>
#include <json.hpp>

#include "icm/engine.hpp"
#include "icm/error.hpp"
#include "icm/serialization.hpp"
#include "icm/version.hpp"

namespace icm::service {

inline constexpr int kDefaultPort = 5006;
inline constexpr const char* kDefaultHost = "127.0.0.1";
inline constexpr std::size_t kMaxRequestBytes = 1 << 20;
inline constexpr const char* kJsonType = "application/json";

struct HttpResult {
  int status = 200;
  std::string body;
};

namespace detail {

inline HttpResult error_result(int status, const std::string& message, const std::string& field = {}) {
  Json j{{"error", message}};
  if (!field.empty()) j["field"] = field;
  return {status, j.dump()};
}

}  // namespace detail

inline HttpResult handle_health() {
  return {200, Json{{"status", "ok"}, {"version", kVersion}}.dump()};
}

inline HttpResult handle_presets() { return {200, presets_json().dump()}; }

inline HttpResult handle_evaluate(std::string_view body) {
  Json request;
  try {
    request = Json::parse(body);
  } catch (const Json::parse_error& e) {
    return detail::error_result(400, std::string("malformed JSON: ") + e.what());
  }
  try {
    const ScenarioConfig cfg = config_from_json(request);
    return {200, to_json(evaluate_scenario(cfg)).dump()};
  } catch (const Error& e) {
    return detail::error_result(422, e.what(), e.field());
  }
}

/// Origins served from this machine, any port.
inline bool is_local_origin(const std::string& origin) {
  static const std::regex local(R"(^https?://(localhost|127\.0\.0\.1|\[::1\])(:[0-9]{1,5})?$)");
  return std::regex_match(origin, local);
}

struct ServerOptions {
  std::filesystem::path ui_dir;  // served at "/" when it exists
};

inline void install_routes(httplib::Server& server, const ServerOptions& options = {}) {
  auto reply = [](httplib::Response& res, const HttpResult& r) {
    res.status = r.status;
    res.set_content(r.body, kJsonType);
  };

  server.set_payload_max_length(kMaxRequestBytes);
  // SO_REUSEADDR only: httplib's default also sets SO_REUSEPORT, which would
  // let a second server silently share the port.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });

  server.set_post_routing_handler([](const httplib::Request& req, httplib::Response& res) {
    const auto origin = req.get_header_value("Origin");
    if (!origin.empty() && is_local_origin(origin)) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Vary", "Origin");
    }
  });

  server.Options("/api/v1/.*", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
  });

  server.Get("/api/v1/health",
             [reply](const httplib::Request&, httplib::Response& res) { reply(res, handle_health()); });
  server.Get("/api/v1/presets",
             [reply](const httplib::Request&, httplib::Response& res) { reply(res, handle_presets()); });
  server.Post("/api/v1/evaluate", [reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_evaluate(req.body));
  });

  if (!options.ui_dir.empty() && std::filesystem::is_directory(options.ui_dir)) {
    server.set_mount_point("/", options.ui_dir.string());
  }
}

}  // namespace icm::service

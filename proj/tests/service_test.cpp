#include <gtest/gtest.h>

#include <chrono>
#include <future>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "icm/service.hpp"
#include "support/random_bundle.hpp"

namespace icm {
namespace {

Json request_for(const std::string& preset_name) { return to_json(preset(preset_name)); }

Json body_of(const service::HttpResult& r) { return Json::parse(r.body); }

// --- serialisation -------------------------------------------------------

TEST(Serialization, BundleRoundTripsLosslessly) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const auto b = testing::any_bundle(rng);
    const std::string text = to_json(b).dump();
    const auto back = bundle_from_json(Json::parse(text));
    ASSERT_EQ(back, b) << "iteration " << i;
    ASSERT_EQ(to_json(back).dump(), text);
  }
}

TEST(Serialization, EvaluatedBundleRoundTrips) {
  const auto b = evaluate_scenario(preset("imbalance-trap"));
  EXPECT_EQ(bundle_from_json(Json::parse(to_json(b).dump())), b);
}

TEST(Serialization, UndefinedMetricCarriesConvention) {
  const auto j = to_json(evaluate_scenario(preset("imbalance-trap")));
  const auto& mcc = j["metrics"]["mcc_norm"];
  EXPECT_EQ(mcc["value"], 0.5);
  EXPECT_EQ(mcc["defined"], false);
  EXPECT_EQ(mcc["convention"], "zero-mcc-denominator");
  EXPECT_FALSE(j["metrics"]["accuracy"].contains("convention"));
}

TEST(Serialization, ConfigRoundTrips) {
  for (const auto& name : preset_names()) EXPECT_EQ(config_from_json(to_json(preset(name))), preset(name));
}

void expect_rejected(const Json& j, ErrorCode code, const std::string& field) {
  try {
    config_from_json(j);
    FAIL() << "accepted " << j.dump();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << j.dump();
    EXPECT_EQ(e.field(), field) << j.dump();
  }
}

TEST(Serialization, StrictRequestSchema) {
  auto j = request_for("default");
  j["foo"] = 1;
  expect_rejected(j, ErrorCode::kSchemaViolation, "foo");

  j = request_for("default");
  j["positive"]["sd"] = 1.0;
  expect_rejected(j, ErrorCode::kSchemaViolation, "positive.sd");

  j = request_for("default");
  j.erase("seed");
  expect_rejected(j, ErrorCode::kSchemaViolation, "seed");

  j = request_for("default");
  j["negative"]["loc"] = "zero";
  expect_rejected(j, ErrorCode::kSchemaViolation, "negative.loc");

  j = request_for("default");
  j["negative"]["n"] = 10.5;
  expect_rejected(j, ErrorCode::kSchemaViolation, "negative.n");

  j = request_for("default");
  j["seed"] = -1;
  expect_rejected(j, ErrorCode::kSchemaViolation, "seed");

  expect_rejected(Json::array(), ErrorCode::kSchemaViolation, "$");
}

TEST(Serialization, ParameterRangeErrors) {
  auto j = request_for("default");
  j["negative"]["scale"] = 0.0;
  expect_rejected(j, ErrorCode::kInvalidParameter, "negative.scale");

  j = request_for("default");
  j["positive"]["n"] = 100001;
  expect_rejected(j, ErrorCode::kInvalidParameter, "positive.n");

  j = request_for("default");
  j["positive"]["n"] = -3;
  expect_rejected(j, ErrorCode::kInvalidParameter, "positive.n");
}

// --- handlers ------------------------------------------------------------

TEST(HandleEvaluate, ImbalanceTrap) {
  const auto r = service::handle_evaluate(request_for("imbalance-trap").dump());
  ASSERT_EQ(r.status, 200);
  const auto j = body_of(r);
  EXPECT_EQ(j["metrics"]["mcc_norm"]["value"], 0.5);
  EXPECT_EQ(j["confusion"]["tp"], 500);
}

TEST(HandleEvaluate, ByteIdenticalResponses) {
  const std::string req = request_for("default").dump();
  EXPECT_EQ(service::handle_evaluate(req).body, service::handle_evaluate(req).body);
}

TEST(HandleEvaluate, MalformedJsonIs400) {
  const auto r = service::handle_evaluate("{\"negative\": ");
  EXPECT_EQ(r.status, 400);
  EXPECT_NE(body_of(r)["error"].get<std::string>().find("malformed JSON"), std::string::npos);
}

TEST(HandleEvaluate, InvalidScaleIs422NamingField) {
  auto j = request_for("default");
  j["negative"]["scale"] = 0;
  const auto r = service::handle_evaluate(j.dump());
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(body_of(r)["field"], "negative.scale");
  EXPECT_EQ(body_of(r)["error"], "nonpositive scale");
}

TEST(HandleEvaluate, UnknownFieldIs422) {
  auto j = request_for("default");
  j["foo"] = 1;
  const auto r = service::handle_evaluate(j.dump());
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(body_of(r)["error"], "unknown field");
}

TEST(HandleEvaluate, OversizedSampleIs422) {
  auto j = request_for("default");
  j["negative"]["n"] = 5000000;
  const auto r = service::handle_evaluate(j.dump());
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(body_of(r)["error"], "sample size out of range");
}

TEST(HandlePresets, ListsBothPresets) {
  const auto r = service::handle_presets();
  ASSERT_EQ(r.status, 200);
  const auto j = body_of(r);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["name"], "default");
  EXPECT_EQ(j[1]["name"], "imbalance-trap");
  EXPECT_EQ(j[1]["config"]["threshold"], -10.0);
  for (const auto& entry : j) {
    const auto cfg = config_from_json(entry["config"]);
    EXPECT_FALSE(validate_params(cfg.negative).has_value());
    EXPECT_FALSE(validate_params(cfg.positive).has_value());
  }
}

TEST(HandleHealth, ReportsVersion) {
  const auto j = body_of(service::handle_health());
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["version"], kVersion);
}

TEST(LocalOrigin, Matching) {
  EXPECT_TRUE(service::is_local_origin("http://localhost:5173"));
  EXPECT_TRUE(service::is_local_origin("http://127.0.0.1"));
  EXPECT_TRUE(service::is_local_origin("https://[::1]:8080"));
  EXPECT_FALSE(service::is_local_origin("http://localhost.evil.com"));
  EXPECT_FALSE(service::is_local_origin("http://example.com"));
}

// --- over the wire -------------------------------------------------------

class LiveServer : public ::testing::Test {
 protected:
  void SetUp() override {
    service::install_routes(server_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
};

TEST_F(LiveServer, Health) {
  auto cli = client();
  const auto start = std::chrono::steady_clock::now();
  const auto res = cli.Get("/api/v1/health");
  const auto elapsed = std::chrono::steady_clock::now() - start;
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(Json::parse(res->body)["status"], "ok");
  EXPECT_LT(elapsed, std::chrono::milliseconds(100));
}

TEST_F(LiveServer, EvaluateAndErrors) {
  auto cli = client();
  auto res = cli.Post("/api/v1/evaluate", request_for("imbalance-trap").dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Content-Type"), "application/json");
  EXPECT_EQ(Json::parse(res->body)["metrics"]["mcc_norm"]["value"], 0.5);

  res = cli.Post("/api/v1/evaluate", "not json", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 400);

  auto bad = request_for("default");
  bad["negative"]["scale"] = 0;
  res = cli.Post("/api/v1/evaluate", bad.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 422);
  EXPECT_EQ(Json::parse(res->body)["field"], "negative.scale");
}

TEST_F(LiveServer, Presets) {
  auto cli = client();
  const auto res = cli.Get("/api/v1/presets");
  ASSERT_TRUE(res);
  EXPECT_EQ(Json::parse(res->body).size(), 2u);
}

TEST_F(LiveServer, CorsOnlyForLocalOrigins) {
  auto cli = client();
  auto res = cli.Get("/api/v1/health", {{"Origin", "http://localhost:5173"}});
  ASSERT_TRUE(res);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "http://localhost:5173");

  res = cli.Get("/api/v1/health", {{"Origin", "http://example.com"}});
  ASSERT_TRUE(res);
  EXPECT_FALSE(res->has_header("Access-Control-Allow-Origin"));

  res = cli.Options("/api/v1/evaluate", {{"Origin", "http://127.0.0.1:3000"}});
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 204);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "http://127.0.0.1:3000");
}

TEST_F(LiveServer, ConcurrentRequestsMatchSerial) {
  std::vector<std::string> requests;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    auto j = request_for(seed % 2 ? "default" : "imbalance-trap");
    j["seed"] = seed;
    requests.push_back(j.dump());
  }
  std::vector<std::string> serial;
  for (const auto& r : requests) serial.push_back(service::handle_evaluate(r).body);

  std::vector<std::future<std::string>> results;
  for (const auto& r : requests) {
    results.push_back(std::async(std::launch::async, [this, r] {
      auto cli = client();
      auto res = cli.Post("/api/v1/evaluate", r, "application/json");
      return res ? res->body : std::string("<no response>");
    }));
  }
  for (std::size_t i = 0; i < requests.size(); ++i) EXPECT_EQ(results[i].get(), serial[i]);
}

TEST(LiveServerPort, SecondBindOnSamePortFails) {
  httplib::Server first;
  service::install_routes(first);
  const int port = first.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  httplib::Server second;
  service::install_routes(second);
  EXPECT_FALSE(second.bind_to_port("127.0.0.1", port));
}

}  // namespace
}  // namespace icm

// Copyright 2026 The Mutafuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <string>
#include <thread>
#include <vector>

#include "gtest/gtest.h"
#include "httplib.h"
#include "json.hpp"
#include "mutafuzz/error.h"
#include "mutafuzz/oracle.h"

namespace mutafuzz {
namespace {

// Serves canned responses on a background thread for the duration of a test.
class StubServer {
 public:
  explicit StubServer(httplib::Server::Handler handler) {
    server_.Post("/predict", std::move(handler));
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~StubServer() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/predict";
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(RemoteOracleTest, RejectsBadEndpoints) {
  OracleConfig config;
  EXPECT_THROW(RemoteOracle("ftp://host/x", config), InvalidConfig);
  EXPECT_THROW(RemoteOracle("http://", config), InvalidConfig);
  EXPECT_THROW(RemoteOracle("http://host:notaport/x", config), InvalidConfig);
  EXPECT_THROW(RemoteOracle("http://host:99999/x", config), InvalidConfig);
  EXPECT_NO_THROW(RemoteOracle("http://host:8000/predict", config));
  EXPECT_NO_THROW(RemoteOracle("http://host", config));
}

TEST(RemoteOracleTest, SendsDocumentedRequestAndParsesPairs) {
  nlohmann::json seen_request;
  StubServer server([&](const httplib::Request& req, httplib::Response& res) {
    seen_request = nlohmann::json::parse(req.body);
    res.set_content(R"({"pairs": [[1, 2], [7, 1], [12, 1]]})",
                    "application/json");
  });
  OracleConfig config;
  config.k_max = 8;
  config.top_p = 0.75;
  RemoteOracle oracle(server.endpoint(), config);
  Rng rng(1);
  const Bytes input = {0x3c, 0x21, 0x44, 0x4f, 0x43};
  const MutationPlan plan = oracle.Predict(input, rng);

  EXPECT_EQ(seen_request["bytes_hex"], "3c 21 44 4f 43");
  EXPECT_EQ(seen_request["k_max"], 8);
  EXPECT_DOUBLE_EQ(seen_request["top_p"].get<double>(), 0.75);

  ASSERT_EQ(plan.pairs.size(), 3u);
  EXPECT_EQ(plan.pairs[0].strategy_id, 1);
  EXPECT_EQ(plan.pairs[0].position, 2u);
  EXPECT_EQ(plan.pairs[1].strategy_id, 7);
  EXPECT_EQ(plan.pairs[2].strategy_id, 12);
}

TEST(RemoteOracleTest, DropsInvalidPairsWithWarnings) {
  StubServer server([](const httplib::Request&, httplib::Response& res) {
    // (9, 63): a 32-bit strategy anchored at position 63 of a 64-byte input
    // needs bytes 63..66 -- out of range. (0, 1) and (13, 1): bad ids.
    // "x": not a pair at all. (1, 0): positions are 1-based.
    res.set_content(
        R"({"pairs": [[1, 1], [9, 63], [0, 1], [13, 1], "x", [1, 0], [4, 2]]})",
        "application/json");
  });
  std::vector<std::string> warnings;
  OracleConfig config;
  RemoteOracle oracle(server.endpoint(), config, 1000,
                      [&](const std::string& w) { warnings.push_back(w); });
  Rng rng(1);
  const MutationPlan plan = oracle.Predict(Bytes(64, 0), rng);
  ASSERT_EQ(plan.pairs.size(), 2u);
  EXPECT_EQ(plan.pairs[0].strategy_id, 1);
  EXPECT_EQ(plan.pairs[1].strategy_id, 4);
  EXPECT_EQ(warnings.size(), 5u);
}

TEST(RemoteOracleTest, TruncatesAtKMax) {
  StubServer server([](const httplib::Request&, httplib::Response& res) {
    nlohmann::json pairs = nlohmann::json::array();
    for (int i = 1; i <= 30; ++i) pairs.push_back({1, (i % 8) + 1});
    res.set_content(nlohmann::json{{"pairs", pairs}}.dump(),
                    "application/json");
  });
  OracleConfig config;
  config.k_max = 5;
  RemoteOracle oracle(server.endpoint(), config);
  Rng rng(1);
  const MutationPlan plan = oracle.Predict(Bytes(8, 0), rng);
  EXPECT_EQ(plan.pairs.size(), 5u);
}

TEST(RemoteOracleTest, ConnectionRefusedRaisesRemoteUnavailable) {
  // Nothing listens here; bind-to-any-port in the other tests guarantees this
  // fixed port is not one of ours often enough to stay stable.
  OracleConfig config;
  RemoteOracle oracle("http://127.0.0.1:1/predict", config, 200);
  Rng rng(1);
  EXPECT_THROW(oracle.Predict({1, 2, 3}, rng), RemoteUnavailable);
}

TEST(RemoteOracleTest, Non200StatusRaisesRemoteUnavailable) {
  StubServer server([](const httplib::Request&, httplib::Response& res) {
    res.status = 503;
    res.set_content("overloaded", "text/plain");
  });
  OracleConfig config;
  RemoteOracle oracle(server.endpoint(), config);
  Rng rng(1);
  EXPECT_THROW(oracle.Predict({1, 2, 3}, rng), RemoteUnavailable);
}

TEST(RemoteOracleTest, GarbageBodyRaisesMalformedResponse) {
  StubServer server([](const httplib::Request&, httplib::Response& res) {
    res.set_content("){ not json", "application/json");
  });
  OracleConfig config;
  RemoteOracle oracle(server.endpoint(), config);
  Rng rng(1);
  EXPECT_THROW(oracle.Predict({1, 2, 3}, rng), MalformedResponse);
}

TEST(RemoteOracleTest, MissingPairsKeyRaisesMalformedResponse) {
  StubServer server([](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"predictions": []})", "application/json");
  });
  OracleConfig config;
  RemoteOracle oracle(server.endpoint(), config);
  Rng rng(1);
  EXPECT_THROW(oracle.Predict({1, 2, 3}, rng), MalformedResponse);
}

}  // namespace
}  // namespace mutafuzz

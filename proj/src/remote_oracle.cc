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

#include <cstdio>

#include "httplib.h"
#include "json.hpp"
#include "mutafuzz/error.h"
#include "mutafuzz/oracle.h"

namespace mutafuzz {

RemoteOracle::RemoteOracle(std::string endpoint, OracleConfig config,
                           int timeout_ms, WarnFn warn)
    : config_(config), timeout_ms_(timeout_ms), warn_(std::move(warn)) {
  if (!warn_) {
    warn_ = [](const std::string& message) {
      std::fprintf(stderr, "[mutafuzz] %s\n", message.c_str());
    };
  }
  constexpr std::string_view kScheme = "http://";
  if (endpoint.rfind(kScheme, 0) != 0) {
    throw InvalidConfig("remote endpoint must start with http://: '" +
                        endpoint + "'");
  }
  std::string rest = endpoint.substr(kScheme.size());
  const size_t slash = rest.find('/');
  std::string host_port = rest.substr(0, slash);
  path_ = slash == std::string::npos ? "/" : rest.substr(slash);
  const size_t colon = host_port.find(':');
  if (colon == std::string::npos) {
    host_ = host_port;
  } else {
    host_ = host_port.substr(0, colon);
    try {
      port_ = std::stoi(host_port.substr(colon + 1));
    } catch (const std::exception&) {
      port_ = -1;
    }
  }
  if (host_.empty() || port_ <= 0 || port_ > 65535) {
    throw InvalidConfig("bad remote endpoint '" + endpoint + "'");
  }
}

MutationPlan RemoteOracle::Predict(const Bytes& input, Rng& rng) {
  (void)rng;  // all randomness lives on the server
  if (input.empty()) throw EmptyInput("prediction on empty input");

  nlohmann::ordered_json request;
  request["bytes_hex"] = ToHex(input, HexStyle::kPlain);
  request["k_max"] = config_.k_max;
  request["top_p"] = config_.top_p;

  httplib::Client client(host_, port_);
  client.set_connection_timeout(0, timeout_ms_ * 1000);
  client.set_read_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);
  client.set_write_timeout(timeout_ms_ / 1000, (timeout_ms_ % 1000) * 1000);

  httplib::Result result =
      client.Post(path_, request.dump(), "application/json");
  if (!result) {
    throw RemoteUnavailable("cannot reach " + host_ + ":" +
                            std::to_string(port_) + " (" +
                            httplib::to_string(result.error()) + ")");
  }
  if (result->status != 200) {
    throw RemoteUnavailable("remote returned HTTP " +
                            std::to_string(result->status));
  }

  nlohmann::json body;
  try {
    body = nlohmann::json::parse(result->body);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedResponse(std::string("remote body is not JSON: ") +
                            e.what());
  }
  if (!body.is_object() || !body.contains("pairs") ||
      !body["pairs"].is_array()) {
    throw MalformedResponse("remote body lacks a 'pairs' array");
  }

  MutationPlan plan;
  for (const auto& item : body["pairs"]) {
    if (plan.pairs.size() >= static_cast<size_t>(config_.k_max)) break;
    if (!item.is_array() || item.size() != 2 ||
        !item[0].is_number_integer() || !item[1].is_number_integer()) {
      warn_("dropping malformed pair " + item.dump());
      continue;
    }
    const auto strategy_id = item[0].get<int64_t>();
    const auto position = item[1].get<int64_t>();
    if (strategy_id < 1 || strategy_id > kNumStrategies || position < 1 ||
        !PositionValid(StrategyFromId(static_cast<int>(strategy_id)),
                       static_cast<size_t>(position - 1), input.size())) {
      warn_("dropping invalid pair (" + std::to_string(strategy_id) + ", " +
            std::to_string(position) + ") for " +
            std::to_string(input.size()) + "-byte input");
      continue;
    }
    plan.pairs.push_back({static_cast<int>(strategy_id),
                          static_cast<uint32_t>(position)});
  }
  return plan;
}

}  // namespace mutafuzz

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

#include "mutafuzz/metrics.h"

#include <cstdio>

#include "mutafuzz/error.h"

namespace mutafuzz {

namespace {

std::string Fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

}  // namespace

double Epm(uint64_t attempts, uint64_t effective) {
  if (attempts == 0) return 0.0;
  return 1000.0 * static_cast<double>(effective) /
         static_cast<double>(attempts);
}

std::vector<EpmRow> EpmPerStrategy(const CampaignStats& stats) {
  std::vector<EpmRow> rows;
  rows.reserve(kNumStrategies);
  for (int s = 0; s < kNumStrategies; ++s) {
    EpmRow row;
    row.strategy_id = s + 1;
    row.attempts = stats.attempts[static_cast<size_t>(s)];
    row.effective = stats.effective[static_cast<size_t>(s)];
    row.epm = Epm(row.attempts, row.effective);
    row.excluded = row.attempts == 0;
    rows.push_back(row);
  }
  return rows;
}

double MeanEpm(std::span<const EpmRow> rows) {
  double sum = 0;
  int counted = 0;
  for (const EpmRow& row : rows) {
    if (row.excluded) continue;
    sum += row.epm;
    ++counted;
  }
  return counted == 0 ? 0.0 : sum / counted;
}

double PooledEpm(const CampaignStats& stats) {
  uint64_t attempts = 0;
  uint64_t effective = 0;
  for (int s = 0; s < kNumStrategies; ++s) {
    attempts += stats.attempts[static_cast<size_t>(s)];
    effective += stats.effective[static_cast<size_t>(s)];
  }
  return Epm(attempts, effective);
}

std::vector<uint64_t> InputGainSeries(std::span<const PathEvent> events,
                                      uint64_t bucket, uint64_t total_execs) {
  if (bucket == 0) throw InvalidConfig("gain bucket must be positive");
  const uint64_t buckets = (total_execs + bucket - 1) / bucket;
  std::vector<uint64_t> series(buckets, 0);
  for (const PathEvent& event : events) {
    if (event.exec_index == 0 || event.exec_index > total_execs) continue;
    series[(event.exec_index - 1) / bucket] += 1;
  }
  uint64_t running = 0;
  for (uint64_t& value : series) {
    running += value;
    value = running;
  }
  return series;
}

double CoverageRate(const CampaignStats& stats) {
  if (!stats.instrumented) {
    throw NotInstrumented("coverage rate requires an instrumented target");
  }
  if (stats.edges_total == 0) return 0.0;
  return static_cast<double>(stats.edges_covered) /
         static_cast<double>(stats.edges_total);
}

std::string RenderTable(const CampaignStats& stats) {
  const std::vector<EpmRow> rows = EpmPerStrategy(stats);
  std::string header;
  std::string attempts_line;
  std::string epm_line;
  auto column = [](std::string& line, const std::string& text, size_t width) {
    line += text;
    for (size_t i = text.size(); i < width + 2; ++i) line += ' ';
  };
  for (const EpmRow& row : rows) {
    const std::string name(StrategyName(StrategyFromId(row.strategy_id)));
    const size_t width = name.size();
    column(header, name, width);
    column(attempts_line, std::to_string(row.attempts), width);
    column(epm_line, row.excluded ? "-" : Fixed(row.epm, 2), width);
  }
  column(header, "Avg", 6);
  column(attempts_line, std::to_string(stats.mutation_attempts), 6);
  column(epm_line, Fixed(MeanEpm(rows), 2), 6);

  std::string out;
  out += "mutafuzz campaign report\n";
  out += "========================\n";
  out += "executions: " + std::to_string(stats.executions) +
         " (mutation attempts: " + std::to_string(stats.mutation_attempts) +
         ", timeouts: " + std::to_string(stats.timeouts) + ")\n";
  out += "\nEPM per strategy (effective mutations per mille)\n";
  out += header + "\n";
  out += attempts_line + "\n";
  out += epm_line + "\n";
  out += "\npooled EPM: " + Fixed(PooledEpm(stats), 2) + "\n";
  out += "crashes: " + std::to_string(stats.raw_crashes) + " raw, " +
         std::to_string(stats.deduped_crashes) + " unique\n";
  out += "paths: " + std::to_string(stats.path_events.size()) +
         " discovered (queue " + std::to_string(stats.queue_length) +
         ", initial seeds " + std::to_string(stats.initial_seeds) + ")\n";
  if (stats.instrumented) {
    out += "coverage: " + std::to_string(stats.edges_covered) + " / " +
           std::to_string(stats.edges_total) + " edges (" +
           Fixed(100.0 * CoverageRate(stats), 1) + "%)\n";
  } else {
    out += "coverage: target not instrumented\n";
  }
  return out;
}

nlohmann::ordered_json RenderJson(
    const CampaignStats& stats, const nlohmann::ordered_json* config_echo,
    std::span<const std::array<uint64_t, 2>> fallback_windows,
    uint64_t gain_bucket) {
  nlohmann::ordered_json j;
  if (config_echo != nullptr) j["config"] = *config_echo;
  j["executions"] = stats.executions;
  j["mutation_attempts"] = stats.mutation_attempts;
  j["timeouts"] = stats.timeouts;

  const std::vector<EpmRow> rows = EpmPerStrategy(stats);
  nlohmann::ordered_json per_strategy = nlohmann::ordered_json::array();
  for (const EpmRow& row : rows) {
    nlohmann::ordered_json r;
    r["id"] = row.strategy_id;
    r["strategy"] = StrategyName(StrategyFromId(row.strategy_id));
    r["attempts"] = row.attempts;
    r["effective"] = row.effective;
    r["epm"] = row.epm;
    r["excluded"] = row.excluded;
    per_strategy.push_back(std::move(r));
  }
  j["epm"]["per_strategy"] = std::move(per_strategy);
  j["epm"]["mean"] = MeanEpm(rows);
  j["epm"]["pooled"] = PooledEpm(stats);

  j["crashes"]["raw"] = stats.raw_crashes;
  j["crashes"]["deduped"] = stats.deduped_crashes;

  j["paths"]["discovered"] = stats.path_events.size();
  j["paths"]["initial_seeds"] = stats.initial_seeds;
  j["paths"]["queue_length"] = stats.queue_length;

  j["coverage"]["instrumented"] = stats.instrumented;
  if (stats.instrumented) {
    j["coverage"]["edges_covered"] = stats.edges_covered;
    j["coverage"]["edges_total"] = stats.edges_total;
    j["coverage"]["rate"] = CoverageRate(stats);
  }

  j["input_gain"]["bucket"] = gain_bucket;
  j["input_gain"]["series"] =
      InputGainSeries(stats.path_events, gain_bucket, stats.executions);

  nlohmann::ordered_json windows = nlohmann::ordered_json::array();
  for (const auto& w : fallback_windows) {
    windows.push_back({w[0], w[1]});
  }
  j["remote_fallback_windows"] = std::move(windows);
  return j;
}

std::string RenderTableFromJson(const nlohmann::json& report) {
  CampaignStats stats;
  stats.executions = report.at("executions").get<uint64_t>();
  stats.mutation_attempts = report.at("mutation_attempts").get<uint64_t>();
  stats.timeouts = report.value("timeouts", uint64_t{0});
  for (const auto& row : report.at("epm").at("per_strategy")) {
    const int id = row.at("id").get<int>();
    if (id < 1 || id > kNumStrategies) continue;
    stats.attempts[static_cast<size_t>(id - 1)] =
        row.at("attempts").get<uint64_t>();
    stats.effective[static_cast<size_t>(id - 1)] =
        row.at("effective").get<uint64_t>();
  }
  stats.raw_crashes = report.at("crashes").at("raw").get<uint64_t>();
  stats.deduped_crashes = report.at("crashes").at("deduped").get<uint64_t>();
  stats.initial_seeds = report.at("paths").at("initial_seeds").get<uint64_t>();
  stats.queue_length = report.at("paths").at("queue_length").get<uint64_t>();
  stats.path_events.resize(report.at("paths").at("discovered").get<size_t>());
  stats.instrumented = report.at("coverage").at("instrumented").get<bool>();
  if (stats.instrumented) {
    stats.edges_covered = report.at("coverage").at("edges_covered").get<uint64_t>();
    stats.edges_total = report.at("coverage").at("edges_total").get<uint64_t>();
  }
  return RenderTable(stats);
}

std::string RenderGainCsv(std::span<const PathEvent> events, uint64_t bucket,
                          uint64_t total_execs) {
  const std::vector<uint64_t> series =
      InputGainSeries(events, bucket, total_execs);
  std::string out = "execution_index,cumulative_paths\n";
  for (size_t i = 0; i < series.size(); ++i) {
    const uint64_t end = std::min((i + 1) * bucket, total_execs);
    out += std::to_string(end) + "," + std::to_string(series[i]) + "\n";
  }
  return out;
}

}  // namespace mutafuzz

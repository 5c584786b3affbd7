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

#ifndef MUTAFUZZ_METRICS_H_
#define MUTAFUZZ_METRICS_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "mutafuzz/mutation.h"

namespace mutafuzz {

// A test case admitted to the queue at a given point of the campaign.
struct PathEvent {
  uint64_t exec_index = 0;  // 1-based execution counter at admission
  uint64_t test_case_id = 0;
};

// Everything the reports are computed from. Counters are indexed by
// strategy id - 1.
struct CampaignStats {
  std::array<uint64_t, kNumStrategies> attempts{};
  std::array<uint64_t, kNumStrategies> effective{};
  uint64_t executions = 0;         // all target runs, seed priming included
  uint64_t mutation_attempts = 0;  // runs that followed a mutation
  uint64_t raw_crashes = 0;
  uint64_t deduped_crashes = 0;
  uint64_t timeouts = 0;
  std::vector<PathEvent> path_events;  // queued test cases, seeds excluded
  uint64_t initial_seeds = 0;
  uint64_t queue_length = 0;
  bool instrumented = false;
  uint64_t edges_covered = 0;
  uint64_t edges_total = 0;
};

// Effective-per-mille for one strategy: 1000 * effective / attempts.
// Zero attempts yield 0 (callers must treat the strategy as excluded).
double Epm(uint64_t attempts, uint64_t effective);

struct EpmRow {
  int strategy_id = 0;
  uint64_t attempts = 0;
  uint64_t effective = 0;
  double epm = 0.0;
  bool excluded = false;  // no attempts: not part of averages
};

std::vector<EpmRow> EpmPerStrategy(const CampaignStats& stats);

// Arithmetic mean of the per-strategy EPM over non-excluded rows (0 when
// every row is excluded).
double MeanEpm(std::span<const EpmRow> rows);

// EPM over all strategies pooled together.
double PooledEpm(const CampaignStats& stats);

// Cumulative queued-path counts sampled every `bucket` executions:
// entry i covers executions (i*bucket, (i+1)*bucket]. The last bucket is
// cut off at `total_execs`. Throws InvalidConfig when bucket is 0.
std::vector<uint64_t> InputGainSeries(std::span<const PathEvent> events,
                                      uint64_t bucket, uint64_t total_execs);

// Covered fraction of the target's edge universe.
// Throws NotInstrumented when the stats came from an external target.
double CoverageRate(const CampaignStats& stats);

// Fixed-width text report. The EPM table is one row of values under a
// header naming all twelve strategies and the trailing "Avg" column.
std::string RenderTable(const CampaignStats& stats);

// Machine-readable report. `config_echo` (may be null) is embedded under
// "config"; `fallback_windows` lists [first, last] execution spans served by
// the uniform fallback. Key order is fixed, so equal inputs serialize to
// identical bytes.
nlohmann::ordered_json RenderJson(
    const CampaignStats& stats, const nlohmann::ordered_json* config_echo,
    std::span<const std::array<uint64_t, 2>> fallback_windows,
    uint64_t gain_bucket);

// Re-renders the text table from a previously written JSON report.
std::string RenderTableFromJson(const nlohmann::json& report);

// "execution_index,cumulative_paths" rows, one per gain bucket.
std::string RenderGainCsv(std::span<const PathEvent> events, uint64_t bucket,
                          uint64_t total_execs);

}  // namespace mutafuzz

#endif  // MUTAFUZZ_METRICS_H_

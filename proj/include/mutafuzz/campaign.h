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

#ifndef MUTAFUZZ_CAMPAIGN_H_
#define MUTAFUZZ_CAMPAIGN_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "mutafuzz/collector.h"
#include "mutafuzz/harness.h"
#include "mutafuzz/metrics.h"
#include "mutafuzz/oracle.h"

namespace mutafuzz {

enum class OracleKind { kUniform, kCount, kRemote };

std::string_view OracleKindName(OracleKind kind);
OracleKind OracleKindFromName(std::string_view name);  // throws InvalidConfig

struct CampaignConfig {
  TargetSpec target;
  OracleKind oracle_kind = OracleKind::kUniform;
  // Count oracle: either a model file or an in-memory model.
  std::filesystem::path model_path;
  std::optional<CountModel> preloaded_model;
  // Remote oracle.
  std::string endpoint;
  int remote_timeout_ms = 1000;

  // Stop after this many target executions (0 = no execution budget) and/or
  // after this much wall time (0 = no wall budget). Both zero means the
  // campaign ends immediately with an empty report.
  uint64_t budget_execs = 0;
  double budget_seconds = 0.0;

  uint64_t rng_seed = 1;
  std::filesystem::path seed_dir;
  // Campaign artifacts (queue/, crashes/, report.*, datasets) are written
  // here; empty keeps everything in memory.
  std::filesystem::path output_dir;
  // Temp files for external targets; empty uses the system temp directory.
  std::filesystem::path scratch_dir;

  OracleConfig oracle;
  int workers = 1;  // >1 trades replay determinism for throughput
  uint64_t gain_bucket = 1000;
  std::string instruction = std::string(kDefaultInstruction);
  size_t byte_cap = 2048;
  double split_ratio = 0.9;
  size_t max_input_bytes = 1 << 20;
  bool echo_config = true;

  // The effective configuration as embedded in report.json.
  nlohmann::ordered_json Echo() const;
  void Validate() const;  // throws InvalidConfig
};

// One mutation execution, as the campaign saw it. The log is ordered by
// exec_index and is sufficient to recompute every report metric from
// scratch.
struct AttemptRecord {
  uint64_t exec_index = 0;  // 1-based, shared with seed priming
  int strategy_id = 0;
  bool timeout = false;
  bool crashed = false;
  bool queued = false;
  bool new_crash = false;
  uint64_t signature = 0;     // crashes only
  uint64_t test_case_id = 0;  // queued only
};

struct CampaignResult {
  CampaignStats stats;
  std::vector<AttemptRecord> attempt_log;
  std::vector<MutationRecord> records;
  std::vector<std::array<uint64_t, 2>> fallback_windows;
  // Signatures of initial seeds that crashed during priming (these appear in
  // the crash counters but not in the attempt log).
  std::vector<uint64_t> seed_crash_signatures;
  nlohmann::ordered_json report;
};

// Runs one fuzzing campaign: prime the queue with the initial seeds, then
// loop { select seed, predict a mutation plan, apply each pair to the
// unmutated seed, execute, classify, record } until the budget is spent.
//
// With workers == 1 and no wall budget the campaign is a pure function of
// its configuration: reruns produce byte-identical reports.
//
// A remote oracle that becomes unavailable (or answers garbage) degrades to
// the uniform baseline; the affected execution spans are logged and reported
// as fallback windows, and the remote is re-probed periodically.
CampaignResult RunCampaign(const CampaignConfig& config);

}  // namespace mutafuzz

#endif  // MUTAFUZZ_CAMPAIGN_H_

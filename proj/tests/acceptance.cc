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

// Acceptance gate: eight end-to-end guarantees, one pass/fail line each.
//
//   1. Mutation bit-exactness (property suite + exhaustive arith 8/8).
//   2. Dataset worked-example fidelity and round-trips.
//   3. Train/validation split arithmetic on fixed corpus sizes.
//   4. Deterministic 200k-execution campaign with byte-identical reports.
//   5. Count-model guidance beats the uniform baseline >= 2x in EPM.
//   6. Report counters recomputed from the raw log match exactly.
//   7. Oracle distribution guarantees (normalization, marginals, nucleus).
//   8. Remote oracle contract incl. mid-campaign server shutdown fallback.
//
// Exits non-zero if any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "mutafuzz/campaign.h"
#include "mutafuzz/collector.h"
#include "mutafuzz/error.h"
#include "mutafuzz/metrics.h"
#include "mutafuzz/mutation.h"
#include "mutafuzz/oracle.h"

#ifndef MUTAFUZZ_CLI_BIN
#error "MUTAFUZZ_CLI_BIN must point at the mutafuzz binary"
#endif

namespace {

using namespace mutafuzz;

// ---------------------------------------------------------------------------
// Small harness utilities.

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Accumulates failure messages; empty means the criterion holds.
struct Checker {
  std::string failures;

  bool Require(bool condition, const std::string& message [[maybe_unused]]) {
    if (!condition) {
      if (!failures.empty()) failures += "; ";
      failures += message;
    }
    return condition;
  }
};

std::filesystem::path MakeTempDir(const std::string& tag) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("mutafuzz-acceptance-" + tag + "-" +
                    std::to_string(getpid()) + "-" +
                    std::to_string(counter++));
  std::filesystem::create_directories(dir);
  return dir;
}

void WriteFileBytes(const std::filesystem::path& path, const Bytes& bytes) {
  std::ofstream f(path, std::ios::binary);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
}

std::string SlurpFile(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
}

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult RunCli(const std::string& args) {
  const std::string command =
      std::string(MUTAFUZZ_CLI_BIN) + " " + args + " 2>&1";
  CommandResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  char buffer[4096];
  size_t n;
  while ((n = fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
    result.output.append(buffer, n);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string FormatDouble(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

// ---------------------------------------------------------------------------
// Criterion 1: mutation bit-exactness.

constexpr int kPropertyCasesPerStrategy = 10000;

bool BytesOutsideSpanUntouched(const Bytes& before, const Bytes& after,
                               size_t position, size_t span) {
  for (size_t i = 0; i < before.size(); ++i) {
    if (i >= position && i < position + span) continue;
    if (before[i] != after[i]) return false;
  }
  return true;
}

bool CheckMutationProperties(Checker& check) {
  Rng rng(0x4d75746166757a7aULL);
  for (Strategy s : AllStrategies()) {
    const size_t width = StrategyWidthBytes(s);
    const size_t span = StrategySpanBytes(s);
    for (int iteration = 0; iteration < kPropertyCasesPerStrategy;
         ++iteration) {
      Bytes input(width + rng.Below(64), 0);
      for (auto& b : input) b = rng.Byte();
      const size_t position = rng.Below(input.size() - width + 1);
      const auto [output, detail] = Apply(input, s, position, rng);

      if (!check.Require(output.size() == input.size(),
                         std::string(StrategyName(s)) +
                             ": output length changed")) {
        return false;
      }
      if (!check.Require(
              BytesOutsideSpanUntouched(input, output, position, span),
              std::string(StrategyName(s)) + ": bytes outside the span " +
                  "changed")) {
        return false;
      }
      if (!check.Require(ApplyWithParams(input, detail) == output,
                         std::string(StrategyName(s)) +
                             ": replay diverged from the recorded draw")) {
        return false;
      }
      switch (s) {
        case Strategy::kBitflip1:
        case Strategy::kBitflip2:
        case Strategy::kBitflip4:
        case Strategy::kBitflip8:
        case Strategy::kBitflip16:
        case Strategy::kBitflip32: {
          if (!check.Require(output != input,
                             std::string(StrategyName(s)) +
                                 ": flip left the input unchanged")) {
            return false;
          }
          if (!check.Require(ApplyWithParams(output, detail) == input,
                             std::string(StrategyName(s)) +
                                 ": flipping twice is not the identity")) {
            return false;
          }
          break;
        }
        case Strategy::kArith8:
        case Strategy::kArith16:
        case Strategy::kArith32: {
          MutationDetail inverse = detail;
          inverse.params.subtract = !inverse.params.subtract;
          if (!check.Require(ApplyWithParams(output, inverse) == input,
                             std::string(StrategyName(s)) +
                                 ": add/subtract are not inverses")) {
            return false;
          }
          break;
        }
        case Strategy::kInterest8:
        case Strategy::kInterest16:
        case Strategy::kInterest32: {
          const Bytes written(output.begin() + static_cast<long>(position),
                              output.begin() +
                                  static_cast<long>(position + width));
          if (!check.Require(written == detail.params.replacement,
                             std::string(StrategyName(s)) +
                                 ": replacement bytes not written")) {
            return false;
          }
          break;
        }
      }
    }
  }

  // Exhaustive differential check of 8-bit arithmetic: every value, every
  // operand, both directions, against plain mod-256 integer arithmetic.
  for (int value = 0; value < 256; ++value) {
    for (int operand = kMinArithOperand; operand <= kMaxArithOperand;
         ++operand) {
      for (int subtract = 0; subtract < 2; ++subtract) {
        MutationDetail detail;
        detail.strategy = Strategy::kArith8;
        detail.position = 0;
        detail.params.operand = operand;
        detail.params.subtract = subtract != 0;
        const Bytes output =
            ApplyWithParams({static_cast<uint8_t>(value)}, detail);
        const int expected =
            subtract != 0 ? (value - operand + 256) % 256
                          : (value + operand) % 256;
        if (!check.Require(output.size() == 1 && output[0] == expected,
                           "arith 8/8 differs from mod-256 arithmetic at "
                           "value " + std::to_string(value) + " operand " +
                               std::to_string(operand))) {
          return false;
        }
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Criterion 2: worked-example dataset fidelity.

bool CheckWorkedExample(Checker& check) {
  const Bytes seed = {0x3c, 0x21, 0x44, 0x4f, 0x43};
  std::vector<MutationRecord> records;
  for (size_t position : {1u, 2u}) {
    MutationRecord record;
    record.seed_bytes = seed;
    record.detail = {Strategy::kBitflip1, position, {}};
    record.outcome = RecordedOutcome::kNewPath;
    record.program = "demo";
    records.push_back(record);
  }
  const auto dataset = BuildDataset(records, kDefaultInstruction, 2048);
  check.Require(dataset.size() == 1, "expected a single grouped sample");
  if (dataset.size() != 1) return false;

  const std::string prompt = ToPromptText(dataset);
  check.Require(prompt ==
                    "Byte Input: 0x3c 0x21 0x44 0x4f 0x43\n"
                    "Mutation strategies: [(1, 2), (1, 3)]\n",
                "prompt text differs from the documented form: '" + prompt +
                    "'");

  const auto from_prompt = FromPromptText(prompt);
  check.Require(from_prompt.size() == 1 &&
                    from_prompt[0].input == seed &&
                    from_prompt[0].pairs == dataset[0].pairs,
                "prompt text does not round-trip");

  const std::string jsonl = ToJsonLines(dataset);
  const auto from_jsonl = FromJsonLines(jsonl);
  check.Require(from_jsonl.size() == 1 &&
                    from_jsonl[0].input == seed &&
                    from_jsonl[0].pairs == dataset[0].pairs &&
                    from_jsonl[0].instruction == dataset[0].instruction,
                "JSON lines do not round-trip");
  return check.failures.empty();
}

// ---------------------------------------------------------------------------
// Criterion 3: split arithmetic.

bool CheckSplitArithmetic(Checker& check) {
  const std::vector<std::pair<size_t, size_t>> expectations = {
      {5038, 4534}, {6047, 5442}};
  for (const auto& [total, expected_train] : expectations) {
    std::vector<InstructRecord> dataset(total);
    for (size_t i = 0; i < total; ++i) {
      dataset[i].input = {static_cast<uint8_t>(i),
                          static_cast<uint8_t>(i >> 8)};
    }
    const auto [train, valid] = SplitDataset(dataset, 0.9, 1);
    check.Require(train.size() == expected_train &&
                      valid.size() == total - expected_train,
                  "split of " + std::to_string(total) + " gave " +
                      std::to_string(train.size()) + "/" +
                      std::to_string(valid.size()) + ", expected " +
                      std::to_string(expected_train) + "/" +
                      std::to_string(total - expected_train));
  }
  return check.failures.empty();
}

// ---------------------------------------------------------------------------
// Criterion 6 helper: recompute every counter from the raw mutation log and
// compare with the incrementally maintained statistics and the rendered
// report. Applied to each in-process campaign the gate runs.

bool VerifyResultAgainstLog(const CampaignResult& result, Checker& check,
                            const std::string& tag) {
  const CampaignStats& stats = result.stats;
  std::array<uint64_t, kNumStrategies> attempts{};
  std::array<uint64_t, kNumStrategies> effective{};
  uint64_t timeouts = 0;
  uint64_t raw_crashes = result.seed_crash_signatures.size();
  std::set<uint64_t> signatures(result.seed_crash_signatures.begin(),
                                result.seed_crash_signatures.end());
  std::vector<PathEvent> path_events;
  uint64_t last_exec = 0;
  for (const AttemptRecord& record : result.attempt_log) {
    check.Require(record.exec_index > last_exec,
                  tag + ": attempt log not ordered by execution index");
    last_exec = record.exec_index;
    attempts[static_cast<size_t>(record.strategy_id - 1)] += 1;
    if (record.timeout) {
      ++timeouts;
      continue;
    }
    if (record.crashed) {
      effective[static_cast<size_t>(record.strategy_id - 1)] += 1;
      ++raw_crashes;
      signatures.insert(record.signature);
    } else if (record.queued) {
      effective[static_cast<size_t>(record.strategy_id - 1)] += 1;
      path_events.push_back({record.exec_index, record.test_case_id});
    }
  }

  check.Require(stats.attempts == attempts, tag + ": attempts mismatch");
  check.Require(stats.effective == effective, tag + ": effective mismatch");
  check.Require(stats.timeouts == timeouts, tag + ": timeout count mismatch");
  check.Require(stats.raw_crashes == raw_crashes,
                tag + ": raw crash count mismatch");
  check.Require(stats.deduped_crashes == signatures.size(),
                tag + ": deduped crash count mismatch");
  check.Require(stats.mutation_attempts == result.attempt_log.size(),
                tag + ": mutation attempt total mismatch");
  // Priming runs each seed file once; none of the gate's seeds hang, so the
  // execution total decomposes exactly.
  check.Require(stats.executions == stats.initial_seeds +
                                        result.seed_crash_signatures.size() +
                                        result.attempt_log.size(),
                tag + ": execution total inconsistent with the log");
  check.Require(stats.path_events.size() == path_events.size(),
                tag + ": path event count mismatch");
  for (size_t i = 0;
       i < std::min(stats.path_events.size(), path_events.size()); ++i) {
    check.Require(stats.path_events[i].exec_index ==
                          path_events[i].exec_index &&
                      stats.path_events[i].test_case_id ==
                          path_events[i].test_case_id,
                  tag + ": path event " + std::to_string(i) + " mismatch");
  }
  check.Require(stats.queue_length ==
                    stats.initial_seeds + path_events.size(),
                tag + ": queue length mismatch");

  // The rendered report must carry exactly the recomputed numbers.
  const nlohmann::ordered_json& report = result.report;
  check.Require(report.at("executions").get<uint64_t>() == stats.executions,
                tag + ": report executions mismatch");
  check.Require(report.at("timeouts").get<uint64_t>() == timeouts,
                tag + ": report timeouts mismatch");
  check.Require(
      report.at("crashes").at("raw").get<uint64_t>() == raw_crashes,
      tag + ": report raw crashes mismatch");
  check.Require(report.at("crashes").at("deduped").get<uint64_t>() ==
                    signatures.size(),
                tag + ": report deduped crashes mismatch");
  const auto& per_strategy = report.at("epm").at("per_strategy");
  for (size_t i = 0; i < kNumStrategies; ++i) {
    check.Require(per_strategy.at(i).at("attempts").get<uint64_t>() ==
                          attempts[i] &&
                      per_strategy.at(i).at("effective").get<uint64_t>() ==
                          effective[i],
                  tag + ": report per-strategy row " + std::to_string(i + 1) +
                      " mismatch");
    check.Require(per_strategy.at(i).at("epm").get<double>() ==
                      Epm(attempts[i], effective[i]),
                  tag + ": report EPM row " + std::to_string(i + 1) +
                      " differs from brute-force recompute");
  }

  // Input-gain series recomputed from the queued events in the log.
  const uint64_t bucket = report.at("input_gain").at("bucket").get<uint64_t>();
  const auto series =
      InputGainSeries(path_events, bucket, stats.executions);
  check.Require(
      report.at("input_gain").at("series").get<std::vector<uint64_t>>() ==
          series,
      tag + ": input-gain series differs from brute-force recompute");
  return check.failures.empty();
}

// ---------------------------------------------------------------------------
// Criterion 4: deterministic 200k-execution campaign.

struct DeterminismOutcome {
  std::vector<CampaignResult> results;
};

bool CheckDeterministicCampaign(Checker& check, DeterminismOutcome& out) {
  const Stopwatch watch;
  const auto seed_dir = MakeTempDir("det-seeds");
  const auto out_dir = MakeTempDir("det-out");
  WriteFileBytes(seed_dir / "seed", Bytes{'h', 'e', 'l', 'l', 'o', ' ', 'w',
                                          'o', 'r', 'l', 'd'});

  CampaignConfig config;
  config.target = TargetSpec::Parse("builtin:magic_header");
  config.seed_dir = seed_dir;
  config.output_dir = out_dir;
  config.budget_execs = 200000;
  config.rng_seed = 2024;

  out.results.push_back(RunCampaign(config));
  const std::string first_report = SlurpFile(out_dir / "report.json");
  out.results.push_back(RunCampaign(config));
  const std::string second_report = SlurpFile(out_dir / "report.json");

  check.Require(!first_report.empty(), "report.json was not written");
  check.Require(first_report == second_report,
                "report.json differs between identical runs");
  check.Require(out.results[0].stats.executions == 200000,
                "campaign did not spend the full execution budget");
  check.Require(out.results[0].stats.deduped_crashes >= 1,
                "no deduplicated crash in 200k executions (found " +
                    std::to_string(out.results[0].stats.deduped_crashes) +
                    ")");
  const double elapsed = watch.Seconds();
  check.Require(elapsed < 60.0, "runtime " + FormatDouble(elapsed) +
                                    "s exceeds the 60s bound");

  std::filesystem::remove_all(seed_dir);
  std::filesystem::remove_all(out_dir);
  return check.failures.empty();
}

// ---------------------------------------------------------------------------
// Criterion 5: learned guidance beats the uniform baseline.

double MeanEpmOf(const CampaignStats& stats) {
  const auto rows = EpmPerStrategy(stats);
  return MeanEpm(rows);
}

struct UpliftOutcome {
  std::vector<CampaignResult> results;
  double pinned_ratio = 0.0;
  double median_ratio = 0.0;
  double pinned_count_epm = 0.0;
  double pinned_uniform_epm = 0.0;
};

bool CheckLearnedUplift(Checker& check, UpliftOutcome& out) {
  const Stopwatch watch;
  const auto seed_dir = MakeTempDir("uplift-seeds");
  // A well-formed multi-segment file. The planted defects sit at the
  // big-endian length fields and the first scan-payload byte, so effective
  // mutations concentrate on a few positions -- exactly what the count model
  // is able to learn.
  WriteFileBytes(seed_dir / "seed",
                 Bytes{0xff, 0xd8,                          // start marker
                       0xff, 0xe0, 0x00, 0x04, 0x4a, 0x46,  // app segment
                       0xff, 0xdb, 0x00, 0x05, 0x01, 0x02, 0x03,  // table
                       0xff, 0xda, 0x00, 0x03, 0x01,        // scan, payload 01
                       0xff, 0xd9});                        // end marker

  CampaignConfig collect_config;
  collect_config.target = TargetSpec::Parse("builtin:mini_jpeg_segments");
  collect_config.seed_dir = seed_dir;
  collect_config.budget_execs = 50000;
  collect_config.rng_seed = 501;
  CampaignResult collect_result = RunCampaign(collect_config);
  check.Require(!collect_result.records.empty(),
                "collection produced no effective mutations");

  const auto dataset =
      BuildDataset(collect_result.records, kDefaultInstruction, 2048);
  check.Require(!dataset.empty(), "collected dataset is empty");
  const CountModel model = TrainCountModelFromDataset(dataset);
  check.Require(model.total() > 0, "count model is empty after training");
  out.results.push_back(std::move(collect_result));

  const std::vector<uint64_t> rng_seeds = {11, 12, 13, 14, 15};
  std::vector<double> ratios;
  for (const uint64_t rng_seed : rng_seeds) {
    CampaignConfig count_config = collect_config;
    count_config.budget_execs = 10000;
    count_config.rng_seed = rng_seed;
    count_config.oracle_kind = OracleKind::kCount;
    count_config.preloaded_model = model;
    CampaignResult count_result = RunCampaign(count_config);

    CampaignConfig uniform_config = collect_config;
    uniform_config.budget_execs = 10000;
    uniform_config.rng_seed = rng_seed;
    CampaignResult uniform_result = RunCampaign(uniform_config);

    const double count_epm = MeanEpmOf(count_result.stats);
    const double uniform_epm = MeanEpmOf(uniform_result.stats);
    const double ratio =
        count_epm / std::max(uniform_epm, 1e-9);
    ratios.push_back(ratio);
    if (rng_seed == rng_seeds.front()) {
      out.pinned_ratio = ratio;
      out.pinned_count_epm = count_epm;
      out.pinned_uniform_epm = uniform_epm;
    }
    out.results.push_back(std::move(count_result));
    out.results.push_back(std::move(uniform_result));
  }

  std::vector<double> sorted_ratios = ratios;
  std::sort(sorted_ratios.begin(), sorted_ratios.end());
  out.median_ratio = sorted_ratios[sorted_ratios.size() / 2];

  check.Require(out.pinned_count_epm > 0.0,
                "count-model campaign found nothing effective");
  check.Require(
      out.pinned_ratio >= 2.0,
      "pinned-seed EPM ratio " + FormatDouble(out.pinned_ratio) +
          " is below 2.0 (count " + FormatDouble(out.pinned_count_epm) +
          " vs uniform " + FormatDouble(out.pinned_uniform_epm) + ")");
  const double elapsed = watch.Seconds();
  check.Require(elapsed < 180.0, "runtime " + FormatDouble(elapsed) +
                                     "s exceeds the 180s bound");
  std::filesystem::remove_all(seed_dir);
  return check.failures.empty();
}

// ---------------------------------------------------------------------------
// Criterion 7: oracle distribution checks.

bool CheckOracleDistributions(Checker& check) {
  // (a) Count-model normalization within 1e-9, with and without temperature.
  Rng model_rng(7001);
  CountModel model;
  for (int i = 0; i < 2000; ++i) {
    Bytes seed(4 + model_rng.Below(60), 0);
    for (auto& b : seed) b = model_rng.Byte();
    const Strategy s =
        StrategyFromId(1 + static_cast<int>(model_rng.Below(12)));
    const size_t position = model_rng.Below(seed.size());
    if (PositionValid(s, position, seed.size())) {
      model.Ingest(seed, position, s);
    }
  }
  for (const size_t length : {5u, 64u, 256u}) {
    Bytes input(length, 0);
    for (auto& b : input) b = model_rng.Byte();
    for (const double temperature : {1.0, 0.7, 2.0}) {
      OracleConfig config;
      config.temperature = temperature;
      const auto cells = ScoreCells(model, input, config);
      double sum = 0.0;
      for (const auto& cell : cells) sum += cell.prob;
      check.Require(std::abs(sum - 1.0) <= 1e-9,
                    "cell probabilities sum to " + std::to_string(sum) +
                        " at length " + std::to_string(length) +
                        " temperature " + std::to_string(temperature));
    }
  }

  // (b) Uniform-oracle strategy marginals within 3 sigma of 1/12 over 100k
  // draws. A 1 KiB input makes the per-strategy cell counts near-identical,
  // so the exact marginal sits well inside the statistical band.
  constexpr int kDraws = 100000;
  const double p = 1.0 / kNumStrategies;
  const double sigma = std::sqrt(p * (1.0 - p) / kDraws);
  OracleConfig uniform_config;
  uniform_config.k_max = 1;
  UniformOracle uniform(uniform_config);
  Rng draw_rng(7002);
  Bytes input(1024, 0xA5);
  std::array<uint64_t, kNumStrategies> strategy_counts{};
  for (int i = 0; i < kDraws; ++i) {
    const MutationPlan plan = uniform.Predict(input, draw_rng);
    strategy_counts[static_cast<size_t>(plan.pairs.at(0).strategy_id - 1)] +=
        1;
  }
  for (size_t i = 0; i < strategy_counts.size(); ++i) {
    const double freq = static_cast<double>(strategy_counts[i]) / kDraws;
    check.Require(std::abs(freq - p) <= 3.0 * sigma,
                  "strategy " + std::to_string(i + 1) + " marginal " +
                      std::to_string(freq) + " deviates more than 3 sigma " +
                      "from 1/12");
  }

  // (c) Nucleus candidate sets for probabilities {0.6, 0.3, 0.1}.
  const std::vector<ScoredCell> cells = {
      {1, 1, 0.3}, {1, 2, 0.6}, {1, 3, 0.1}};
  const auto at_01 = NucleusIndices(cells, 0.1);
  const auto at_08 = NucleusIndices(cells, 0.8);
  const auto at_10 = NucleusIndices(cells, 1.0);
  check.Require(at_01 == std::vector<size_t>{1},
                "top_p 0.1 must keep exactly the 0.6 cell");
  check.Require(at_08 == (std::vector<size_t>{1, 0}),
                "top_p 0.8 must keep the 0.6 and 0.3 cells");
  check.Require(at_10 == (std::vector<size_t>{1, 0, 2}),
                "top_p 1.0 must keep all three cells");
  return check.failures.empty();
}

// ---------------------------------------------------------------------------
// Criterion 8: remote oracle contract.

// Serves fixed mutation pairs, then shuts itself down after a fixed number
// of requests to simulate a mid-campaign model outage.
class FixedPairServer {
 public:
  explicit FixedPairServer(int shutdown_after)
      : shutdown_after_(shutdown_after) {
    server_.Post("/predict", [this](const httplib::Request&,
                                    httplib::Response& res) {
      const int count = ++requests_;
      res.set_content(R"({"pairs": [[1, 1], [4, 2], [9, 1000]]})",
                      "application/json");
      if (count == shutdown_after_) shutdown_signal_.set_value();
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    listen_thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    watcher_thread_ = std::thread([this] {
      shutdown_signal_.get_future().wait();
      server_.stop();
    });
  }

  ~FixedPairServer() {
    if (requests_.load() < shutdown_after_) shutdown_signal_.set_value();
    watcher_thread_.join();
    listen_thread_.join();
  }

  std::string endpoint() const {
    return "http://127.0.0.1:" + std::to_string(port_) + "/predict";
  }

  int requests() const { return requests_.load(); }

 private:
  const int shutdown_after_;
  httplib::Server server_;
  int port_ = 0;
  std::atomic<int> requests_{0};
  std::promise<void> shutdown_signal_;
  std::thread listen_thread_;
  std::thread watcher_thread_;
};

bool CheckRemoteContract(Checker& check) {
  const auto seed_dir = MakeTempDir("remote-seeds");
  const auto out_dir = MakeTempDir("remote-out");
  WriteFileBytes(seed_dir / "seed",
                 Bytes{'<', 'a', '>', '<', 'b', '/', '>', '<', '/', 'a', '>'});

  FixedPairServer server(/*shutdown_after=*/25);
  const CommandResult result = RunCli(
      "fuzz --target builtin:mini_xml --oracle remote --endpoint " +
      server.endpoint() + " --remote-timeout-ms 2000 --seed-dir " +
      seed_dir.string() + " --budget-execs 4000 --rng-seed 88 --out " +
      out_dir.string());

  check.Require(result.exit_code == 0,
                "campaign exited with code " +
                    std::to_string (result.exit_code) + ": " + result.output);
  check.Require(server.requests() >= 25,
                "stub server only saw " + std::to_string(server.requests()) +
                    " requests");
  check.Require(result.output.find("dropping invalid pair") !=
                    std::string::npos,
                "out-of-range pair was not reported as dropped");

  const std::string report_text = SlurpFile(out_dir / "report.json");
  check.Require(!report_text.empty(), "report.json missing");
  if (!report_text.empty()) {
    const auto report = nlohmann::json::parse(report_text);
    check.Require(report.at("executions").get<uint64_t>() == 4000,
                  "campaign stopped early at " +
                      report.at("executions").dump() + " executions");
    check.Require(!report.at("remote_fallback_windows").empty(),
                  "no fallback window was recorded after the shutdown");
    check.Require(report.at("config").at("oracle") == "remote",
                  "report does not carry the remote oracle config");
  }

  std::filesystem::remove_all(seed_dir);
  std::filesystem::remove_all(out_dir);
  return check.failures.empty();
}

}  // namespace

// ---------------------------------------------------------------------------

int main() {
  struct Line {
    bool ok;
    std::string text;
  };
  std::vector<Line> lines;
  auto report = [&lines](int id, bool ok, const std::string& description,
                         const std::string& failures) {
    std::string text = std::string(ok ? "[PASS]" : "[FAIL]") + " criterion " +
                       std::to_string(id) + ": " + description;
    if (!ok && !failures.empty()) text += " -- " + failures;
    lines.push_back({ok, text});
    std::printf("%s\n", text.c_str());
    std::fflush(stdout);
  };

  // 1. Mutation bit-exactness.
  {
    const Stopwatch watch;
    Checker check;
    bool ok = false;
    try {
      ok = CheckMutationProperties(check);
      const double elapsed = watch.Seconds();
      if (!check.Require(elapsed < 10.0,
                         "runtime " + FormatDouble(elapsed) +
                             "s exceeds the 10s bound")) {
        ok = false;
      }
      report(1, ok,
             "mutation bit-exactness, " +
                 std::to_string(kPropertyCasesPerStrategy) +
                 " cases per strategy + exhaustive 8-bit arithmetic (" +
                 FormatDouble(watch.Seconds()) + "s)",
             check.failures);
    } catch (const std::exception& e) {
      report(1, false, "mutation bit-exactness",
             std::string("exception: ") + e.what());
    }
  }

  // 2. Worked-example fidelity.
  {
    Checker check;
    try {
      const bool ok = CheckWorkedExample(check);
      report(2, ok, "dataset worked-example serialization and round-trips",
             check.failures);
    } catch (const std::exception& e) {
      report(2, false, "dataset worked-example serialization",
             std::string("exception: ") + e.what());
    }
  }

  // 3. Split arithmetic.
  {
    Checker check;
    try {
      const bool ok = CheckSplitArithmetic(check);
      report(3, ok, "train/validation split sizes 5038->4534/504 and "
                    "6047->5442/605",
             check.failures);
    } catch (const std::exception& e) {
      report(3, false, "train/validation split sizes",
             std::string("exception: ") + e.what());
    }
  }

  // 4. Deterministic end-to-end campaign. Results feed criterion 6.
  DeterminismOutcome determinism;
  {
    const Stopwatch watch;
    Checker check;
    try {
      const bool ok = CheckDeterministicCampaign(check, determinism);
      report(4, ok,
             "200k-execution campaign: byte-identical report.json, >= 1 "
             "deduped crash (" + FormatDouble(watch.Seconds()) + "s)",
             check.failures);
    } catch (const std::exception& e) {
      report(4, false, "200k-execution deterministic campaign",
             std::string("exception: ") + e.what());
    }
  }

  // 5. Learned-guidance uplift. Results feed criterion 6.
  UpliftOutcome uplift;
  {
    const Stopwatch watch;
    Checker check;
    try {
      const bool ok = CheckLearnedUplift(check, uplift);
      report(5, ok,
             "count-model EPM uplift " + FormatDouble(uplift.pinned_ratio) +
                 "x on the pinned seed (median over 5 seeds " +
                 FormatDouble(uplift.median_ratio) + "x, bound 2.0x, " +
                 FormatDouble(watch.Seconds()) + "s)",
             check.failures);
    } catch (const std::exception& e) {
      report(5, false, "count-model EPM uplift",
             std::string("exception: ") + e.what());
    }
  }

  // 6. Brute-force metric equivalence over every in-process campaign above.
  {
    Checker check;
    try {
      size_t verified = 0;
      for (const CampaignResult& result : determinism.results) {
        VerifyResultAgainstLog(result, check,
                               "determinism run " + std::to_string(verified));
        ++verified;
      }
      for (const CampaignResult& result : uplift.results) {
        VerifyResultAgainstLog(result, check,
                               "uplift run " + std::to_string(verified));
        ++verified;
      }
      const bool ok = check.failures.empty() && verified > 0;
      report(6, ok,
             "log-recomputed EPM/crash/input-gain equal incremental values "
             "on " + std::to_string(verified) + " campaign runs",
             check.failures.empty() ? "no campaign runs to verify"
                                    : check.failures);
    } catch (const std::exception& e) {
      report(6, false, "log-recomputed metric equivalence",
             std::string("exception: ") + e.what());
    }
  }

  // 7. Oracle distribution checks.
  {
    Checker check;
    try {
      const bool ok = CheckOracleDistributions(check);
      report(7, ok,
             "count-model normalization <= 1e-9, uniform marginals within 3 "
             "sigma, nucleus unit cases",
             check.failures);
    } catch (const std::exception& e) {
      report(7, false, "oracle distribution checks",
             std::string("exception: ") + e.what());
    }
  }

  // 8. Remote oracle contract.
  {
    Checker check;
    try {
      const bool ok = CheckRemoteContract(check);
      report(8, ok,
             "remote oracle drives the campaign, drops invalid pairs, and "
             "falls back to uniform on mid-campaign shutdown",
             check.failures);
    } catch (const std::exception& e) {
      report(8, false, "remote oracle contract",
             std::string("exception: ") + e.what());
    }
  }

  int failed = 0;
  for (const Line& line : lines) {
    if (!line.ok) ++failed;
  }
  if (failed > 0) {
    std::printf("%d of %zu criteria failed\n", failed, lines.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", lines.size());
  return 0;
}

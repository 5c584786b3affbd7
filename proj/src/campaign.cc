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

#include "mutafuzz/campaign.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <mutex>
#include <thread>

#include "mutafuzz/corpus.h"
#include "mutafuzz/error.h"

namespace mutafuzz {

namespace {

void Warn(const std::string& message) {
  std::fprintf(stderr, "[mutafuzz] %s\n", message.c_str());
}

std::vector<std::pair<std::string, Bytes>> LoadSeeds(
    const std::filesystem::path& dir, size_t max_bytes) {
  if (!std::filesystem::is_directory(dir)) {
    throw InvalidConfig("seed directory '" + dir.string() +
                        "' does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::pair<std::string, Bytes>> seeds;
  for (const auto& path : files) {
    std::ifstream f(path, std::ios::binary);
    Bytes bytes((std::istreambuf_iterator<char>(f)),
                std::istreambuf_iterator<char>());
    if (bytes.empty()) {
      Warn("skipping empty seed " + path.string());
      continue;
    }
    if (bytes.size() > max_bytes) {
      Warn("skipping oversized seed " + path.string() + " (" +
           std::to_string(bytes.size()) + " bytes)");
      continue;
    }
    seeds.emplace_back(path.filename().string(), std::move(bytes));
  }
  if (seeds.empty()) {
    throw InvalidConfig("no usable seeds in '" + dir.string() + "'");
  }
  return seeds;
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!f) throw Error("cannot write " + path.string());
}

// Everything shared between campaign workers; mutated only under `mu`.
struct CampaignState {
  explicit CampaignState(const CampaignConfig& config)
      : corpus(config.output_dir.empty()
                   ? Corpus(CoverageMap::kDefaultSlots)
                   : Corpus(CoverageMap::kDefaultSlots, config.output_dir)),
        collector(config.target.name) {}

  std::mutex mu;
  Corpus corpus;
  Collector collector;
  CampaignStats stats;
  std::vector<AttemptRecord> attempt_log;
  std::vector<uint64_t> seed_crash_signatures;
  uint64_t claimed = 0;  // execution slots handed out
  bool aborted = false;
  std::string abort_reason;

  // Remote fallback bookkeeping.
  std::vector<std::array<uint64_t, 2>> fallback_windows;
  bool fallback_open = false;
  uint64_t fallback_start = 0;
  int remote_retry_countdown = 0;
  uint64_t empty_plans_in_a_row = 0;
};

// Per-seed-selection retry cadence for an unavailable remote.
constexpr int kRemoteRetryEvery = 8;
constexpr uint64_t kMaxEmptyPlans = 1000;

class CampaignRunner {
 public:
  CampaignRunner(const CampaignConfig& config)
      : config_(config),
        executor_(config.target, config.scratch_dir),
        state_(config) {
    switch (config_.oracle_kind) {
      case OracleKind::kUniform:
        break;
      case OracleKind::kCount: {
        CountModel model = config_.preloaded_model.has_value()
                               ? *config_.preloaded_model
                               : CountModel::Load(config_.model_path);
        count_oracle_ = std::make_unique<CountModelOracle>(std::move(model),
                                                           config_.oracle);
        break;
      }
      case OracleKind::kRemote:
        remote_oracle_ = std::make_unique<RemoteOracle>(
            config_.endpoint, config_.oracle, config_.remote_timeout_ms);
        break;
    }
    uniform_oracle_ = std::make_unique<UniformOracle>(config_.oracle);
    if (config_.budget_seconds > 0) {
      deadline_ = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(config_.budget_seconds));
    }
  }

  CampaignResult Run() {
    PrimeSeeds();
    const int workers = std::max(1, config_.workers);
    if (workers == 1) {
      WorkerLoop(Rng(config_.rng_seed));
    } else {
      std::vector<std::thread> threads;
      threads.reserve(static_cast<size_t>(workers));
      for (int w = 0; w < workers; ++w) {
        const uint64_t worker_seed =
            config_.rng_seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<uint64_t>(w) + 1));
        threads.emplace_back([this, worker_seed] { WorkerLoop(Rng(worker_seed)); });
      }
      for (std::thread& t : threads) t.join();
    }
    if (state_.aborted) throw Error(state_.abort_reason);
    return Finalize();
  }

 private:
  bool DoneLocked() const {
    if (state_.aborted) return true;
    if (config_.budget_execs > 0 && state_.claimed >= config_.budget_execs) {
      return true;
    }
    if (config_.budget_execs == 0 && config_.budget_seconds <= 0) return true;
    if (deadline_.has_value() &&
        std::chrono::steady_clock::now() >= *deadline_) {
      return true;
    }
    return false;
  }

  void PrimeSeeds() {
    // Seed priming runs before the workers; rng is untouched, so the main
    // loop's draw sequence does not depend on how many seeds there are.
    const auto seeds = LoadSeeds(config_.seed_dir, config_.max_input_bytes);
    for (const auto& [name, bytes] : seeds) {
      if (DoneLocked()) break;
      ++state_.claimed;
      RunOutcome outcome = executor_.Execute(bytes);
      const uint64_t exec_index = ++state_.stats.executions;
      switch (outcome.status) {
        case RunOutcome::Status::kOk:
          state_.corpus.AddInitialSeed(bytes, outcome, exec_index);
          break;
        case RunOutcome::Status::kCrash: {
          Warn("initial seed '" + name + "' crashes the target; not queued");
          Classification cls = state_.corpus.EnqueueIfEffective(
              bytes, outcome, std::nullopt, std::nullopt, exec_index);
          state_.seed_crash_signatures.push_back(cls.signature);
          break;
        }
        case RunOutcome::Status::kTimeout:
          Warn("initial seed '" + name + "' times out; not queued");
          ++state_.stats.timeouts;
          break;
      }
    }
    if (state_.corpus.queue().empty() && !DoneLocked()) {
      throw InvalidConfig("no usable initial seeds (all crashed or hung)");
    }
  }

  // Picks the plan for one seed. Caller holds the lock.
  MutationPlan PredictLocked(const Bytes& seed_bytes, Rng& rng) {
    if (remote_oracle_ != nullptr) {
      if (state_.remote_retry_countdown > 0) {
        --state_.remote_retry_countdown;
      } else {
        try {
          MutationPlan plan = remote_oracle_->Predict(seed_bytes, rng);
          if (state_.fallback_open) {
            state_.fallback_windows.push_back(
                {state_.fallback_start, state_.stats.executions});
            state_.fallback_open = false;
          }
          return plan;
        } catch (const RemoteUnavailable& e) {
          Warn(std::string("remote oracle unavailable, using uniform: ") +
               e.what());
        } catch (const MalformedResponse& e) {
          Warn(std::string("remote oracle malformed, using uniform: ") +
               e.what());
        }
        if (!state_.fallback_open) {
          state_.fallback_open = true;
          state_.fallback_start = state_.stats.executions + 1;
        }
        state_.remote_retry_countdown = kRemoteRetryEvery;
      }
      return uniform_oracle_->Predict(seed_bytes, rng);
    }
    if (count_oracle_ != nullptr) return count_oracle_->Predict(seed_bytes, rng);
    return uniform_oracle_->Predict(seed_bytes, rng);
  }

  void WorkerLoop(Rng rng) {
    for (;;) {
      TestCase seed;
      MutationPlan plan;
      {
        std::lock_guard<std::mutex> lock(state_.mu);
        if (DoneLocked()) return;
        seed = state_.corpus.SelectSeed();
        try {
          plan = PredictLocked(seed.bytes, rng);
        } catch (const Error& e) {
          state_.aborted = true;
          state_.abort_reason = e.what();
          return;
        }
        if (plan.pairs.empty()) {
          if (++state_.empty_plans_in_a_row >= kMaxEmptyPlans) {
            state_.aborted = true;
            state_.abort_reason =
                "oracle produced " + std::to_string(kMaxEmptyPlans) +
                " empty plans in a row";
            return;
          }
        } else {
          state_.empty_plans_in_a_row = 0;
        }
      }
      for (const PlanPair& pair : plan.pairs) {
        {
          std::lock_guard<std::mutex> lock(state_.mu);
          if (DoneLocked()) return;
          ++state_.claimed;
        }
        const Strategy strategy = StrategyFromId(pair.strategy_id);
        if (!PositionValid(strategy, pair.position - 1, seed.bytes.size())) {
          Warn("skipping invalid plan pair " + DetailToString({strategy, pair.position - 1, {}}));
          std::lock_guard<std::mutex> lock(state_.mu);
          --state_.claimed;
          continue;
        }
        auto [mutated, detail] =
            ::mutafuzz::Apply(seed.bytes, strategy, pair.position - 1, rng);
        RunOutcome outcome = executor_.Execute(mutated);
        Commit(seed, detail, std::move(mutated), outcome);
      }
    }
  }

  void Commit(const TestCase& seed, const MutationDetail& detail,
              Bytes mutated, const RunOutcome& outcome) {
    std::lock_guard<std::mutex> lock(state_.mu);
    const uint64_t exec_index = ++state_.stats.executions;
    const auto s = static_cast<size_t>(static_cast<int>(detail.strategy) - 1);
    state_.stats.attempts[s] += 1;

    AttemptRecord rec;
    rec.exec_index = exec_index;
    rec.strategy_id = static_cast<int>(detail.strategy);

    if (outcome.status == RunOutcome::Status::kTimeout) {
      rec.timeout = true;
      state_.stats.timeouts += 1;
      state_.attempt_log.push_back(rec);
      return;
    }
    const Classification cls = state_.corpus.EnqueueIfEffective(
        std::move(mutated), outcome, seed.id, detail, exec_index);
    switch (cls.effect) {
      case Classification::Effect::kCrashed:
        rec.crashed = true;
        rec.new_crash = cls.new_crash;
        rec.signature = cls.signature;
        state_.stats.effective[s] += 1;
        state_.collector.Record(detail, seed.bytes, RecordedOutcome::kCrash,
                                exec_index);
        break;
      case Classification::Effect::kQueued:
        rec.queued = true;
        rec.test_case_id = cls.test_case_id;
        state_.stats.effective[s] += 1;
        state_.stats.path_events.push_back({exec_index, cls.test_case_id});
        state_.collector.Record(detail, seed.bytes, RecordedOutcome::kNewPath,
                                exec_index);
        break;
      case Classification::Effect::kDiscarded:
        break;
    }
    state_.attempt_log.push_back(rec);
  }

  CampaignResult Finalize() {
    if (state_.fallback_open) {
      if (state_.stats.executions >= state_.fallback_start) {
        state_.fallback_windows.push_back(
            {state_.fallback_start, state_.stats.executions});
      }
      state_.fallback_open = false;
    }
    CampaignStats& stats = state_.stats;
    for (uint64_t a : stats.attempts) stats.mutation_attempts += a;
    stats.raw_crashes = state_.corpus.raw_crash_count();
    stats.deduped_crashes = state_.corpus.deduped_crash_count();
    stats.initial_seeds = state_.corpus.initial_seed_count();
    stats.queue_length = state_.corpus.queue().size();
    stats.instrumented = executor_.instrumented();
    if (stats.instrumented) {
      stats.edges_total = executor_.edge_count();
      stats.edges_covered = state_.corpus.global_coverage().CountNonZero();
    }

    CampaignResult result;
    result.stats = std::move(state_.stats);
    result.attempt_log = std::move(state_.attempt_log);
    result.records = state_.collector.TakeRecords();
    result.fallback_windows = std::move(state_.fallback_windows);
    result.seed_crash_signatures = std::move(state_.seed_crash_signatures);

    nlohmann::ordered_json echo;
    if (config_.echo_config) echo = config_.Echo();
    result.report =
        RenderJson(result.stats, config_.echo_config ? &echo : nullptr,
                   result.fallback_windows, config_.gain_bucket);

    if (!config_.output_dir.empty()) WriteArtifacts(result);
    return result;
  }

  void WriteArtifacts(const CampaignResult& result) {
    const auto& dir = config_.output_dir;
    std::filesystem::create_directories(dir);
    WriteFile(dir / "report.json", result.report.dump(2) + "\n");
    WriteFile(dir / "report.txt", RenderTable(result.stats));
    WriteFile(dir / "input_gain.csv",
              RenderGainCsv(result.stats.path_events, config_.gain_bucket,
                            result.stats.executions));
    if (result.records.empty()) return;
    const std::vector<InstructRecord> dataset =
        BuildDataset(result.records, config_.instruction, config_.byte_cap);
    WriteFile(dir / "fuzz-instruct.jsonl", ToJsonLines(dataset));
    WriteFile(dir / "fuzz-instruct.txt", ToPromptText(dataset));
    if (dataset.size() >= 2) {
      const auto [train, valid] =
          SplitDataset(dataset, config_.split_ratio, config_.rng_seed);
      WriteFile(dir / "train.jsonl", ToJsonLines(train));
      WriteFile(dir / "valid.jsonl", ToJsonLines(valid));
    } else {
      Warn("dataset has fewer than 2 samples; skipping train/valid split");
    }
  }

  const CampaignConfig& config_;
  Executor executor_;
  CampaignState state_;
  std::unique_ptr<UniformOracle> uniform_oracle_;
  std::unique_ptr<CountModelOracle> count_oracle_;
  std::unique_ptr<RemoteOracle> remote_oracle_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
};

}  // namespace

std::string_view OracleKindName(OracleKind kind) {
  switch (kind) {
    case OracleKind::kUniform:
      return "uniform";
    case OracleKind::kCount:
      return "count";
    case OracleKind::kRemote:
      return "remote";
  }
  return "uniform";
}

OracleKind OracleKindFromName(std::string_view name) {
  if (name == "uniform") return OracleKind::kUniform;
  if (name == "count") return OracleKind::kCount;
  if (name == "remote") return OracleKind::kRemote;
  throw InvalidConfig("unknown oracle '" + std::string(name) +
                      "' (expected uniform, count or remote)");
}

nlohmann::ordered_json CampaignConfig::Echo() const {
  nlohmann::ordered_json j;
  j["target"] = target.Describe();
  j["timeout_ms"] = target.timeout.count();
  j["oracle"] = OracleKindName(oracle_kind);
  j["model"] = model_path.string();
  j["endpoint"] = endpoint;
  j["remote_timeout_ms"] = remote_timeout_ms;
  j["budget_execs"] = budget_execs;
  j["budget_seconds"] = budget_seconds;
  j["rng_seed"] = rng_seed;
  j["seed_dir"] = seed_dir.string();
  j["output_dir"] = output_dir.string();
  j["k_max"] = oracle.k_max;
  j["top_p"] = oracle.top_p;
  j["temperature"] = oracle.temperature;
  j["alpha"] = oracle.alpha;
  j["workers"] = workers;
  j["gain_bucket"] = gain_bucket;
  j["byte_cap"] = byte_cap;
  j["split_ratio"] = split_ratio;
  j["max_input_bytes"] = max_input_bytes;
  j["instruction"] = instruction;
  return j;
}

void CampaignConfig::Validate() const {
  if (seed_dir.empty()) throw InvalidConfig("seed directory is required");
  if (workers < 1) throw InvalidConfig("workers must be >= 1");
  if (oracle.k_max < 1) throw InvalidConfig("k_max must be >= 1");
  if (!(oracle.top_p > 0.0 && oracle.top_p <= 1.0)) {
    throw InvalidConfig("top_p must be in (0, 1]");
  }
  if (!(oracle.temperature > 0.0)) {
    throw InvalidConfig("temperature must be positive");
  }
  if (!(oracle.alpha > 0.0)) throw InvalidConfig("alpha must be positive");
  if (gain_bucket == 0) throw InvalidConfig("gain bucket must be positive");
  if (!(split_ratio > 0.0 && split_ratio < 1.0)) {
    throw InvalidConfig("split ratio must be in (0, 1)");
  }
  if (oracle_kind == OracleKind::kCount && model_path.empty() &&
      !preloaded_model.has_value()) {
    throw InvalidConfig("count oracle requires a model");
  }
  if (oracle_kind == OracleKind::kRemote && endpoint.empty()) {
    throw InvalidConfig("remote oracle requires an endpoint");
  }
}

CampaignResult RunCampaign(const CampaignConfig& config) {
  config.Validate();
  CampaignRunner runner(config);
  return runner.Run();
}

}  // namespace mutafuzz

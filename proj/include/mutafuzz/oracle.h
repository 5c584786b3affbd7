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

#ifndef MUTAFUZZ_ORACLE_H_
#define MUTAFUZZ_ORACLE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mutafuzz/bytes.h"
#include "mutafuzz/collector.h"
#include "mutafuzz/mutation.h"
#include "mutafuzz/rng.h"

namespace mutafuzz {

// Sampling knobs shared by all oracles.
struct OracleConfig {
  int k_max = 16;        // pairs requested per plan
  double top_p = 0.9;    // nucleus mass
  double temperature = 1.0;
  double alpha = 0.5;    // Laplace smoothing for the count model
};

// An ordered list of mutations to try on one seed. Positions are 1-based,
// matching the serialized dataset form; every pair is valid for the seed it
// was predicted for.
struct PlanPair {
  int strategy_id = 0;     // 1..12
  uint32_t position = 0;   // 1-based
};

struct MutationPlan {
  std::vector<PlanPair> pairs;
};

// Predicts where and how to mutate a seed. Implementations must be
// deterministic given the rng state (the remote oracle is deterministic on
// the client side; the server may do as it pleases).
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual MutationPlan Predict(const Bytes& input, Rng& rng) = 0;
  virtual std::string_view name() const = 0;
};

// Baseline: k_max independent draws, uniform over *all* valid
// (strategy, position) cells. Uniformity is over cells, not strategy-first:
// conditioned on any position where every strategy fits, each strategy is
// equally likely.
class UniformOracle final : public Oracle {
 public:
  explicit UniformOracle(OracleConfig config) : config_(config) {}
  MutationPlan Predict(const Bytes& input, Rng& rng) override;
  std::string_view name() const override { return "uniform"; }

 private:
  OracleConfig config_;
};

// Count statistics over effective mutations, the desk-scale stand-in for a
// fine-tuned sequence model. Two independent factors are estimated:
//
//   P(strategy | byte context)   context = (prev, cur, next) seed bytes,
//                                with an out-of-bounds sentinel
//   P(position bucket | strategy)  16 relative-position buckets
//
// A (strategy, position) cell on a fresh seed is scored by the product of
// the two Laplace-smoothed estimates.
class CountModel {
 public:
  static constexpr int kPositionBuckets = 16;
  static constexpr int kOutOfBounds = 256;  // context sentinel

  // Packs a (prev, cur, next) byte context, each in [0, 256].
  static uint32_t ContextKey(int prev, int cur, int next) {
    return (static_cast<uint32_t>(prev) * 257u + static_cast<uint32_t>(cur)) *
               257u +
           static_cast<uint32_t>(next);
  }

  // Relative position bucket: floor(16 * position / size), 0-based position.
  static int PositionBucket(size_t position, size_t size) {
    return static_cast<int>(position * kPositionBuckets / size);
  }

  // Counts one effective mutation of `seed` (0-based `position`).
  void Ingest(const Bytes& seed, size_t position, Strategy strategy);

  // Smoothed P(strategy | context); alpha > 0.
  double ContextProb(uint32_t context_key, Strategy strategy,
                     double alpha) const;
  // Smoothed P(bucket | strategy).
  double BucketProb(int bucket, Strategy strategy, double alpha) const;

  uint64_t total() const { return total_; }

  // Binary model file, byte-for-byte deterministic for equal contents.
  void Save(const std::filesystem::path& path) const;
  static CountModel Load(const std::filesystem::path& path);

  bool operator==(const CountModel& other) const = default;

 private:
  // Context -> per-strategy counts. std::map keeps serialization ordered.
  std::map<uint32_t, std::array<uint64_t, kNumStrategies>> context_counts_;
  std::array<std::array<uint64_t, kPositionBuckets>, kNumStrategies>
      bucket_counts_{};
  std::array<uint64_t, kNumStrategies> strategy_totals_{};
  uint64_t total_ = 0;
};

// Builds a model from campaign records. Records whose outcome is kNothing
// are skipped; throws NoRecords when nothing remains.
CountModel TrainCountModel(std::span<const MutationRecord> records);

// Same, from a serialized dataset (each pair of a sample counts once).
CountModel TrainCountModelFromDataset(std::span<const InstructRecord> dataset);

// One scored (strategy, position) cell. ScoreCells returns every valid cell
// for the input, ordered by strategy id then position, with probabilities
// normalized to sum to 1 (after temperature is applied).
struct ScoredCell {
  int strategy_id = 0;
  uint32_t position = 0;  // 1-based
  double prob = 0.0;
};

std::vector<ScoredCell> ScoreCells(const CountModel& model, const Bytes& input,
                                   const OracleConfig& config);

// Indices of the nucleus: the smallest prefix of the cells sorted by
// descending probability whose mass reaches top_p (never empty).
std::vector<size_t> NucleusIndices(std::span<const ScoredCell> cells,
                                   double top_p);

// Draws up to k distinct indices from `candidates`, each draw proportional
// to the remaining cells' probabilities (without replacement).
std::vector<size_t> SampleWithoutReplacement(std::span<const ScoredCell> cells,
                                             std::vector<size_t> candidates,
                                             size_t k, Rng& rng);

// Nucleus sampling over count-model scores.
class CountModelOracle final : public Oracle {
 public:
  CountModelOracle(CountModel model, OracleConfig config)
      : model_(std::move(model)), config_(config) {}
  MutationPlan Predict(const Bytes& input, Rng& rng) override;
  std::string_view name() const override { return "count"; }

  const CountModel& model() const { return model_; }

 private:
  CountModel model_;
  OracleConfig config_;
};

// Remote generative model speaking JSON over HTTP:
//   POST <endpoint>  {"bytes_hex": "3c 21 ...", "k_max": K, "top_p": P}
//   200 OK           {"pairs": [[strategy, position], ...]}
// Pairs that are malformed or invalid for the input are dropped with a
// warning. Transport failures and non-200 statuses raise RemoteUnavailable;
// unparseable bodies raise MalformedResponse.
class RemoteOracle final : public Oracle {
 public:
  using WarnFn = std::function<void(const std::string&)>;

  // `endpoint` is an http:// URL. Throws InvalidConfig on anything else.
  RemoteOracle(std::string endpoint, OracleConfig config,
               int timeout_ms = 1000, WarnFn warn = {});

  MutationPlan Predict(const Bytes& input, Rng& rng) override;
  std::string_view name() const override { return "remote"; }

 private:
  std::string host_;
  int port_ = 80;
  std::string path_;
  OracleConfig config_;
  int timeout_ms_;
  WarnFn warn_;
};

}  // namespace mutafuzz

#endif  // MUTAFUZZ_ORACLE_H_

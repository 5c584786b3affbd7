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

#ifndef MUTAFUZZ_COLLECTOR_H_
#define MUTAFUZZ_COLLECTOR_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mutafuzz/bytes.h"
#include "mutafuzz/mutation.h"

namespace mutafuzz {

// Why a mutation was worth keeping.
enum class RecordedOutcome {
  kNewPath,
  kCrash,
  kNothing,  // not recorded
};

// One effective mutation: which seed it was applied to, what was done, and
// what it achieved. This is the raw material the trainable oracle learns
// from.
struct MutationRecord {
  Bytes seed_bytes;
  MutationDetail detail;
  RecordedOutcome outcome = RecordedOutcome::kNewPath;
  uint64_t exec_index = 0;  // campaign execution counter
  std::string program;      // target name

  // The serialized (strategy id, 1-based position) form of `detail`.
  std::pair<int, uint32_t> Pair() const {
    return {static_cast<int>(detail.strategy),
            static_cast<uint32_t>(detail.position + 1)};
  }
};

// Accumulates effective mutations during a campaign. Mutations classified as
// kNothing are ignored; crashes are recorded even when their signature was
// seen before (a repeated crash is still a successful mutation).
class Collector {
 public:
  explicit Collector(std::string program) : program_(std::move(program)) {}

  void Record(const MutationDetail& detail, const Bytes& seed_bytes,
              RecordedOutcome outcome, uint64_t exec_index);

  const std::vector<MutationRecord>& records() const { return records_; }
  std::vector<MutationRecord> TakeRecords() { return std::move(records_); }

 private:
  std::string program_;
  std::vector<MutationRecord> records_;
};

// One instruction-tuning sample: a seed rendered as hex plus every effective
// (strategy, position) pair observed on it, in recording order.
struct InstructRecord {
  std::string instruction;
  Bytes input;
  std::vector<std::pair<int, uint32_t>> pairs;  // (strategy id, 1-based pos)
  bool truncated = false;
};

// The instruction text attached to every sample; "{program}" is replaced by
// the target name.
inline constexpr std::string_view kDefaultInstruction =
    "Given a byte sequence from a {program} input, propose the mutation "
    "strategies and byte positions most likely to expose new program "
    "behavior. Answer with a list of (strategy, position) pairs.";

// "[(1, 2), (1, 3)]" -- and its inverse. Parsing throws Error on anything
// that does not look like a pair list.
std::string RenderPairs(std::span<const std::pair<int, uint32_t>> pairs);
std::vector<std::pair<int, uint32_t>> ParsePairs(std::string_view text);

// Groups records by identical seed bytes (first-appearance order) and
// renders one InstructRecord per seed. Seeds longer than `byte_cap` are cut
// to the cap, the sample is flagged `truncated`, and pairs beyond the cap
// are dropped (a sample whose pairs are all dropped is omitted).
std::vector<InstructRecord> BuildDataset(std::span<const MutationRecord> records,
                                         std::string_view instruction_template,
                                         size_t byte_cap = 2048);

// Deterministic shuffled split. The train side gets floor(ratio * N)
// samples, the validation side the rest. Requires 2 <= N and both sides
// non-empty; throws TooFewSamples / InvalidConfig otherwise.
std::pair<std::vector<InstructRecord>, std::vector<InstructRecord>>
SplitDataset(const std::vector<InstructRecord>& dataset, double train_ratio,
             uint64_t seed);

// JSON-lines serialization: one object per line with keys
// instruction / input / output (plus "truncated" when set).
std::string ToJsonLines(std::span<const InstructRecord> records);
std::vector<InstructRecord> FromJsonLines(std::string_view text);

// Plain-text serialization, one blank-line-separated block per record:
//   Byte Input: 0x3c 0x21 0x44 0x4f 0x43
//   Mutation strategies: [(1, 2), (1, 3)]
std::string ToPromptText(std::span<const InstructRecord> records);
std::vector<InstructRecord> FromPromptText(std::string_view text);

}  // namespace mutafuzz

#endif  // MUTAFUZZ_COLLECTOR_H_

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

#ifndef MUTAFUZZ_CORPUS_H_
#define MUTAFUZZ_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "mutafuzz/bytes.h"
#include "mutafuzz/coverage.h"
#include "mutafuzz/harness.h"
#include "mutafuzz/mutation.h"

namespace mutafuzz {

// A corpus entry. Initial seeds have no parent/origin; everything else
// records the seed it was derived from and the exact mutation that produced
// it, so any entry can be replayed from the initial seeds.
struct TestCase {
  uint64_t id = 0;
  Bytes bytes;
  std::optional<uint64_t> parent_id;
  std::optional<MutationDetail> origin;
  uint64_t discovered_at = 0;  // campaign execution counter at admission
};

struct CrashEntry {
  TestCase test_case;
  uint64_t signature = 0;
  int signal_or_code = 0;
};

// What happened to a candidate input after execution.
struct Classification {
  enum class Effect {
    kQueued,     // new coverage: admitted to the queue
    kCrashed,    // went to the crash store
    kDiscarded,  // nothing new
  };

  Effect effect = Effect::kDiscarded;
  bool new_path = false;      // run added unseen (slot, bucket) coverage
  bool new_crash = false;     // crash signature not seen before
  uint64_t signature = 0;     // crash signature (crashes only)
  uint64_t test_case_id = 0;  // assigned id (queued only)
};

// Holds the queue of interesting test cases, the accumulated global coverage
// and the deduplicated crash store. The queue is append-only and ids are
// assigned in strictly increasing order. When constructed with an output
// directory, every admitted entry is mirrored to disk:
//   <out>/queue/id:NNNNNN
//   <out>/crashes/id:NNNNNN,sig:SS
class Corpus {
 public:
  Corpus() : Corpus(CoverageMap::kDefaultSlots) {}
  explicit Corpus(size_t coverage_slots);
  // Mirrors queue/crash files under `output_dir` (created if needed).
  Corpus(size_t coverage_slots, std::filesystem::path output_dir);

  // Admits an initial seed unconditionally and merges its coverage.
  uint64_t AddInitialSeed(Bytes bytes, const RunOutcome& outcome,
                          uint64_t exec_counter);

  // Classifies an executed candidate:
  //   crash   -> crash store (deduplicated by signature; every crash counts
  //              toward the raw total). Crashes are not queued.
  //   ok      -> queued iff its coverage adds an unseen (slot, bucket) pair.
  //   timeout -> discarded without touching global coverage.
  Classification EnqueueIfEffective(Bytes candidate, const RunOutcome& outcome,
                                    std::optional<uint64_t> parent_id,
                                    std::optional<MutationDetail> origin,
                                    uint64_t exec_counter);

  // Round-robin over the queue in admission order, wrapping around and
  // picking up entries admitted since the last lap. Throws EmptyQueue.
  TestCase SelectSeed();

  const std::vector<TestCase>& queue() const { return queue_; }
  const std::vector<CrashEntry>& crashes() const { return crashes_; }
  const CoverageMap& global_coverage() const { return global_; }

  uint64_t raw_crash_count() const { return raw_crashes_; }
  size_t deduped_crash_count() const { return crashes_.size(); }
  size_t initial_seed_count() const { return initial_seeds_; }

  // Signature for crash deduplication: the crash site/signal combined with
  // the bucketized coverage fingerprint of the crashing run.
  static uint64_t CrashSignature(const RunOutcome& outcome);

 private:
  uint64_t Enqueue(TestCase tc);
  void WriteQueueFile(const TestCase& tc) const;
  void WriteCrashFile(const CrashEntry& entry, size_t ordinal) const;

  CoverageMap global_;
  std::vector<TestCase> queue_;
  std::vector<CrashEntry> crashes_;
  std::vector<uint64_t> crash_signatures_;  // sorted mirror for dedup lookups
  uint64_t next_id_ = 0;
  uint64_t raw_crashes_ = 0;
  size_t initial_seeds_ = 0;
  size_t next_seed_index_ = 0;
  std::filesystem::path output_dir_;
};

}  // namespace mutafuzz

#endif  // MUTAFUZZ_CORPUS_H_

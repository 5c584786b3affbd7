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

#include "mutafuzz/corpus.h"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "mutafuzz/error.h"

namespace mutafuzz {

Corpus::Corpus(size_t coverage_slots) : global_(coverage_slots) {}

Corpus::Corpus(size_t coverage_slots, std::filesystem::path output_dir)
    : global_(coverage_slots), output_dir_(std::move(output_dir)) {
  std::filesystem::create_directories(output_dir_ / "queue");
  std::filesystem::create_directories(output_dir_ / "crashes");
}

uint64_t Corpus::CrashSignature(const RunOutcome& outcome) {
  uint64_t h = outcome.coverage.Fingerprint();
  h ^= static_cast<uint64_t>(outcome.signal_or_code) + 0x9e3779b97f4a7c15ULL;
  h *= 0x100000001b3ULL;
  return h;
}

uint64_t Corpus::AddInitialSeed(Bytes bytes, const RunOutcome& outcome,
                                uint64_t exec_counter) {
  MergeCoverage(global_, outcome.coverage);
  TestCase tc;
  tc.bytes = std::move(bytes);
  tc.discovered_at = exec_counter;
  ++initial_seeds_;
  return Enqueue(std::move(tc));
}

Classification Corpus::EnqueueIfEffective(Bytes candidate,
                                          const RunOutcome& outcome,
                                          std::optional<uint64_t> parent_id,
                                          std::optional<MutationDetail> origin,
                                          uint64_t exec_counter) {
  Classification result;
  switch (outcome.status) {
    case RunOutcome::Status::kTimeout:
      return result;  // discarded; hangs are not coverage
    case RunOutcome::Status::kCrash: {
      result.effect = Classification::Effect::kCrashed;
      result.signature = CrashSignature(outcome);
      result.new_path = MergeCoverage(global_, outcome.coverage);
      ++raw_crashes_;
      auto it = std::lower_bound(crash_signatures_.begin(),
                                 crash_signatures_.end(), result.signature);
      if (it != crash_signatures_.end() && *it == result.signature) {
        return result;  // duplicate signature: counted, not stored
      }
      result.new_crash = true;
      crash_signatures_.insert(it, result.signature);
      CrashEntry entry;
      entry.test_case.id = next_id_++;
      entry.test_case.bytes = std::move(candidate);
      entry.test_case.parent_id = parent_id;
      entry.test_case.origin = std::move(origin);
      entry.test_case.discovered_at = exec_counter;
      entry.signature = result.signature;
      entry.signal_or_code = outcome.signal_or_code;
      if (!output_dir_.empty()) WriteCrashFile(entry, crashes_.size());
      crashes_.push_back(std::move(entry));
      return result;
    }
    case RunOutcome::Status::kOk:
      break;
  }
  if (!MergeCoverage(global_, outcome.coverage)) {
    return result;  // nothing new: discarded
  }
  result.effect = Classification::Effect::kQueued;
  result.new_path = true;
  TestCase tc;
  tc.bytes = std::move(candidate);
  tc.parent_id = parent_id;
  tc.origin = std::move(origin);
  tc.discovered_at = exec_counter;
  result.test_case_id = Enqueue(std::move(tc));
  return result;
}

TestCase Corpus::SelectSeed() {
  if (queue_.empty()) throw EmptyQueue("seed requested from empty queue");
  if (next_seed_index_ >= queue_.size()) next_seed_index_ = 0;
  return queue_[next_seed_index_++];
}

uint64_t Corpus::Enqueue(TestCase tc) {
  tc.id = next_id_++;
  if (!output_dir_.empty()) WriteQueueFile(tc);
  queue_.push_back(std::move(tc));
  return queue_.back().id;
}

void Corpus::WriteQueueFile(const TestCase& tc) const {
  char name[32];
  std::snprintf(name, sizeof(name), "id:%06llu",
                static_cast<unsigned long long>(tc.id));
  std::ofstream f(output_dir_ / "queue" / name, std::ios::binary);
  f.write(reinterpret_cast<const char*>(tc.bytes.data()),
          static_cast<std::streamsize>(tc.bytes.size()));
}

void Corpus::WriteCrashFile(const CrashEntry& entry, size_t ordinal) const {
  char name[48];
  std::snprintf(name, sizeof(name), "id:%06zu,sig:%02d", ordinal,
                entry.signal_or_code % 100);
  std::ofstream f(output_dir_ / "crashes" / name, std::ios::binary);
  f.write(reinterpret_cast<const char*>(entry.test_case.bytes.data()),
          static_cast<std::streamsize>(entry.test_case.bytes.size()));
}

}  // namespace mutafuzz

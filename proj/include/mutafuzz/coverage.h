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

#ifndef MUTAFUZZ_COVERAGE_H_
#define MUTAFUZZ_COVERAGE_H_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mutafuzz {

// Fixed-size edge hit-count map. A single run records raw, saturating 8-bit
// hit counts per slot; the accumulated global map stores the union of
// *bucketized* counts instead, one bit per (slot, bucket) combination.
class CoverageMap {
 public:
  static constexpr size_t kDefaultSlots = 65536;

  explicit CoverageMap(size_t slots = kDefaultSlots) : counts_(slots, 0) {}

  size_t size() const { return counts_.size(); }

  // Saturating increment of a raw hit count.
  void Hit(size_t slot) {
    uint8_t& c = counts_[slot % counts_.size()];
    if (c != 0xFF) ++c;
  }

  void Clear() { counts_.assign(counts_.size(), 0); }

  uint8_t operator[](size_t slot) const { return counts_[slot]; }
  void Set(size_t slot, uint8_t value) { counts_[slot] = value; }

  const std::vector<uint8_t>& data() const { return counts_; }

  size_t CountNonZero() const;

  // Stable hash of the bucketized map; used for crash deduplication.
  uint64_t Fingerprint() const;

 private:
  std::vector<uint8_t> counts_;
};

// Power-of-two bucketization of a raw hit count. Counts that land in the
// same bucket are considered the same behavior:
//   0->0, 1->1, 2->2, 3->4, 4..7->8, 8..15->16, 16..31->32, 32..127->64,
//   128..255->128.
uint8_t BucketizeCount(uint8_t raw);

// Bucketizes `run` (raw counts) and ORs it into `global` (bucket union).
// Returns true iff the run exercised a (slot, bucket) pair not yet present
// in `global`. Throws SizeMismatch if the maps differ in size.
bool MergeCoverage(CoverageMap& global, const CoverageMap& run);

}  // namespace mutafuzz

#endif  // MUTAFUZZ_COVERAGE_H_

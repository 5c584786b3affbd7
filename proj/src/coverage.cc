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

#include "mutafuzz/coverage.h"

#include <array>
#include <cstring>

#include "mutafuzz/error.h"

namespace mutafuzz {

namespace {

constexpr std::array<uint8_t, 256> BuildBucketTable() {
  std::array<uint8_t, 256> t{};
  for (int i = 0; i < 256; ++i) {
    uint8_t b = 0;
    if (i == 1) {
      b = 1;
    } else if (i == 2) {
      b = 2;
    } else if (i == 3) {
      b = 4;
    } else if (i >= 4 && i <= 7) {
      b = 8;
    } else if (i >= 8 && i <= 15) {
      b = 16;
    } else if (i >= 16 && i <= 31) {
      b = 32;
    } else if (i >= 32 && i <= 127) {
      b = 64;
    } else if (i >= 128) {
      b = 128;
    }
    t[static_cast<size_t>(i)] = b;
  }
  return t;
}

constexpr std::array<uint8_t, 256> kBucketTable = BuildBucketTable();

}  // namespace

uint8_t BucketizeCount(uint8_t raw) { return kBucketTable[raw]; }

size_t CoverageMap::CountNonZero() const {
  // Maps are sparse; skip zero bytes a word at a time.
  size_t n = 0;
  size_t i = 0;
  const uint8_t* bytes = counts_.data();
  for (; i + 8 <= counts_.size(); i += 8) {
    uint64_t word;
    std::memcpy(&word, bytes + i, 8);
    if (word == 0) continue;
    for (size_t j = i; j < i + 8; ++j) n += (bytes[j] != 0);
  }
  for (; i < counts_.size(); ++i) n += (bytes[i] != 0);
  return n;
}

uint64_t CoverageMap::Fingerprint() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (uint8_t c : counts_) {
    h ^= kBucketTable[c];
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool MergeCoverage(CoverageMap& global, const CoverageMap& run) {
  if (global.size() != run.size()) {
    throw SizeMismatch("coverage maps differ in size: " +
                       std::to_string(global.size()) + " vs " +
                       std::to_string(run.size()));
  }
  bool new_bits = false;
  auto merge_byte = [&](size_t slot) {
    const uint8_t bucket = kBucketTable[run[slot]];
    if (bucket == 0) return;
    const uint8_t seen = global[slot];
    if ((seen & bucket) == 0) {
      new_bits = true;
      global.Set(slot, seen | bucket);
    }
  };
  // Run maps are sparse; skip zero bytes a word at a time.
  const uint8_t* run_bytes = run.data().data();
  size_t i = 0;
  for (; i + 8 <= run.size(); i += 8) {
    uint64_t word;
    std::memcpy(&word, run_bytes + i, 8);
    if (word == 0) continue;
    for (size_t j = i; j < i + 8; ++j) merge_byte(j);
  }
  for (; i < run.size(); ++i) merge_byte(i);
  return new_bits;
}

}  // namespace mutafuzz

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

#ifndef MUTAFUZZ_RNG_H_
#define MUTAFUZZ_RNG_H_

#include <cstdint>
#include <random>
#include <utility>

namespace mutafuzz {

// Deterministic random source. Wraps std::mt19937_64 (whose raw output is
// pinned by the standard) but derives bounded integers and doubles by hand:
// std::uniform_int_distribution and friends are implementation-defined, and
// replayability across toolchains requires a fixed draw sequence.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform integer in [0, bound). `bound` must be positive.
  // Lemire multiply-shift with a rejection step, so the result is unbiased
  // and consumes a predictable number of engine draws (one, almost always).
  uint64_t Below(uint64_t bound) {
    auto mul = [&](uint64_t x) {
      return static_cast<unsigned __int128>(x) * bound;
    };
    unsigned __int128 m = mul(NextU64());
    auto low = static_cast<uint64_t>(m);
    if (low < bound) {
      const uint64_t threshold = -bound % bound;
      while (low < threshold) {
        m = mul(NextU64());
        low = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  uint8_t Byte() { return static_cast<uint8_t>(Below(256)); }

  bool Bool() { return Below(2) != 0; }

  // Uniform double in [0, 1) with 53 bits of precision.
  double Real01() {
    return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
  }

  // Fisher-Yates shuffle using this stream.
  template <typename Container>
  void Shuffle(Container& items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(Below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mutafuzz

#endif  // MUTAFUZZ_RNG_H_

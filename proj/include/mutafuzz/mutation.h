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

#ifndef MUTAFUZZ_MUTATION_H_
#define MUTAFUZZ_MUTATION_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "mutafuzz/bytes.h"
#include "mutafuzz/rng.h"

namespace mutafuzz {

// The twelve byte-level mutation strategies. Numeric ids (1..12) are part of
// the wire format: datasets, reports and the remote model protocol all refer
// to strategies by these numbers, so the order here must never change.
//
// Naming follows the "bitflip N/M" convention: flip N consecutive bits with
// an M-bit stepover (the stepover matters to schedulers that sweep positions;
// here a position is chosen per call). "arith N/M" adds or subtracts a small
// integer from an N-bit value; "interest N/M" overwrites an N-bit value.
enum class Strategy : int {
  kBitflip1 = 1,   // flip 1 bit
  kBitflip2 = 2,   // flip 2 consecutive bits
  kBitflip4 = 3,   // flip 4 consecutive bits
  kBitflip8 = 4,   // invert 1 byte
  kBitflip16 = 5,  // invert 2 bytes
  kBitflip32 = 6,  // invert 4 bytes
  kArith8 = 7,     // +/- n on a byte, n in [1, 35]
  kArith16 = 8,    // +/- n on a 16-bit value
  kArith32 = 9,    // +/- n on a 32-bit value
  kInterest8 = 10,   // replace 1 byte
  kInterest16 = 11,  // replace 2 bytes
  kInterest32 = 12,  // replace 4 bytes
};

inline constexpr int kNumStrategies = 12;
inline constexpr int kMinArithOperand = 1;
inline constexpr int kMaxArithOperand = 35;

// All strategies in id order.
const std::array<Strategy, kNumStrategies>& AllStrategies();

// "bitflip 1/1", "arith 16/8", ... (display and report-table names).
std::string_view StrategyName(Strategy s);

// Maps a wire id (1..12) back to a Strategy. Throws InvalidParams otherwise.
Strategy StrategyFromId(int id);

// Width of the operand a strategy rewrites, in bytes. This is what position
// validation is based on: position + width <= input size. Bit-granular
// strategies report 1 (they anchor on a single byte).
size_t StrategyWidthBytes(Strategy s);

// Upper bound on how many bytes an application may touch. Differs from
// StrategyWidthBytes only for bitflip 2/1 and 4/1, whose bit runs may cross
// into the following byte: flipping bits 7 and 8 of a buffer touches two
// bytes.
size_t StrategySpanBytes(Strategy s);

// Length of the bit run for bitflip 1/2/4 per bit; 0 for byte strategies.
int StrategyBitRunLength(Strategy s);

// True iff `position` (0-based) is a legal anchor for `s` on an input of
// `size` bytes.
bool PositionValid(Strategy s, size_t position, size_t size);

// Concrete parameters drawn for one application. Which fields are meaningful
// depends on the strategy family; the rest stay at their defaults.
struct MutationParams {
  // Bit strategies: offset of the first flipped bit within the anchor byte,
  // 0 = most significant. The run proceeds toward less significant bits and
  // may continue into the next byte.
  int bit_offset = 0;
  // Arith strategies: the added/subtracted integer, in [1, 35].
  int operand = 0;
  // Arith strategies: subtract instead of add.
  bool subtract = false;
  // 16/32-bit arith: interpret the bytes big-endian instead of little-endian
  // (the result is written back in the same byte order).
  bool swap_endian = false;
  // Interest strategies: the replacement value, exactly width-many bytes.
  Bytes replacement;
};

// A fully-specified mutation: replaying it on the same input always yields
// the same output.
struct MutationDetail {
  Strategy strategy = Strategy::kBitflip1;
  size_t position = 0;  // 0-based anchor byte
  MutationParams params;
};

struct MutationOptions {
  // Allow bit runs of bitflip 2/1 and 4/1 to continue into the next byte.
  // When false, runs are confined to the anchor byte.
  bool bit_runs_span_bytes = true;
};

// Applies strategy `s` at `position`, drawing any free parameters from `rng`.
// The input is not modified. Throws EmptyInput on an empty buffer and
// PositionOutOfRange if the strategy's operand does not fit at `position`.
//
// For a fixed (input, s, position) and rng state, the draw sequence is fixed:
//   bit strategies     1 draw  (bit offset)
//   arith 8/8          2 draws (operand, subtract)
//   arith 16/8, 32/8   3 draws (operand, subtract, swap)
//   interest           width draws (replacement bytes)
//   bitflip 8/16/32    0 draws
std::pair<Bytes, MutationDetail> Apply(const Bytes& input, Strategy s,
                                       size_t position, Rng& rng,
                                       const MutationOptions& options = {});

// Replays a recorded mutation. Pure: same (input, detail) -> same output.
// Throws PositionOutOfRange / EmptyInput / InvalidParams as applicable.
Bytes ApplyWithParams(const Bytes& input, const MutationDetail& detail,
                      const MutationOptions& options = {});

// Human-readable one-liner, e.g. "arith 16/8 @3 -17 be".
std::string DetailToString(const MutationDetail& detail);

}  // namespace mutafuzz

#endif  // MUTAFUZZ_MUTATION_H_

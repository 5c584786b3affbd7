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

#include "mutafuzz/mutation.h"

#include <algorithm>
#include <cstdio>

#include "mutafuzz/error.h"

namespace mutafuzz {

namespace {

// Reads/writes a `width`-byte unsigned value at `pos`. `big_endian` selects
// the interpretation; the round-trip Write(Read()) is the identity either
// way.
uint32_t ReadScalar(const Bytes& b, size_t pos, size_t width,
                    bool big_endian) {
  uint32_t v = 0;
  for (size_t i = 0; i < width; ++i) {
    size_t at = big_endian ? pos + i : pos + width - 1 - i;
    v = (v << 8) | b[at];
  }
  return v;
}

void WriteScalar(Bytes& b, size_t pos, size_t width, bool big_endian,
                 uint32_t v) {
  for (size_t i = 0; i < width; ++i) {
    size_t at = big_endian ? pos + width - 1 - i : pos + i;
    b[at] = static_cast<uint8_t>(v & 0xFF);
    v >>= 8;
  }
}

// Flips bit `bit_index` of the buffer viewed as a bit string, most
// significant bit of byte 0 first.
void FlipBit(Bytes& b, size_t bit_index) {
  b[bit_index / 8] ^= static_cast<uint8_t>(0x80u >> (bit_index % 8));
}

void CheckPreconditions(const Bytes& input, Strategy s, size_t position) {
  if (input.empty()) throw EmptyInput("mutation on empty input");
  if (!PositionValid(s, position, input.size())) {
    throw PositionOutOfRange("position " + std::to_string(position) +
                             " invalid for " + std::string(StrategyName(s)) +
                             " on " + std::to_string(input.size()) + " bytes");
  }
}

void CheckOperand(int operand) {
  if (operand < kMinArithOperand || operand > kMaxArithOperand) {
    throw InvalidParams("arith operand " + std::to_string(operand) +
                        " outside [1, 35]");
  }
}

}  // namespace

const std::array<Strategy, kNumStrategies>& AllStrategies() {
  static const std::array<Strategy, kNumStrategies> kAll = {
      Strategy::kBitflip1,   Strategy::kBitflip2,   Strategy::kBitflip4,
      Strategy::kBitflip8,   Strategy::kBitflip16,  Strategy::kBitflip32,
      Strategy::kArith8,     Strategy::kArith16,    Strategy::kArith32,
      Strategy::kInterest8,  Strategy::kInterest16, Strategy::kInterest32,
  };
  return kAll;
}

std::string_view StrategyName(Strategy s) {
  switch (s) {
    case Strategy::kBitflip1:
      return "bitflip 1/1";
    case Strategy::kBitflip2:
      return "bitflip 2/1";
    case Strategy::kBitflip4:
      return "bitflip 4/1";
    case Strategy::kBitflip8:
      return "bitflip 8/8";
    case Strategy::kBitflip16:
      return "bitflip 16/8";
    case Strategy::kBitflip32:
      return "bitflip 32/8";
    case Strategy::kArith8:
      return "arith 8/8";
    case Strategy::kArith16:
      return "arith 16/8";
    case Strategy::kArith32:
      return "arith 32/8";
    case Strategy::kInterest8:
      return "interest 8/8";
    case Strategy::kInterest16:
      return "interest 16/8";
    case Strategy::kInterest32:
      return "interest 32/8";
  }
  throw InvalidParams("unknown strategy");
}

Strategy StrategyFromId(int id) {
  if (id < 1 || id > kNumStrategies) {
    throw InvalidParams("strategy id " + std::to_string(id) +
                        " outside [1, 12]");
  }
  return static_cast<Strategy>(id);
}

size_t StrategyWidthBytes(Strategy s) {
  switch (s) {
    case Strategy::kBitflip1:
    case Strategy::kBitflip2:
    case Strategy::kBitflip4:
    case Strategy::kBitflip8:
    case Strategy::kArith8:
    case Strategy::kInterest8:
      return 1;
    case Strategy::kBitflip16:
    case Strategy::kArith16:
    case Strategy::kInterest16:
      return 2;
    case Strategy::kBitflip32:
    case Strategy::kArith32:
    case Strategy::kInterest32:
      return 4;
  }
  throw InvalidParams("unknown strategy");
}

size_t StrategySpanBytes(Strategy s) {
  if (s == Strategy::kBitflip2 || s == Strategy::kBitflip4) return 2;
  return StrategyWidthBytes(s);
}

int StrategyBitRunLength(Strategy s) {
  switch (s) {
    case Strategy::kBitflip1:
      return 1;
    case Strategy::kBitflip2:
      return 2;
    case Strategy::kBitflip4:
      return 4;
    default:
      return 0;
  }
}

bool PositionValid(Strategy s, size_t position, size_t size) {
  return position < size && StrategyWidthBytes(s) <= size - position;
}

std::pair<Bytes, MutationDetail> Apply(const Bytes& input, Strategy s,
                                       size_t position, Rng& rng,
                                       const MutationOptions& options) {
  CheckPreconditions(input, s, position);
  MutationDetail detail;
  detail.strategy = s;
  detail.position = position;
  const int run = StrategyBitRunLength(s);
  if (run > 0) {
    // Pick an offset such that the whole run stays inside the buffer (and
    // inside the byte, when spanning is disabled).
    size_t bits_available =
        options.bit_runs_span_bytes ? input.size() * 8 - position * 8 : 8;
    int max_offset = static_cast<int>(
        std::min<size_t>(7, bits_available - static_cast<size_t>(run)));
    detail.params.bit_offset = static_cast<int>(rng.Below(max_offset + 1));
  } else {
    switch (s) {
      case Strategy::kArith8:
        detail.params.operand =
            kMinArithOperand + static_cast<int>(rng.Below(kMaxArithOperand));
        detail.params.subtract = rng.Bool();
        break;
      case Strategy::kArith16:
      case Strategy::kArith32:
        detail.params.operand =
            kMinArithOperand + static_cast<int>(rng.Below(kMaxArithOperand));
        detail.params.subtract = rng.Bool();
        detail.params.swap_endian = rng.Bool();
        break;
      case Strategy::kInterest8:
      case Strategy::kInterest16:
      case Strategy::kInterest32: {
        detail.params.replacement.resize(StrategyWidthBytes(s));
        for (uint8_t& byte : detail.params.replacement) byte = rng.Byte();
        break;
      }
      default:
        break;  // bitflip 8/16/32 have no free parameters
    }
  }
  return {ApplyWithParams(input, detail, options), detail};
}

Bytes ApplyWithParams(const Bytes& input, const MutationDetail& detail,
                      const MutationOptions& options) {
  const Strategy s = detail.strategy;
  const size_t position = detail.position;
  CheckPreconditions(input, s, position);
  Bytes out = input;
  const size_t width = StrategyWidthBytes(s);
  const int run = StrategyBitRunLength(s);
  if (run > 0) {
    const int offset = detail.params.bit_offset;
    if (offset < 0 || offset > 7) {
      throw InvalidParams("bit offset " + std::to_string(offset) +
                          " outside [0, 7]");
    }
    if (!options.bit_runs_span_bytes && offset + run > 8) {
      throw InvalidParams("bit run crosses byte boundary");
    }
    const size_t first_bit = position * 8 + static_cast<size_t>(offset);
    if (first_bit + static_cast<size_t>(run) > input.size() * 8) {
      throw PositionOutOfRange("bit run exceeds input");
    }
    for (int i = 0; i < run; ++i) FlipBit(out, first_bit + i);
    return out;
  }
  switch (s) {
    case Strategy::kBitflip8:
    case Strategy::kBitflip16:
    case Strategy::kBitflip32:
      for (size_t i = 0; i < width; ++i) out[position + i] ^= 0xFF;
      break;
    case Strategy::kArith8:
    case Strategy::kArith16:
    case Strategy::kArith32: {
      CheckOperand(detail.params.operand);
      const bool be = detail.params.swap_endian;
      uint32_t v = ReadScalar(out, position, width, be);
      const auto n = static_cast<uint32_t>(detail.params.operand);
      v = detail.params.subtract ? v - n : v + n;
      if (width < 4) v &= (1u << (8 * width)) - 1;  // wrap modulo 2^(8w)
      WriteScalar(out, position, width, be, v);
      break;
    }
    case Strategy::kInterest8:
    case Strategy::kInterest16:
    case Strategy::kInterest32: {
      if (detail.params.replacement.size() != width) {
        throw InvalidParams("replacement must be exactly " +
                            std::to_string(width) + " bytes");
      }
      std::copy(detail.params.replacement.begin(),
                detail.params.replacement.end(), out.begin() + position);
      break;
    }
    default:
      throw InvalidParams("unknown strategy");
  }
  return out;
}

std::string DetailToString(const MutationDetail& detail) {
  std::string out(StrategyName(detail.strategy));
  out += " @" + std::to_string(detail.position);
  const Strategy s = detail.strategy;
  if (StrategyBitRunLength(s) > 0) {
    out += " bit+" + std::to_string(detail.params.bit_offset);
  } else if (s == Strategy::kArith8 || s == Strategy::kArith16 ||
             s == Strategy::kArith32) {
    out += detail.params.subtract ? " -" : " +";
    out += std::to_string(detail.params.operand);
    if (s != Strategy::kArith8) out += detail.params.swap_endian ? " be" : " le";
  } else if (!detail.params.replacement.empty()) {
    out += " <- " + ToHex(detail.params.replacement, HexStyle::kPlain);
  }
  return out;
}

}  // namespace mutafuzz

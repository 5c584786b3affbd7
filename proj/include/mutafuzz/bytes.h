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

#ifndef MUTAFUZZ_BYTES_H_
#define MUTAFUZZ_BYTES_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mutafuzz {

using Bytes = std::vector<uint8_t>;

enum class HexStyle {
  kPrefixed,  // "0x3c 0x21 0x44"
  kPlain,     // "3c 21 44"
};

// Renders bytes as lowercase two-digit hex tokens separated by single spaces.
std::string ToHex(std::span<const uint8_t> bytes,
                  HexStyle style = HexStyle::kPrefixed);

// Parses the output of ToHex (either style, tokens may mix). Throws Error on
// a token that is not one byte of hex.
Bytes FromHex(std::string_view text);

// FNV-1a over a byte span; used wherever a stable content hash is needed.
uint64_t HashBytes(std::span<const uint8_t> bytes);

}  // namespace mutafuzz

#endif  // MUTAFUZZ_BYTES_H_

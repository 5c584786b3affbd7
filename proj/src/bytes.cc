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

#include "mutafuzz/bytes.h"

#include <cstdint>

#include "mutafuzz/error.h"

namespace mutafuzz {

namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string ToHex(std::span<const uint8_t> bytes, HexStyle style) {
  std::string out;
  const size_t per_byte = style == HexStyle::kPrefixed ? 5 : 3;
  out.reserve(bytes.size() * per_byte);
  for (size_t i = 0; i < bytes.size(); ++i) {
    if (i > 0) out.push_back(' ');
    if (style == HexStyle::kPrefixed) out.append("0x");
    out.push_back(kHexDigits[bytes[i] >> 4]);
    out.push_back(kHexDigits[bytes[i] & 0x0F]);
  }
  return out;
}

Bytes FromHex(std::string_view text) {
  Bytes out;
  size_t i = 0;
  while (i < text.size()) {
    if (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' ||
        text[i] == '\r') {
      ++i;
      continue;
    }
    size_t end = i;
    while (end < text.size() && text[end] != ' ' && text[end] != '\t' &&
           text[end] != '\n' && text[end] != '\r') {
      ++end;
    }
    std::string_view token = text.substr(i, end - i);
    if (token.size() >= 2 && token[0] == '0' &&
        (token[1] == 'x' || token[1] == 'X')) {
      token.remove_prefix(2);
    }
    if (token.size() != 2 || HexValue(token[0]) < 0 || HexValue(token[1]) < 0) {
      throw Error("bad hex token: '" + std::string(text.substr(i, end - i)) +
                  "'");
    }
    out.push_back(
        static_cast<uint8_t>(HexValue(token[0]) * 16 + HexValue(token[1])));
    i = end;
  }
  return out;
}

uint64_t HashBytes(std::span<const uint8_t> bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace mutafuzz

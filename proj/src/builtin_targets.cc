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

// Built-in fuzz targets: small, deterministic byte parsers with explicit
// edge instrumentation and planted, input-dependent crashes. Each target is
// a pure function of its input, so a campaign over it replays exactly.
//
// Edges are written so that interesting inputs are reachable step by step:
// magic bytes are compared one position at a time (with a half-byte edge in
// between), numeric fields light up bucketed range edges, and so on. This
// mirrors how compiler instrumentation of real parsers exposes comparison
// progress to a coverage-guided loop.

#include <algorithm>
#include <cstdint>
#include <span>

#include "mutafuzz/harness.h"

namespace mutafuzz {

namespace {

// --- magic_header -----------------------------------------------------------
// Checks for a 4-byte "FUZZ" magic, then classifies the tail. Crashes once
// the full magic is present.
namespace magic_header {

enum Edge : int {
  kEntry = 0,
  kTooShort,
  kNib0,  // high nibble of byte i matches (given bytes 0..i-1 match fully)
  kNib1,
  kNib2,
  kNib3,
  kByte0,  // byte i matches exactly
  kByte1,
  kByte2,
  kByte3,
  kFullMagic,
  kTailLower,
  kTailUpper,
  kTailDigit,
  kTailSpace,
  kTailPunct,
  kTailHigh,
  kTailLen0,
  kTailLen1To4,
  kTailLen5To16,
  kTailLen17To64,
  kTailLen65Plus,
  kSumEven,
  kSumOdd,
  kEdgeCount,
};

constexpr uint8_t kMagic[4] = {'F', 'U', 'Z', 'Z'};

int Run(std::span<const uint8_t> input, CoverageMap& map) {
  map.Hit(kEntry);
  if (input.size() < 4) {
    map.Hit(kTooShort);
    return 0;
  }
  int matched = 0;
  for (int i = 0; i < 4; ++i) {
    if ((input[i] >> 4) != (kMagic[i] >> 4)) break;
    map.Hit(kNib0 + i);
    if (input[i] != kMagic[i]) break;
    map.Hit(kByte0 + i);
    ++matched;
  }
  if (matched == 4) {
    map.Hit(kFullMagic);
    return 1;  // crash site 1: the magic gate is the planted defect
  }
  for (size_t i = 4; i < input.size(); ++i) {
    const uint8_t c = input[i];
    if (c >= 'a' && c <= 'z') {
      map.Hit(kTailLower);
    } else if (c >= 'A' && c <= 'Z') {
      map.Hit(kTailUpper);
    } else if (c >= '0' && c <= '9') {
      map.Hit(kTailDigit);
    } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      map.Hit(kTailSpace);
    } else if (c < 0x80) {
      map.Hit(kTailPunct);
    } else {
      map.Hit(kTailHigh);
    }
  }
  const size_t tail = input.size() - 4;
  if (tail == 0) {
    map.Hit(kTailLen0);
  } else if (tail <= 4) {
    map.Hit(kTailLen1To4);
  } else if (tail <= 16) {
    map.Hit(kTailLen5To16);
  } else if (tail <= 64) {
    map.Hit(kTailLen17To64);
  } else {
    map.Hit(kTailLen65Plus);
  }
  uint32_t sum = 0;
  for (uint8_t c : input) sum += c;
  map.Hit((sum % 2 == 0) ? kSumEven : kSumOdd);
  return 0;
}

}  // namespace magic_header

// --- mini_elf ----------------------------------------------------------------
// A toy object-file header parser: 16-byte header followed by 4-byte section
// entries [type, flags, size, name]. Inputs shorter than 4 bytes finish
// cleanly with only the too-short edge hit.
namespace mini_elf {

enum Edge : int {
  kTooShort = 0,
  kMagic0,
  kMagic1,
  kMagic2,
  kMagic3,
  kBadMagic,
  kClass32,
  kClass64,
  kClassOther,
  kEndianLittle,
  kEndianBig,
  kEndianOther,
  kVersionOk,
  kVersionBad,
  kTruncatedHeader,
  kTypeRel,
  kTypeExec,
  kTypeDyn,
  kTypeCore,
  kTypeOther,
  kMach386,
  kMachX86_64,
  kMachOther,
  kShnum0,
  kShnum1To4,
  kShnum5To16,
  kShnum17Plus,
  kSectEntry,
  kSectTypeNull,
  kSectTypeProg,
  kSectTypeSym,
  kSectTypeStr,
  kSectTypeOther,
  kSectFlagMagic,
  kSectEnd,
  kEdgeCount,
};

constexpr uint8_t kMagic[4] = {0x7F, 'E', 'L', 'F'};

int Run(std::span<const uint8_t> input, CoverageMap& map) {
  if (input.size() < 4) {
    map.Hit(kTooShort);
    return 0;
  }
  for (int i = 0; i < 4; ++i) {
    if (input[i] != kMagic[i]) {
      map.Hit(kBadMagic);
      return 0;
    }
    map.Hit(kMagic0 + i);
  }
  if (input.size() < 16) {
    map.Hit(kTruncatedHeader);
    return 0;
  }
  switch (input[4]) {
    case 1:
      map.Hit(kClass32);
      break;
    case 2:
      map.Hit(kClass64);
      break;
    default:
      map.Hit(kClassOther);
  }
  switch (input[5]) {
    case 1:
      map.Hit(kEndianLittle);
      break;
    case 2:
      map.Hit(kEndianBig);
      break;
    default:
      map.Hit(kEndianOther);
  }
  map.Hit(input[6] == 1 ? kVersionOk : kVersionBad);
  const uint16_t e_type = static_cast<uint16_t>(input[8] | (input[9] << 8));
  switch (e_type) {
    case 1:
      map.Hit(kTypeRel);
      break;
    case 2:
      map.Hit(kTypeExec);
      break;
    case 3:
      map.Hit(kTypeDyn);
      break;
    case 4:
      map.Hit(kTypeCore);
      break;
    default:
      map.Hit(kTypeOther);
  }
  const uint16_t machine = static_cast<uint16_t>(input[10] | (input[11] << 8));
  if (machine == 3) {
    map.Hit(kMach386);
  } else if (machine == 62) {
    map.Hit(kMachX86_64);
  } else {
    map.Hit(kMachOther);
  }
  const uint8_t shnum = input[12];
  if (shnum == 0) {
    map.Hit(kShnum0);
  } else if (shnum <= 4) {
    map.Hit(kShnum1To4);
  } else if (shnum <= 16) {
    map.Hit(kShnum5To16);
  } else {
    map.Hit(kShnum17Plus);
  }
  const size_t available = (input.size() - 16) / 4;
  const size_t sections = std::min<size_t>(shnum, available);
  for (size_t s = 0; s < sections; ++s) {
    const uint8_t* entry = input.data() + 16 + 4 * s;
    map.Hit(kSectEntry);
    switch (entry[0]) {
      case 0:
        map.Hit(kSectTypeNull);
        break;
      case 1:
        map.Hit(kSectTypeProg);
        break;
      case 2:
        map.Hit(kSectTypeSym);
        break;
      case 3:
        map.Hit(kSectTypeStr);
        break;
      default:
        map.Hit(kSectTypeOther);
    }
    if (entry[1] == 0x55) {
      map.Hit(kSectFlagMagic);
      if (entry[0] == 0xAA) return 2;  // crash site 2: bogus section blows up
    }
  }
  map.Hit(kSectEnd);
  return 0;
}

}  // namespace mini_elf

// --- mini_xml ----------------------------------------------------------------
// A forgiving tag scanner that tracks element nesting. The planted defect is
// unbounded recursion: nesting deeper than 16 elements crashes.
namespace mini_xml {

enum Edge : int {
  kEntry = 0,
  kLt,
  kGt,
  kOpenTag,
  kCloseTag,
  kSelfClose,
  kProlog,
  kCommentOpen,
  kCommentClose,
  kBangOther,
  kText,
  kAmp,
  kEntityOk,
  kEntityBad,
  kAttrEq,
  kAttrQuote,
  kDepth1,
  kDepth2,
  kDepth4,
  kDepth8,
  kDepth16,
  kMismatch,
  kEofInTag,
  kBalanced,
  kEdgeCount,
};

bool IsNameChar(uint8_t c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '-' || c == ':';
}

int Run(std::span<const uint8_t> input, CoverageMap& map) {
  map.Hit(kEntry);
  int depth = 0;
  bool saw_tag = false;
  size_t i = 0;
  const size_t n = input.size();
  while (i < n) {
    const uint8_t c = input[i];
    if (c == '&') {
      map.Hit(kAmp);
      size_t j = i + 1;
      while (j < n && j - i <= 8 && input[j] != ';') ++j;
      map.Hit(j < n && input[j] == ';' ? kEntityOk : kEntityBad);
      i = j + 1;
      continue;
    }
    if (c != '<') {
      map.Hit(kText);
      ++i;
      continue;
    }
    map.Hit(kLt);
    ++i;
    if (i >= n) {
      map.Hit(kEofInTag);
      break;
    }
    if (input[i] == '?') {
      map.Hit(kProlog);
      while (i < n && input[i] != '>') ++i;
      if (i < n) map.Hit(kGt);
      ++i;
      continue;
    }
    if (input[i] == '!') {
      if (i + 2 < n && input[i + 1] == '-' && input[i + 2] == '-') {
        map.Hit(kCommentOpen);
        i += 3;
        while (i + 2 < n && !(input[i] == '-' && input[i + 1] == '-' &&
                              input[i + 2] == '>')) {
          ++i;
        }
        if (i + 2 < n) {
          map.Hit(kCommentClose);
          i += 3;
        } else {
          i = n;
        }
      } else {
        map.Hit(kBangOther);
        while (i < n && input[i] != '>') ++i;
        ++i;
      }
      continue;
    }
    const bool closing = input[i] == '/';
    if (closing) ++i;
    if (i >= n || !IsNameChar(input[i])) {
      map.Hit(kText);  // stray angle bracket
      continue;
    }
    while (i < n && IsNameChar(input[i])) ++i;
    // Attribute region up to '>'.
    bool self_close = false;
    while (i < n && input[i] != '>') {
      if (input[i] == '=') map.Hit(kAttrEq);
      if (input[i] == '"' || input[i] == '\'') map.Hit(kAttrQuote);
      self_close = input[i] == '/';
      ++i;
    }
    if (i >= n) {
      map.Hit(kEofInTag);
      break;
    }
    map.Hit(kGt);
    ++i;
    saw_tag = true;
    if (closing) {
      map.Hit(kCloseTag);
      if (depth == 0) {
        map.Hit(kMismatch);
      } else {
        --depth;
      }
    } else if (self_close) {
      map.Hit(kSelfClose);
    } else {
      map.Hit(kOpenTag);
      ++depth;
      if (depth >= 1) map.Hit(kDepth1);
      if (depth >= 2) map.Hit(kDepth2);
      if (depth >= 4) map.Hit(kDepth4);
      if (depth >= 8) map.Hit(kDepth8);
      if (depth >= 16) map.Hit(kDepth16);
      if (depth > 16) return 1;  // crash site 1: nesting blows the stack
    }
  }
  if (saw_tag && depth == 0) map.Hit(kBalanced);
  return 0;
}

}  // namespace mini_xml

// --- mini_jpeg_segments ------------------------------------------------------
// Walks a JPEG-like segment stream: SOI, then 0xFF-marker segments carrying a
// big-endian 16-bit length that includes the length field itself. The planted
// defects are the classic ones: a segment length below 2 underflows the
// payload size, and an SOS segment declaring zero components dereferences an
// empty table.
namespace mini_jpeg {

enum Edge : int {
  kEntry = 0,
  kSoiOk,
  kSoiBad,
  kMarkerApp0,
  kMarkerDqt,
  kMarkerSof0,
  kMarkerDht,
  kMarkerSos,
  kMarkerEoi,
  kMarkerOther,
  kLen0To2,
  kLen3To4,
  kLen5To8,
  kLen9To16,
  kLen17To64,
  kLen65Plus,
  kTruncatedPayload,
  kPayloadEven,
  kPayloadOdd,
  kSegs1,
  kSegs2,
  kSegs3,
  kSegs4,
  kSegs5Plus,
  kEoiReached,
  kNoFf,
  kPadFf,
  kTrailingGarbage,
  kEdgeCount,
};

int Run(std::span<const uint8_t> input, CoverageMap& map) {
  map.Hit(kEntry);
  const size_t n = input.size();
  if (n < 2 || input[0] != 0xFF || input[1] != 0xD8) {
    map.Hit(kSoiBad);
    return 0;
  }
  map.Hit(kSoiOk);
  size_t i = 2;
  int segments = 0;
  while (i < n) {
    if (input[i] != 0xFF) {
      map.Hit(kNoFf);
      ++i;
      continue;
    }
    while (i + 1 < n && input[i + 1] == 0xFF) {
      map.Hit(kPadFf);
      ++i;
    }
    if (i + 1 >= n) break;
    const uint8_t marker = input[i + 1];
    i += 2;
    switch (marker) {
      case 0xE0:
        map.Hit(kMarkerApp0);
        break;
      case 0xDB:
        map.Hit(kMarkerDqt);
        break;
      case 0xC0:
        map.Hit(kMarkerSof0);
        break;
      case 0xC4:
        map.Hit(kMarkerDht);
        break;
      case 0xDA:
        map.Hit(kMarkerSos);
        break;
      case 0xD9:
        map.Hit(kMarkerEoi);
        break;
      default:
        map.Hit(kMarkerOther);
    }
    if (marker == 0xD9) {
      map.Hit(kEoiReached);
      if (i < n) map.Hit(kTrailingGarbage);
      break;
    }
    if (i + 2 > n) {
      map.Hit(kTruncatedPayload);
      break;
    }
    const uint16_t length = static_cast<uint16_t>((input[i] << 8) | input[i + 1]);
    if (length <= 2) {
      map.Hit(kLen0To2);
    } else if (length <= 4) {
      map.Hit(kLen3To4);
    } else if (length <= 8) {
      map.Hit(kLen5To8);
    } else if (length <= 16) {
      map.Hit(kLen9To16);
    } else if (length <= 64) {
      map.Hit(kLen17To64);
    } else {
      map.Hit(kLen65Plus);
    }
    if (length < 2) return 1;  // crash site 1: payload size underflow
    const size_t payload = static_cast<size_t>(length) - 2;
    i += 2;
    if (payload > n - i) {
      map.Hit(kTruncatedPayload);
      break;
    }
    uint32_t sum = 0;
    for (size_t j = 0; j < payload; ++j) sum += input[i + j];
    map.Hit(sum % 2 == 0 ? kPayloadEven : kPayloadOdd);
    if (marker == 0xDA && payload > 0 && input[i] == 0) {
      return 2;  // crash site 2: scan declares zero components
    }
    i += payload;
    ++segments;
    switch (segments) {
      case 1:
        map.Hit(kSegs1);
        break;
      case 2:
        map.Hit(kSegs2);
        break;
      case 3:
        map.Hit(kSegs3);
        break;
      case 4:
        map.Hit(kSegs4);
        break;
      default:
        map.Hit(kSegs5Plus);
    }
  }
  return 0;
}

}  // namespace mini_jpeg

}  // namespace

const std::vector<BuiltinTarget>& ListBuiltinTargets() {
  static const std::vector<BuiltinTarget> kTargets = {
      {"magic_header",
       "4-byte magic gate with tail classification; crashes on full match",
       magic_header::kEdgeCount, magic_header::Run},
      {"mini_elf",
       "toy object-file header and section parser; crashes on a bogus section",
       mini_elf::kEdgeCount, mini_elf::Run},
      {"mini_xml",
       "tag scanner tracking element nesting; crashes past depth 16",
       mini_xml::kEdgeCount, mini_xml::Run},
      {"mini_jpeg_segments",
       "marker/length segment walker; crashes on length underflow and "
       "zero-component scans",
       mini_jpeg::kEdgeCount, mini_jpeg::Run},
  };
  return kTargets;
}

const BuiltinTarget* FindBuiltinTarget(std::string_view name) {
  for (const BuiltinTarget& t : ListBuiltinTargets()) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

}  // namespace mutafuzz

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

#include "mutafuzz/collector.h"

#include <cmath>
#include <unordered_map>

#include "json.hpp"
#include "mutafuzz/error.h"
#include "mutafuzz/rng.h"

namespace mutafuzz {

void Collector::Record(const MutationDetail& detail, const Bytes& seed_bytes,
                       RecordedOutcome outcome, uint64_t exec_index) {
  if (outcome == RecordedOutcome::kNothing) return;
  MutationRecord r;
  r.seed_bytes = seed_bytes;
  r.detail = detail;
  r.outcome = outcome;
  r.exec_index = exec_index;
  r.program = program_;
  records_.push_back(std::move(r));
}

std::string RenderPairs(std::span<const std::pair<int, uint32_t>> pairs) {
  std::string out = "[";
  for (size_t i = 0; i < pairs.size(); ++i) {
    if (i > 0) out += ", ";
    out += "(" + std::to_string(pairs[i].first) + ", " +
           std::to_string(pairs[i].second) + ")";
  }
  out += "]";
  return out;
}

namespace {

void SkipSpaces(std::string_view text, size_t& i) {
  while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
}

uint64_t ParseNumber(std::string_view text, size_t& i) {
  SkipSpaces(text, i);
  if (i >= text.size() || text[i] < '0' || text[i] > '9') {
    throw Error("expected a number in pair list at offset " +
                std::to_string(i));
  }
  uint64_t v = 0;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
    v = v * 10 + static_cast<uint64_t>(text[i] - '0');
    if (v > 0xFFFFFFFFULL) throw Error("number too large in pair list");
    ++i;
  }
  return v;
}

void Expect(std::string_view text, size_t& i, char c) {
  SkipSpaces(text, i);
  if (i >= text.size() || text[i] != c) {
    throw Error(std::string("expected '") + c + "' in pair list at offset " +
                std::to_string(i));
  }
  ++i;
}

}  // namespace

std::vector<std::pair<int, uint32_t>> ParsePairs(std::string_view text) {
  std::vector<std::pair<int, uint32_t>> pairs;
  size_t i = 0;
  Expect(text, i, '[');
  SkipSpaces(text, i);
  if (i < text.size() && text[i] == ']') return pairs;
  for (;;) {
    Expect(text, i, '(');
    const auto strategy = static_cast<int>(ParseNumber(text, i));
    Expect(text, i, ',');
    const auto position = static_cast<uint32_t>(ParseNumber(text, i));
    Expect(text, i, ')');
    pairs.emplace_back(strategy, position);
    SkipSpaces(text, i);
    if (i < text.size() && text[i] == ',') {
      ++i;
      continue;
    }
    break;
  }
  Expect(text, i, ']');
  return pairs;
}

std::vector<InstructRecord> BuildDataset(std::span<const MutationRecord> records,
                                         std::string_view instruction_template,
                                         size_t byte_cap) {
  std::vector<InstructRecord> dataset;
  std::unordered_map<std::string, size_t> index_by_seed;
  for (const MutationRecord& r : records) {
    std::string key(reinterpret_cast<const char*>(r.seed_bytes.data()),
                    r.seed_bytes.size());
    auto [it, inserted] = index_by_seed.try_emplace(key, dataset.size());
    if (inserted) {
      InstructRecord sample;
      std::string instruction(instruction_template);
      if (size_t at = instruction.find("{program}"); at != std::string::npos) {
        instruction.replace(at, 9, r.program);
      }
      sample.instruction = std::move(instruction);
      if (r.seed_bytes.size() > byte_cap) {
        sample.input.assign(r.seed_bytes.begin(),
                            r.seed_bytes.begin() + byte_cap);
        sample.truncated = true;
      } else {
        sample.input = r.seed_bytes;
      }
      dataset.push_back(std::move(sample));
    }
    InstructRecord& sample = dataset[it->second];
    const auto pair = r.Pair();
    if (pair.second <= sample.input.size()) sample.pairs.push_back(pair);
  }
  // Truncation can leave a sample without any in-range pair; such samples
  // teach nothing and are dropped.
  std::vector<InstructRecord> out;
  out.reserve(dataset.size());
  for (InstructRecord& sample : dataset) {
    if (!sample.pairs.empty()) out.push_back(std::move(sample));
  }
  return out;
}

std::pair<std::vector<InstructRecord>, std::vector<InstructRecord>>
SplitDataset(const std::vector<InstructRecord>& dataset, double train_ratio,
             uint64_t seed) {
  if (!(train_ratio > 0.0 && train_ratio < 1.0)) {
    throw InvalidConfig("train ratio must be in (0, 1), got " +
                        std::to_string(train_ratio));
  }
  if (dataset.size() < 2) {
    throw TooFewSamples("need at least 2 samples to split, got " +
                        std::to_string(dataset.size()));
  }
  std::vector<size_t> order(dataset.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  rng.Shuffle(order);
  size_t train_n = static_cast<size_t>(
      std::floor(train_ratio * static_cast<double>(dataset.size())));
  if (train_n == 0) train_n = 1;
  if (train_n == dataset.size()) train_n = dataset.size() - 1;
  std::pair<std::vector<InstructRecord>, std::vector<InstructRecord>> out;
  for (size_t i = 0; i < order.size(); ++i) {
    (i < train_n ? out.first : out.second).push_back(dataset[order[i]]);
  }
  return out;
}

std::string ToJsonLines(std::span<const InstructRecord> records) {
  std::string out;
  for (const InstructRecord& r : records) {
    nlohmann::ordered_json j;
    j["instruction"] = r.instruction;
    j["input"] = ToHex(r.input);
    j["output"] = RenderPairs(r.pairs);
    if (r.truncated) j["truncated"] = true;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<InstructRecord> FromJsonLines(std::string_view text) {
  std::vector<InstructRecord> records;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("bad dataset line: ") + e.what());
    }
    if (!j.is_object() || !j.contains("instruction") || !j.contains("input") ||
        !j.contains("output")) {
      throw Error("dataset line missing instruction/input/output");
    }
    InstructRecord r;
    r.instruction = j["instruction"].get<std::string>();
    r.input = FromHex(j["input"].get<std::string>());
    r.pairs = ParsePairs(j["output"].get<std::string>());
    r.truncated = j.value("truncated", false);
    records.push_back(std::move(r));
  }
  return records;
}

std::string ToPromptText(std::span<const InstructRecord> records) {
  std::string out;
  for (size_t i = 0; i < records.size(); ++i) {
    if (i > 0) out += '\n';
    out += "Byte Input: " + ToHex(records[i].input) + "\n";
    out += "Mutation strategies: " + RenderPairs(records[i].pairs) + "\n";
  }
  return out;
}

std::vector<InstructRecord> FromPromptText(std::string_view text) {
  std::vector<InstructRecord> records;
  constexpr std::string_view kInputTag = "Byte Input:";
  constexpr std::string_view kPairsTag = "Mutation strategies:";
  size_t start = 0;
  InstructRecord current;
  bool have_input = false;
  auto flush = [&]() {
    if (have_input) {
      records.push_back(std::move(current));
      current = InstructRecord{};
      have_input = false;
    }
  };
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.rfind(kInputTag, 0) == 0) {
      flush();
      current.input = FromHex(line.substr(kInputTag.size()));
      have_input = true;
    } else if (line.rfind(kPairsTag, 0) == 0) {
      if (!have_input) throw Error("pair list before any byte input");
      current.pairs = ParsePairs(line.substr(kPairsTag.size()));
    } else if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      throw Error("unrecognized line in prompt text: '" + std::string(line) +
                  "'");
    }
    if (end == text.size()) break;
  }
  flush();
  return records;
}

}  // namespace mutafuzz

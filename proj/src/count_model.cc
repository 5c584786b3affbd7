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

#include <cstring>
#include <fstream>

#include "mutafuzz/error.h"
#include "mutafuzz/oracle.h"

namespace mutafuzz {

namespace {

constexpr char kModelMagic[4] = {'M', 'F', 'C', 'M'};
constexpr uint32_t kModelVersion = 1;

void PutU32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void PutU64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

uint32_t GetU32(const std::string& in, size_t& at) {
  if (at + 4 > in.size()) throw InvalidConfig("truncated model file");
  uint32_t v = 0;
  for (int i = 3; i >= 0; --i) {
    v = (v << 8) | static_cast<uint8_t>(in[at + static_cast<size_t>(i)]);
  }
  at += 4;
  return v;
}

uint64_t GetU64(const std::string& in, size_t& at) {
  if (at + 8 > in.size()) throw InvalidConfig("truncated model file");
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) {
    v = (v << 8) | static_cast<uint8_t>(in[at + static_cast<size_t>(i)]);
  }
  at += 8;
  return v;
}

int ByteAt(const Bytes& seed, size_t index, bool valid) {
  return valid ? seed[index] : CountModel::kOutOfBounds;
}

}  // namespace

void CountModel::Ingest(const Bytes& seed, size_t position, Strategy strategy) {
  if (seed.empty() || position >= seed.size()) {
    throw PositionOutOfRange("ingest position " + std::to_string(position) +
                             " on " + std::to_string(seed.size()) + " bytes");
  }
  const uint32_t key =
      ContextKey(ByteAt(seed, position - 1, position > 0), seed[position],
                 ByteAt(seed, position + 1, position + 1 < seed.size()));
  const auto s = static_cast<size_t>(static_cast<int>(strategy) - 1);
  context_counts_[key][s] += 1;
  bucket_counts_[s][static_cast<size_t>(PositionBucket(position, seed.size()))] += 1;
  strategy_totals_[s] += 1;
  total_ += 1;
}

double CountModel::ContextProb(uint32_t context_key, Strategy strategy,
                               double alpha) const {
  uint64_t count = 0;
  uint64_t context_total = 0;
  if (auto it = context_counts_.find(context_key); it != context_counts_.end()) {
    const auto& per_strategy = it->second;
    count = per_strategy[static_cast<size_t>(static_cast<int>(strategy) - 1)];
    for (uint64_t c : per_strategy) context_total += c;
  }
  return (static_cast<double>(count) + alpha) /
         (static_cast<double>(context_total) + alpha * kNumStrategies);
}

double CountModel::BucketProb(int bucket, Strategy strategy,
                              double alpha) const {
  const auto s = static_cast<size_t>(static_cast<int>(strategy) - 1);
  const uint64_t count = bucket_counts_[s][static_cast<size_t>(bucket)];
  return (static_cast<double>(count) + alpha) /
         (static_cast<double>(strategy_totals_[s]) + alpha * kPositionBuckets);
}

void CountModel::Save(const std::filesystem::path& path) const {
  std::string out;
  out.append(kModelMagic, sizeof(kModelMagic));
  PutU32(out, kModelVersion);
  PutU64(out, total_);
  for (uint64_t v : strategy_totals_) PutU64(out, v);
  for (const auto& row : bucket_counts_) {
    for (uint64_t v : row) PutU64(out, v);
  }
  PutU64(out, context_counts_.size());
  for (const auto& [key, counts] : context_counts_) {
    PutU32(out, key);
    for (uint64_t v : counts) PutU64(out, v);
  }
  std::ofstream f(path, std::ios::binary);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error("cannot write model file " + path.string());
}

CountModel CountModel::Load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidConfig("cannot open model file " + path.string());
  std::string in((std::istreambuf_iterator<char>(f)),
                 std::istreambuf_iterator<char>());
  if (in.size() < 8 || std::memcmp(in.data(), kModelMagic, 4) != 0) {
    throw InvalidConfig("not a model file: " + path.string());
  }
  size_t at = 4;
  if (GetU32(in, at) != kModelVersion) {
    throw InvalidConfig("unsupported model version in " + path.string());
  }
  CountModel model;
  model.total_ = GetU64(in, at);
  for (uint64_t& v : model.strategy_totals_) v = GetU64(in, at);
  for (auto& row : model.bucket_counts_) {
    for (uint64_t& v : row) v = GetU64(in, at);
  }
  const uint64_t contexts = GetU64(in, at);
  for (uint64_t i = 0; i < contexts; ++i) {
    const uint32_t key = GetU32(in, at);
    auto& counts = model.context_counts_[key];
    for (uint64_t& v : counts) v = GetU64(in, at);
  }
  if (at != in.size()) throw InvalidConfig("trailing bytes in model file");
  return model;
}

CountModel TrainCountModel(std::span<const MutationRecord> records) {
  CountModel model;
  for (const MutationRecord& r : records) {
    if (r.outcome == RecordedOutcome::kNothing) continue;
    model.Ingest(r.seed_bytes, r.detail.position, r.detail.strategy);
  }
  if (model.total() == 0) {
    throw NoRecords("no effective mutations to train on");
  }
  return model;
}

CountModel TrainCountModelFromDataset(std::span<const InstructRecord> dataset) {
  CountModel model;
  for (const InstructRecord& sample : dataset) {
    for (const auto& [strategy_id, position] : sample.pairs) {
      if (strategy_id < 1 || strategy_id > kNumStrategies) continue;
      if (position < 1 || position > sample.input.size()) continue;
      model.Ingest(sample.input, position - 1, StrategyFromId(strategy_id));
    }
  }
  if (model.total() == 0) {
    throw NoRecords("dataset contains no usable pairs");
  }
  return model;
}

}  // namespace mutafuzz

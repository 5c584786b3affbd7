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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mutafuzz/error.h"
#include "mutafuzz/oracle.h"

namespace mutafuzz {

namespace {

// Valid anchor positions for strategy `s` on `size` bytes.
size_t CellCount(Strategy s, size_t size) {
  const size_t width = StrategyWidthBytes(s);
  return size >= width ? size - width + 1 : 0;
}

}  // namespace

MutationPlan UniformOracle::Predict(const Bytes& input, Rng& rng) {
  if (input.empty()) throw EmptyInput("prediction on empty input");
  std::array<size_t, kNumStrategies> cells{};
  size_t total = 0;
  for (int s = 0; s < kNumStrategies; ++s) {
    cells[static_cast<size_t>(s)] = CellCount(AllStrategies()[static_cast<size_t>(s)], input.size());
    total += cells[static_cast<size_t>(s)];
  }
  MutationPlan plan;
  plan.pairs.reserve(static_cast<size_t>(config_.k_max));
  for (int i = 0; i < config_.k_max; ++i) {
    uint64_t r = rng.Below(total);
    for (int s = 0; s < kNumStrategies; ++s) {
      if (r < cells[static_cast<size_t>(s)]) {
        plan.pairs.push_back({s + 1, static_cast<uint32_t>(r) + 1});
        break;
      }
      r -= cells[static_cast<size_t>(s)];
    }
  }
  return plan;
}

std::vector<ScoredCell> ScoreCells(const CountModel& model, const Bytes& input,
                                   const OracleConfig& config) {
  if (input.empty()) throw EmptyInput("prediction on empty input");
  std::vector<ScoredCell> cells;
  for (Strategy s : AllStrategies()) {
    const size_t count = CellCount(s, input.size());
    for (size_t pos = 0; pos < count; ++pos) {
      const int prev = pos > 0 ? input[pos - 1] : CountModel::kOutOfBounds;
      const int next =
          pos + 1 < input.size() ? input[pos + 1] : CountModel::kOutOfBounds;
      const uint32_t key = CountModel::ContextKey(prev, input[pos], next);
      const double score =
          model.ContextProb(key, s, config.alpha) *
          model.BucketProb(CountModel::PositionBucket(pos, input.size()), s,
                           config.alpha);
      cells.push_back({static_cast<int>(s), static_cast<uint32_t>(pos) + 1,
                       score});
    }
  }
  double sum = 0;
  for (const ScoredCell& c : cells) sum += c.prob;
  for (ScoredCell& c : cells) c.prob /= sum;
  if (config.temperature != 1.0) {
    double tsum = 0;
    for (ScoredCell& c : cells) {
      c.prob = std::pow(c.prob, 1.0 / config.temperature);
      tsum += c.prob;
    }
    for (ScoredCell& c : cells) c.prob /= tsum;
  }
  return cells;
}

std::vector<size_t> NucleusIndices(std::span<const ScoredCell> cells,
                                   double top_p) {
  std::vector<size_t> order(cells.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return cells[a].prob > cells[b].prob;
  });
  std::vector<size_t> nucleus;
  double mass = 0;
  for (size_t index : order) {
    nucleus.push_back(index);
    mass += cells[index].prob;
    if (mass + 1e-12 >= top_p) break;
  }
  return nucleus;
}

std::vector<size_t> SampleWithoutReplacement(std::span<const ScoredCell> cells,
                                             std::vector<size_t> candidates,
                                             size_t k, Rng& rng) {
  std::vector<size_t> chosen;
  const size_t draws = std::min(k, candidates.size());
  chosen.reserve(draws);
  for (size_t d = 0; d < draws; ++d) {
    double total = 0;
    for (size_t index : candidates) total += cells[index].prob;
    size_t picked = candidates.size() - 1;
    if (total > 0) {
      double r = rng.Real01() * total;
      for (size_t i = 0; i < candidates.size(); ++i) {
        r -= cells[candidates[i]].prob;
        if (r < 0) {
          picked = i;
          break;
        }
      }
    }
    chosen.push_back(candidates[picked]);
    candidates.erase(candidates.begin() + static_cast<ptrdiff_t>(picked));
  }
  return chosen;
}

MutationPlan CountModelOracle::Predict(const Bytes& input, Rng& rng) {
  const std::vector<ScoredCell> cells = ScoreCells(model_, input, config_);
  const std::vector<size_t> nucleus = NucleusIndices(cells, config_.top_p);
  const std::vector<size_t> chosen = SampleWithoutReplacement(
      cells, nucleus, static_cast<size_t>(config_.k_max), rng);
  MutationPlan plan;
  plan.pairs.reserve(chosen.size());
  for (size_t index : chosen) {
    plan.pairs.push_back({cells[index].strategy_id, cells[index].position});
  }
  return plan;
}

}  // namespace mutafuzz

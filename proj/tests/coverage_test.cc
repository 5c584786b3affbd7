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

#include "gtest/gtest.h"
#include "mutafuzz/error.h"

namespace mutafuzz {
namespace {

TEST(BucketizeTest, PowerOfTwoBuckets) {
  EXPECT_EQ(BucketizeCount(0), 0);
  EXPECT_EQ(BucketizeCount(1), 1);
  EXPECT_EQ(BucketizeCount(2), 2);
  EXPECT_EQ(BucketizeCount(3), 4);
  EXPECT_EQ(BucketizeCount(4), 8);
  EXPECT_EQ(BucketizeCount(7), 8);
  EXPECT_EQ(BucketizeCount(8), 16);
  EXPECT_EQ(BucketizeCount(15), 16);
  EXPECT_EQ(BucketizeCount(16), 32);
  EXPECT_EQ(BucketizeCount(31), 32);
  EXPECT_EQ(BucketizeCount(32), 64);
  EXPECT_EQ(BucketizeCount(127), 64);
  EXPECT_EQ(BucketizeCount(128), 128);
  EXPECT_EQ(BucketizeCount(255), 128);
}

TEST(CoverageMapTest, HitSaturates) {
  CoverageMap map(16);
  for (int i = 0; i < 300; ++i) map.Hit(3);
  EXPECT_EQ(map[3], 0xFF);
  EXPECT_EQ(map.CountNonZero(), 1u);
}

TEST(CoverageMapTest, DefaultSixtyFourKSlots) {
  CoverageMap map;
  EXPECT_EQ(map.size(), 65536u);
  EXPECT_EQ(map.CountNonZero(), 0u);
}

TEST(MergeCoverageTest, FirstHitIsNew) {
  CoverageMap global;
  CoverageMap run;
  run.Hit(7);
  EXPECT_TRUE(MergeCoverage(global, run));
  EXPECT_EQ(global[7], 1);  // bucket for raw count 1
}

TEST(MergeCoverageTest, MergeIsIdempotent) {
  CoverageMap global;
  CoverageMap run;
  run.Hit(7);
  EXPECT_TRUE(MergeCoverage(global, run));
  EXPECT_FALSE(MergeCoverage(global, run));
}

TEST(MergeCoverageTest, SameBucketIsNotNew) {
  // Raw counts 6 and 5 both land in the 4..7 bucket.
  CoverageMap global;
  CoverageMap first;
  for (int i = 0; i < 6; ++i) first.Hit(7);
  EXPECT_TRUE(MergeCoverage(global, first));
  CoverageMap second;
  for (int i = 0; i < 5; ++i) second.Hit(7);
  EXPECT_FALSE(MergeCoverage(global, second));
}

TEST(MergeCoverageTest, NewBucketOnSameSlotIsNew) {
  CoverageMap global;
  CoverageMap once;
  once.Hit(9);
  EXPECT_TRUE(MergeCoverage(global, once));
  CoverageMap thrice;
  for (int i = 0; i < 3; ++i) thrice.Hit(9);
  EXPECT_TRUE(MergeCoverage(global, thrice));
  EXPECT_EQ(global[9], 1 | 4);  // union of both buckets
}

TEST(MergeCoverageTest, GlobalIsBucketUnion) {
  CoverageMap global;
  CoverageMap run;
  run.Set(0, 1);
  run.Set(1, 3);
  run.Set(2, 200);
  EXPECT_TRUE(MergeCoverage(global, run));
  EXPECT_EQ(global[0], 1);
  EXPECT_EQ(global[1], 4);
  EXPECT_EQ(global[2], 128);
}

TEST(MergeCoverageTest, SizeMismatchRejected) {
  CoverageMap global(16);
  CoverageMap run(32);
  EXPECT_THROW(MergeCoverage(global, run), SizeMismatch);
}

TEST(FingerprintTest, BucketizedEquivalenceAndDifference) {
  CoverageMap a(64);
  CoverageMap b(64);
  // 5 and 6 share a bucket: same fingerprint.
  for (int i = 0; i < 5; ++i) a.Hit(3);
  for (int i = 0; i < 6; ++i) b.Hit(3);
  EXPECT_EQ(a.Fingerprint(), b.Fingerprint());
  b.Hit(4);
  EXPECT_NE(a.Fingerprint(), b.Fingerprint());
}

}  // namespace
}  // namespace mutafuzz

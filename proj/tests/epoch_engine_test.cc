// Copyright 2026 The mnlbandit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mnlbandit/epoch_engine.h"

#include <cmath>

#include "gtest/gtest.h"

namespace mnlbandit {
namespace {

ItemVector<double> Ones(int n) { return ItemVector<double>(n, 1.0); }

TEST(RunEpochTest, NegligibleAttractionEndsAfterOneStep) {
  const MnlInstance inst({1e-300}, {1.0});
  Rng rng(1);
  for (int e = 1; e <= 100; ++e) {
    const EpochRun run = RunEpoch(inst, {1}, Ones(1), e, 1, kUnboundedHorizon, rng);
    EXPECT_EQ(run.record.length, 1);
    EXPECT_EQ(run.record.counts[1], 0);
    EXPECT_FALSE(run.record.truncated);
  }
}

TEST(RunEpochTest, CountsAccountForEveryPurchaseStep) {
  const MnlInstance inst({0.4, 0.8, 0.3, 0.6}, {1, 1, 1, 1});
  const Assortment s{1, 2, 4};
  Rng rng(2);
  for (int e = 1; e <= 2000; ++e) {
    const EpochRun run = RunEpoch(inst, s, Ones(4), e, 1, kUnboundedHorizon, rng);
    const EpochRecord& rec = run.record;
    EXPECT_EQ(rec.total_purchases(), rec.length - 1);
    EXPECT_EQ(rec.counts[3], 0);
    EXPECT_EQ(static_cast<int64_t>(run.steps.size()), rec.length);
    EXPECT_TRUE(run.steps.back().IsNoPurchase());
    EXPECT_EQ(rec.epoch_index, e);
  }
}

TEST(RunEpochTest, HorizonTruncatesAfterPurchase) {
  const MnlInstance inst({1e9}, {1.0});
  Rng rng(3);
  const EpochRun run = RunEpoch(inst, {1}, Ones(1), 1, 7, 10, rng);
  EXPECT_TRUE(run.record.truncated);
  EXPECT_EQ(run.record.length, 4);
  EXPECT_EQ(run.record.total_purchases(), run.record.length);
  EXPECT_THROW(RunEpoch(inst, {1}, Ones(1), 1, 11, 10, rng), std::domain_error);
  EXPECT_THROW(RunEpoch(inst, Assortment{}, Ones(1), 1, 1, 10, rng),
               std::domain_error);
}

TEST(RunEpochTest, BackToBackEpochsFillHorizonExactly) {
  const MnlInstance inst({0.7, 0.9}, {1, 1});
  Rng rng(4);
  constexpr int64_t kHorizon = 5000;
  int64_t t = 1;
  int64_t e = 1;
  bool last_truncated = false;
  while (t <= kHorizon) {
    const EpochRun run = RunEpoch(inst, {1, 2}, Ones(2), e++, t, kHorizon, rng);
    EXPECT_FALSE(last_truncated);
    last_truncated = run.record.truncated;
    t += run.record.length;
  }
  EXPECT_EQ(t, kHorizon + 1);
}

TEST(EpochCountDistributionTest, UnitMassHasGeometricLengthAndCounts) {
  const MnlInstance inst({1.0}, {1.0});
  Rng rng(5);
  const EpochMoments m = EpochCountDistribution(inst, {1}, 20000, rng);
  // Length ~ Geom(1/2): mean 2.
  EXPECT_NEAR(m.mean_length, 2.0, 3 * m.se_mean_length);
  EXPECT_NEAR(m.mean_count[1], 1.0, 3 * m.se_mean_count[1]);
  // Second moment v + 2 v^2.
  EXPECT_NEAR(m.mean_sq_count[1], 3.0, 3 * m.se_mean_sq_count[1]);
  for (int c = 0; c < 8; ++c) {
    const double p = std::pow(0.5, c + 1);
    const double se = std::sqrt(p * (1 - p) / 20000.0);
    EXPECT_NEAR(m.count_histogram[0][c], p, 3 * se) << "count " << c;
  }
}

TEST(EpochCountDistributionTest, PerItemMomentsMatchAttractions) {
  const MnlInstance inst({0.5, 0.2, 0.9}, {1, 1, 1});
  Rng rng(6);
  const EpochMoments m = EpochCountDistribution(inst, {1, 2, 3}, 40000, rng);
  EXPECT_NEAR(m.mean_length, 1.0 + 0.5 + 0.2 + 0.9, 3 * m.se_mean_length);
  for (int i = 1; i <= 3; ++i) {
    const double v = inst.v(i);
    EXPECT_NEAR(m.mean_count[i], v, 3 * m.se_mean_count[i]);
    EXPECT_NEAR(m.mean_sq_count[i], v + 2 * v * v, 3 * m.se_mean_sq_count[i]);
  }
}

TEST(EpochCountDistributionTest, RequiresEnoughEpochs) {
  const MnlInstance inst({1.0}, {1.0});
  Rng rng(7);
  EXPECT_THROW(EpochCountDistribution(inst, {1}, 999, rng), std::invalid_argument);
}

}  // namespace
}  // namespace mnlbandit

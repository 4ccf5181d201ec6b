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

#include "mnlbandit/baselines.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"

namespace mnlbandit {
namespace {

TEST(EeSelectTest, InitialIndicesPickBestUnitWeightSet) {
  const int n = 5;
  const FeasibleFamily family(n, 3);
  const ItemVector<double> rev(std::vector<double>{0.4, 1.5, 0.9, 1.2, 0.3});
  const PolicyState state(n);
  // With all weights 1 a set scores sum(r) / (1 + |S|).
  double best = -1.0;
  Assortment want;
  for (const Assortment& s : family.Enumerate()) {
    double num = 0.0;
    for (const int i : s) num += rev[i];
    const double score = num / (1.0 + s.size());
    if (score > best) {
      best = score;
      want = s;
    }
  }
  EXPECT_EQ(EeSelect(state, family, rev), want);
}

TEST(EeSelectTest, MatchesExperimentUcbWithComplementDisabled) {
  const MnlInstance inst({0.5, 0.3, 0.8, 0.6, 0.2, 0.9},
                         {1.0, 1.4, 0.7, 0.9, 1.3, 0.6});
  const FeasibleFamily family(6, 3);
  PolicyConfig cfg;
  cfg.complement_sampling = false;
  PolicyState ee(6), ucb(6);
  Rng cust_a(1), cust_b(1), sel(2);
  for (int64_t e = 1; e <= 3000; ++e) {
    const Assortment a = EeSelect(ee, family, inst.revenues());
    const OfferDecision d = SelectAssortment(ucb, cfg, family, inst.revenues(), sel);
    ASSERT_EQ(a, d.offered) << "epoch " << e;
    const EpochRun ra =
        RunEpoch(inst, a, d.selection_probs, e, 1, kUnboundedHorizon, cust_a);
    const EpochRun rb =
        RunEpoch(inst, d.offered, d.selection_probs, e, 1, kUnboundedHorizon, cust_b);
    ObserveEpoch(ee, cfg, ra.record);
    ObserveEpoch(ucb, cfg, rb.record);
  }
}

TEST(Exp3EgTest, ScheduleFormulas) {
  const FeasibleFamily family(10, 5);
  const Exp3Eg bandit(family, 1.5, {0.5, 0.05});
  EXPECT_EQ(bandit.n_arms(), 637);
  EXPECT_DOUBLE_EQ(bandit.ExplorationMix(1), 1.0);
  EXPECT_NEAR(bandit.ExplorationMix(10000), 0.05 * 637 / 100.0, 1e-12);
  EXPECT_NEAR(bandit.LearningRate(4), std::sqrt(std::log(637.0) / (637.0 * 4)),
              1e-15);
  EXPECT_THROW(Exp3Eg(family, 0.0), std::invalid_argument);
}

TEST(Exp3EgTest, FullExplorationIsUniform) {
  const FeasibleFamily family(4, 2);
  const Exp3Eg bandit(family, 1.0);
  const std::vector<double> p = bandit.Distribution();
  for (const double x : p) EXPECT_NEAR(x, 1.0 / family.size(), 1e-15);
}

TEST(Exp3EgTest, ZeroRewardsKeepWeightsUniform) {
  const FeasibleFamily family(4, 2);
  Exp3Eg bandit(family, 1.0, {0.5, 0.001});
  Rng rng(3);
  for (int t = 0; t < 500; ++t) bandit.Update(bandit.Select(rng), 0.0);
  for (const double w : bandit.log_weights()) EXPECT_EQ(w, 0.0);
  for (const double x : bandit.Distribution()) {
    EXPECT_NEAR(x, 1.0 / family.size(), 1e-15);
  }
  EXPECT_EQ(bandit.step(), 501);
}

TEST(Exp3EgTest, DistributionStaysNormalizedAndFloored) {
  const MnlInstance inst({0.5, 0.3, 0.8, 0.6, 0.2}, {1.0, 1.4, 0.7, 0.9, 1.3});
  const FeasibleFamily family(5, 3);
  Exp3Eg bandit(family, inst.max_revenue(), {0.5, 0.05});
  Rng sel(4), cust(5);
  for (int64_t t = 1; t <= 20000; ++t) {
    const std::vector<double> p = bandit.Distribution();
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
    const double floor = bandit.ExplorationMix(t) / bandit.n_arms();
    for (const double x : p) EXPECT_GE(x, floor * (1 - 1e-12));
    const int arm = bandit.Select(sel);
    const ChoiceOutcome c = SampleChoice(inst, bandit.arm(arm), cust);
    bandit.Update(arm, c.IsNoPurchase() ? 0.0 : inst.r(c.chosen));
  }
  for (const double w : bandit.log_weights()) {
    EXPECT_TRUE(std::isfinite(w));
    EXPECT_LE(w, 0.0);
  }
}

TEST(Exp3EgTest, ImportanceWeightedRewardIsUnbiased) {
  // Holding the distribution fixed, E[x_hat for arm a] = R(a) / scale.
  const MnlInstance inst({0.5, 0.9, 0.3}, {1.2, 0.6, 1.5});
  const FeasibleFamily family(3, 2);
  Exp3Eg bandit(family, inst.max_revenue(), {0.0, 0.4});
  Rng warm(6);
  for (int t = 0; t < 50; ++t) bandit.Update(bandit.Select(warm), 1.0);
  Rng sel(7), cust(8);
  constexpr int kDraws = 200000;
  const int target = 2;
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < kDraws; ++k) {
    const int arm = bandit.Select(sel);
    double x = 0.0;
    if (arm == target) {
      const ChoiceOutcome c = SampleChoice(inst, bandit.arm(arm), cust);
      x = bandit.ImportanceWeightedReward(
          arm, c.IsNoPurchase() ? 0.0 : inst.r(c.chosen));
    }
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / kDraws;
  const double se = std::sqrt((sum_sq / kDraws - mean * mean) / kDraws);
  EXPECT_NEAR(mean, ExpectedRevenue(inst, bandit.arm(target)) / inst.max_revenue(),
              3 * se);
}

TEST(Exp3EgTest, MeanRewardTracksPulls) {
  const FeasibleFamily family(2, 1);
  Exp3Eg bandit(family, 1.0);
  EXPECT_EQ(bandit.MeanReward(0), 0.0);
  Rng rng(1);
  bandit.Select(rng);
  bandit.Update(0, 1.0);
  bandit.Update(0, 0.0);
  EXPECT_EQ(bandit.Pulls(0), 2);
  EXPECT_DOUBLE_EQ(bandit.MeanReward(0), 0.5);
}

}  // namespace
}  // namespace mnlbandit

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

#include "mnlbandit/mnl_model.h"

#include <cmath>
#include <filesystem>
#include <vector>

#include "gtest/gtest.h"

namespace mnlbandit {
namespace {

MnlInstance RandomTestInstance(int n, Rng& rng) {
  return RandomInstance(n, {0.05, 2.0}, {0.1, 3.0}, rng);
}

Assortment RandomSubset(int n, Rng& rng) {
  std::vector<int> items;
  for (int i = 1; i <= n; ++i) {
    if (rng.Uniform() < 0.5) items.push_back(i);
  }
  if (items.empty()) items.push_back(1 + static_cast<int>(rng.Uniform() * n));
  return Assortment(items);
}

TEST(AssortmentTest, SortsAndRejectsDuplicates) {
  const Assortment s{3, 1, 2};
  EXPECT_EQ(s.items(), (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(s.ToString(), "{1,2,3}");
  EXPECT_THROW(Assortment({1, 1}), std::invalid_argument);
  EXPECT_THROW(Assortment({0, 2}), std::invalid_argument);
  EXPECT_THROW(s.CheckWithin(2), std::domain_error);
  EXPECT_EQ(Complement(Assortment{2}, 4), (Assortment{1, 3, 4}));
}

TEST(AssortmentTest, OrderIsCardinalityThenLexicographic) {
  EXPECT_LT((Assortment{5}), (Assortment{1, 2}));
  EXPECT_LT((Assortment{1, 3}), (Assortment{2, 3}));
  EXPECT_FALSE((Assortment{1, 2}) < (Assortment{1, 2}));
}

TEST(MnlInstanceTest, RejectsInvalidParameters) {
  EXPECT_THROW(MnlInstance({}, {}), std::invalid_argument);
  EXPECT_THROW(MnlInstance({1.0}, {1.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(MnlInstance({0.0}, {1.0}), std::invalid_argument);
  EXPECT_THROW(MnlInstance({1.0}, {-1.0}), std::invalid_argument);
  const MnlInstance ok({0.5, 2.0}, {1.0, 1.0});
  EXPECT_EQ(ok.v(kNoPurchase), 1.0);
  EXPECT_FALSE(ok.AttractionsBoundedBy(1.0));
  EXPECT_TRUE(ok.AttractionsBoundedBy(2.0));
}

TEST(ChoiceProbabilityTest, SingleItemSymmetric) {
  const MnlInstance inst({1.0}, {1.0});
  EXPECT_DOUBLE_EQ(ChoiceProbability(inst, {1}, 1), 0.5);
  EXPECT_DOUBLE_EQ(ChoiceProbability(inst, {1}, kNoPurchase), 0.5);
}

TEST(ChoiceProbabilityTest, TwoEqualItems) {
  const MnlInstance inst({1.0, 1.0}, {1.0, 0.5});
  EXPECT_NEAR(ChoiceProbability(inst, {1, 2}, 2), 1.0 / 3.0, 1e-15);
}

TEST(ChoiceProbabilityTest, ItemOutsideAssortmentIsZero) {
  const MnlInstance inst({1.0, 1.0}, {1.0, 0.5});
  EXPECT_EQ(ChoiceProbability(inst, {1}, 2), 0.0);
  EXPECT_THROW(ChoiceProbability(inst, {1}, 3), std::domain_error);
  EXPECT_THROW(ChoiceProbability(inst, {1, 3}, 1), std::domain_error);
}

TEST(ChoiceProbabilityTest, NormalizesOverOfferPlusNoPurchase) {
  Rng rng(11);
  for (int rep = 0; rep < 500; ++rep) {
    const int n = 1 + static_cast<int>(rng.Uniform() * 12);
    const MnlInstance inst = RandomTestInstance(n, rng);
    const Assortment s = RandomSubset(n, rng);
    double total = ChoiceProbability(inst, s, kNoPurchase);
    for (const int i : s) total += ChoiceProbability(inst, s, i);
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
}

TEST(ChoiceProbabilityTest, AddingAnItemNeverRaisesIncumbents) {
  Rng rng(12);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 2 + static_cast<int>(rng.Uniform() * 8);
    const MnlInstance inst = RandomTestInstance(n, rng);
    const Assortment s = RandomSubset(n, rng);
    const Assortment rest = Complement(s, n);
    if (rest.empty()) continue;
    std::vector<int> bigger = s.items();
    bigger.push_back(rest.items().front());
    const Assortment s2(bigger);
    for (const int i : s) {
      EXPECT_LE(ChoiceProbability(inst, s2, i), ChoiceProbability(inst, s, i));
    }
    EXPECT_LE(ChoiceProbability(inst, s2, kNoPurchase),
              ChoiceProbability(inst, s, kNoPurchase));
  }
}

TEST(ExpectedRevenueTest, HandEvaluatedValues) {
  const MnlInstance inst({1.0, 1.0}, {1.0, 0.5});
  EXPECT_EQ(ExpectedRevenue(inst, Assortment{}), 0.0);
  EXPECT_DOUBLE_EQ(ExpectedRevenue(inst, {1, 2}), 0.5);
  EXPECT_DOUBLE_EQ(ExpectedRevenue(inst, {2}), 0.25);
  EXPECT_THROW(ExpectedRevenue(inst, {3}), std::domain_error);
}

TEST(ExpectedRevenueTest, AgreesWithProbabilityWeightedSum) {
  Rng rng(13);
  for (int rep = 0; rep < 500; ++rep) {
    const int n = 1 + static_cast<int>(rng.Uniform() * 12);
    const MnlInstance inst = RandomTestInstance(n, rng);
    const Assortment s = RandomSubset(n, rng);
    double via_probs = 0.0;
    for (const int i : s) via_probs += inst.r(i) * ChoiceProbability(inst, s, i);
    EXPECT_NEAR(ExpectedRevenue(inst, s), via_probs, 1e-12);
    EXPECT_GE(ExpectedRevenue(inst, s), 0.0);
    EXPECT_LE(ExpectedRevenue(inst, s), inst.max_revenue());
  }
}

TEST(SampleChoiceTest, HugeAttractionAlmostAlwaysBuys) {
  const MnlInstance inst({1e9}, {1.0});
  Rng rng(1);
  int bought = 0;
  for (int k = 0; k < 10000; ++k) bought += SampleChoice(inst, {1}, rng).chosen == 1;
  EXPECT_GE(bought, 9990);
}

TEST(SampleChoiceTest, FrequenciesMatchProbabilitiesWithinThreeSigma) {
  const MnlInstance single({1.0}, {1.0});
  Rng rng(2);
  constexpr int kSamples = 100000;
  int bought = 0;
  for (int k = 0; k < kSamples; ++k) bought += SampleChoice(single, {1}, rng).chosen;
  const double sigma = std::sqrt(0.25 / kSamples);
  EXPECT_NEAR(static_cast<double>(bought) / kSamples, 0.5, 3 * sigma);

  const MnlInstance inst({0.2, 0.9, 0.5, 1.0}, {1, 1, 1, 1});
  const Assortment s{1, 2, 4};
  std::vector<int> hits(5, 0);
  for (int k = 0; k < kSamples; ++k) ++hits[SampleChoice(inst, s, rng).chosen];
  EXPECT_EQ(hits[3], 0);
  for (const int i : {0, 1, 2, 4}) {
    const double p = ChoiceProbability(inst, s, i);
    EXPECT_NEAR(static_cast<double>(hits[i]) / kSamples, p,
                3 * std::sqrt(p * (1 - p) / kSamples))
        << "item " << i;
  }
}

TEST(SampleChoiceTest, FixedSeedReplaysAndUsesOneDrawPerCall) {
  const MnlInstance inst({0.3, 0.7, 0.4}, {1, 1, 1});
  Rng a(99), b(99), draws(99);
  for (int k = 0; k < 1000; ++k) {
    EXPECT_EQ(SampleChoice(inst, {1, 2, 3}, a), SampleChoice(inst, {1, 2, 3}, b));
    draws.Uniform();
  }
  EXPECT_EQ(a.NextU64(), draws.NextU64());
}

TEST(SampleChoiceTest, EmptyAssortmentIsRejected) {
  const MnlInstance inst({0.3}, {1});
  Rng rng(1);
  EXPECT_THROW(SampleChoice(inst, Assortment{}, rng), std::domain_error);
}

TEST(RandomInstanceTest, ExperimentRangesSatisfyNoPurchaseDominance) {
  Rng rng(5);
  const MnlInstance inst = RandomInstance(10, {0.1, 1.0}, {0.5, 1.5}, rng);
  EXPECT_EQ(inst.n_items(), 10);
  EXPECT_TRUE(inst.AttractionsBoundedBy(1.0));
  for (int i = 1; i <= 10; ++i) {
    EXPECT_GE(inst.v(i), 0.1);
    EXPECT_GE(inst.r(i), 0.5);
    EXPECT_LE(inst.r(i), 1.5);
  }
}

TEST(RandomInstanceTest, DegenerateRangesArePointMasses) {
  Rng rng(5);
  const MnlInstance inst = RandomInstance(4, {0.3, 0.3}, {2.0, 2.0}, rng);
  for (int i = 1; i <= 4; ++i) {
    EXPECT_EQ(inst.v(i), 0.3);
    EXPECT_EQ(inst.r(i), 2.0);
  }
}

TEST(RandomInstanceTest, SeedDeterminesInstanceAndDrawOrder) {
  Rng a(42), b(42), raw(42);
  const MnlInstance x = RandomInstance(3, {0.1, 1.0}, {0.5, 1.5}, a);
  EXPECT_EQ(x, RandomInstance(3, {0.1, 1.0}, {0.5, 1.5}, b));
  // All v first, then all r.
  for (int i = 1; i <= 3; ++i) EXPECT_EQ(x.v(i), raw.UniformIn(0.1, 1.0));
  for (int i = 1; i <= 3; ++i) EXPECT_EQ(x.r(i), raw.UniformIn(0.5, 1.5));
}

TEST(RandomInstanceTest, NonpositiveLowerBoundIsDomainError) {
  Rng rng(1);
  EXPECT_THROW(RandomInstance(3, {0.0, 1.0}, {0.5, 1.5}, rng), std::domain_error);
  EXPECT_THROW(RandomInstance(3, {0.1, 1.0}, {-1.0, 1.5}, rng), std::domain_error);
  EXPECT_THROW(RandomInstance(0, {0.1, 1.0}, {0.5, 1.5}, rng), std::domain_error);
}

TEST(InstanceJsonTest, RoundTripsThroughFile) {
  Rng rng(8);
  const MnlInstance inst = RandomInstance(6, {0.1, 1.0}, {0.5, 1.5}, rng);
  const auto path = std::filesystem::temp_directory_path() / "mnl_instance_test.json";
  SaveInstance(inst, path);
  EXPECT_EQ(LoadInstance(path), inst);
  std::filesystem::remove(path);
}

TEST(InstanceJsonTest, RejectsUnknownKeysAndSizeMismatch) {
  using nlohmann::json;
  EXPECT_THROW(InstanceFromJson(json{{"n_items", 1}, {"v", {0.5}}, {"r", {1.0}},
                                     {"extra", 1}}),
               std::invalid_argument);
  EXPECT_THROW(InstanceFromJson(json{{"n_items", 2}, {"v", {0.5}}, {"r", {1.0}}}),
               std::invalid_argument);
  const MnlInstance inst =
      InstanceFromJson(json{{"n_items", 2}, {"v", {0.5, 0.25}}, {"r", {1.0, 2.0}}});
  EXPECT_EQ(inst.v(2), 0.25);
  EXPECT_EQ(inst.r(2), 2.0);
}

}  // namespace
}  // namespace mnlbandit

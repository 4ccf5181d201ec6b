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

#include "mnlbandit/feasible_family.h"

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace mnlbandit {
namespace {

// Brute force over bitmasks, scoring each subset from scratch. Ties go to
// the smaller set, then to the lexicographically smaller item list.
ScoredAssortment BruteForceArgmax(int n, int k, const std::vector<double>& w,
                                  const std::vector<double>& r) {
  ScoredAssortment best;
  bool have = false;
  for (uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (std::popcount(mask) > k) continue;
    std::vector<int> items;
    double num = 0.0, den = 1.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        items.push_back(i + 1);
        num += r[i] * w[i];
        den += w[i];
      }
    }
    const double score = num / den;
    const Assortment s(items);
    if (!have || score > best.score || (score == best.score && s < best.set)) {
      best = {s, score};
      have = true;
    }
  }
  return best;
}

int64_t Binomial(int n, int k) {
  int64_t c = 1;
  for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
  return c;
}

TEST(FeasibleFamilyTest, CountsMatchBinomialSums) {
  EXPECT_EQ(FeasibleFamily(10, 5).size(), 637);
  EXPECT_EQ(FeasibleFamily(2, 2).size(), 3);
  EXPECT_EQ(FeasibleFamily(3, 1).size(), 3);
  EXPECT_EQ(FeasibleFamily(3, 1, true).size(), 4);
  for (int n = 1; n <= 12; ++n) {
    for (int k = 0; k <= n + 1; ++k) {
      int64_t expected = 0;
      for (int j = 1; j <= std::min(k, n); ++j) expected += Binomial(n, j);
      EXPECT_EQ(FeasibleFamily::CountSubsets(n, k, false), expected);
      EXPECT_EQ(FeasibleFamily::CountSubsets(n, k, true), expected + 1);
    }
  }
}

TEST(FeasibleFamilyTest, SmallFamiliesEnumerateInOrder) {
  const FeasibleFamily two(2, 2);
  EXPECT_EQ(two.Enumerate(),
            (std::vector<Assortment>{{1}, {2}, {1, 2}}));
  const FeasibleFamily singles(3, 1);
  EXPECT_EQ(singles.Enumerate(), (std::vector<Assortment>{{1}, {2}, {3}}));
  const FeasibleFamily big(7, 4);
  for (int j = 1; j < big.size(); ++j) EXPECT_LT(big.at(j - 1), big.at(j));
}

TEST(FeasibleFamilyTest, EnumerationCapRaisesWithCount) {
  try {
    FeasibleFamily(30, 15);
    FAIL() << "expected length_error";
  } catch (const std::length_error& e) {
    const std::string expected =
        std::to_string(FeasibleFamily::CountSubsets(30, 15, false));
    EXPECT_NE(std::string(e.what()).find(expected), std::string::npos);
  }
  EXPECT_THROW(FeasibleFamily(10, 5, false, 100), std::length_error);
}

TEST(FeasibleFamilyTest, ContainsMatchesCardinalityRule) {
  const int n = 6, k = 3;
  const FeasibleFamily family(n, k);
  int contained = 0;
  for (uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> items;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) items.push_back(i + 1);
    }
    const Assortment s(items);
    const bool expected = !s.empty() && s.size() <= k;
    EXPECT_EQ(family.Contains(s), expected) << s.ToString();
    contained += expected;
  }
  EXPECT_EQ(contained, family.size());
  EXPECT_FALSE(family.Contains({7}));
}

TEST(ArgmaxRevenueTest, HandExamples) {
  const FeasibleFamily two(2, 2);
  const std::vector<double> w{1.0, 1.0};
  const ScoredAssortment a = two.ArgmaxRevenue(w, std::vector<double>{1.0, 0.5});
  EXPECT_EQ(a.set, (Assortment{1}));
  EXPECT_DOUBLE_EQ(a.score, 0.5);

  const ScoredAssortment z = two.ArgmaxRevenue(w, std::vector<double>{0.0, 0.0});
  EXPECT_EQ(z.set, (Assortment{1}));
  EXPECT_EQ(z.score, 0.0);

  const FeasibleFamily one(1, 1);
  const ScoredAssortment s =
      one.ArgmaxRevenue(std::vector<double>{3.0}, std::vector<double>{2.0});
  EXPECT_EQ(s.set, (Assortment{1}));
  EXPECT_DOUBLE_EQ(s.score, 1.5);
}

TEST(ArgmaxRevenueTest, EmptyFamilyAndBadLengthsAreErrors) {
  const FeasibleFamily empty(3, 0);
  const std::vector<double> w{1, 1, 1};
  EXPECT_THROW(empty.ArgmaxRevenue(w, w), std::domain_error);
  const FeasibleFamily fam(3, 2);
  EXPECT_THROW(fam.ArgmaxRevenue(std::vector<double>{1, 1}, w),
               std::invalid_argument);
}

TEST(ArgmaxRevenueTest, MatchesBruteForceOnRandomInstances) {
  Rng rng(31);
  for (int rep = 0; rep < 400; ++rep) {
    const int n = 1 + static_cast<int>(rng.Uniform() * 6);
    const int k = 1 + static_cast<int>(rng.Uniform() * n);
    std::vector<double> w(n), r(n);
    for (double& x : w) x = rng.UniformIn(0.01, 3.0);
    for (double& x : r) x = rng.UniformIn(0.0, 2.0);
    const FeasibleFamily family(n, k);
    const ScoredAssortment got = family.ArgmaxRevenue(w, r);
    const ScoredAssortment want = BruteForceArgmax(n, k, w, r);
    EXPECT_NEAR(got.score, want.score, 1e-12);
    EXPECT_EQ(got.set, want.set) << "n=" << n << " k=" << k;
  }
}

TEST(ArgmaxRevenueTest, ExactTiesBreakBySizeThenLexicographically) {
  // Dyadic inputs keep sums exact so equal-valued sets score identically.
  Rng rng(32);
  for (int rep = 0; rep < 400; ++rep) {
    const int n = 1 + static_cast<int>(rng.Uniform() * 6);
    const int k = 1 + static_cast<int>(rng.Uniform() * n);
    std::vector<double> w(n), r(n);
    for (double& x : w) x = 0.5 * (1 + static_cast<int>(rng.Uniform() * 3));
    for (double& x : r) x = 0.5 * static_cast<int>(rng.Uniform() * 3);
    const FeasibleFamily family(n, k);
    EXPECT_EQ(family.ArgmaxRevenue(w, r).set, BruteForceArgmax(n, k, w, r).set);
  }
}

TEST(ArgmaxRevenueTest, ScoresAgreeWithPlugInRevenue) {
  const FeasibleFamily family(5, 3);
  const std::vector<double> w{0.3, 0.9, 0.2, 0.5, 1.1};
  const std::vector<double> r{1.2, 0.7, 1.4, 0.9, 0.6};
  const std::vector<double> scores = family.Scores(w, r);
  ASSERT_EQ(static_cast<int>(scores.size()), family.size());
  for (int j = 0; j < family.size(); ++j) {
    EXPECT_NEAR(scores[j], PlugInRevenue(w, r, family.at(j)), 1e-15);
  }
}

}  // namespace
}  // namespace mnlbandit

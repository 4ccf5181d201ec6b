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

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mnlbandit {

int64_t FeasibleFamily::CountSubsets(int n_items, int max_size,
                                     bool include_empty) {
  constexpr int64_t kMax = std::numeric_limits<int64_t>::max();
  int64_t total = include_empty ? 1 : 0;
  int64_t binom = 1;  // C(n, 0)
  for (int k = 1; k <= std::min(max_size, n_items); ++k) {
    // C(n, k) = C(n, k-1) * (n-k+1) / k, exact in integers.
    const int64_t num = n_items - k + 1;
    if (binom > kMax / num) return kMax;
    binom = binom * num / k;
    if (total > kMax - binom) return kMax;
    total += binom;
  }
  return total;
}

FeasibleFamily::FeasibleFamily(int n_items, int max_size, bool include_empty,
                               int64_t enumeration_cap)
    : n_items_(n_items),
      max_size_(std::min(max_size, n_items)),
      include_empty_(include_empty) {
  if (n_items < 1) throw std::domain_error("family needs at least one item");
  if (max_size < 0) throw std::domain_error("max_size must be nonnegative");
  const int64_t count = CountSubsets(n_items, max_size_, include_empty);
  if (count > enumeration_cap) {
    throw std::length_error("feasible family has " + std::to_string(count) +
                            " assortments, above the enumeration cap of " +
                            std::to_string(enumeration_cap));
  }
  sets_.reserve(static_cast<std::size_t>(count));
  if (include_empty) sets_.emplace_back();
  std::vector<int> combo;
  for (int k = 1; k <= max_size_; ++k) {
    combo.resize(static_cast<std::size_t>(k));
    std::iota(combo.begin(), combo.end(), 1);
    while (true) {
      sets_.emplace_back(combo);
      // Advance to the next k-combination in lexicographic order.
      int pos = k - 1;
      while (pos >= 0 && combo[pos] == n_items - k + pos + 1) --pos;
      if (pos < 0) break;
      ++combo[pos];
      for (int q = pos + 1; q < k; ++q) combo[q] = combo[q - 1] + 1;
    }
  }
  offsets_.reserve(sets_.size() + 1);
  offsets_.push_back(0);
  for (const Assortment& s : sets_) {
    for (const int i : s) flat_items_.push_back(i - 1);
    offsets_.push_back(static_cast<int>(flat_items_.size()));
  }
}

bool FeasibleFamily::Contains(const Assortment& s) const {
  if (s.empty()) return include_empty_;
  return s.max_item() <= n_items_ && s.size() <= max_size_;
}

std::vector<double> FeasibleFamily::Scores(
    std::span<const double> weights, std::span<const double> revenues) const {
  std::vector<double> out(sets_.size());
  for (std::size_t m = 0; m < sets_.size(); ++m) {
    double num = 0.0;
    double denom = 1.0;
    for (int k = offsets_[m]; k < offsets_[m + 1]; ++k) {
      const auto i = static_cast<std::size_t>(flat_items_[k]);
      num += revenues[i] * weights[i];
      denom += weights[i];
    }
    out[m] = num / denom;
  }
  return out;
}

ScoredAssortment FeasibleFamily::ArgmaxRevenue(
    std::span<const double> weights, std::span<const double> revenues) const {
  if (sets_.empty()) throw std::domain_error("feasible family is empty");
  if (static_cast<int>(weights.size()) != n_items_ ||
      static_cast<int>(revenues.size()) != n_items_) {
    throw std::invalid_argument("weights/revenues length must equal N");
  }
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < sets_.size(); ++m) {
    double num = 0.0;
    double denom = 1.0;
    for (int k = offsets_[m]; k < offsets_[m + 1]; ++k) {
      const auto i = static_cast<std::size_t>(flat_items_[k]);
      num += revenues[i] * weights[i];
      denom += weights[i];
    }
    const double score = num / denom;
    if (score > best_score) {
      best_score = score;
      best = m;
    }
  }
  return {sets_[best], best_score};
}

}  // namespace mnlbandit

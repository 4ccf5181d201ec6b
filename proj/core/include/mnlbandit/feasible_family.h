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

#ifndef MNLBANDIT_FEASIBLE_FAMILY_H_
#define MNLBANDIT_FEASIBLE_FAMILY_H_

#include <cstdint>
#include <span>
#include <vector>

#include "mnlbandit/mnl_model.h"

namespace mnlbandit {

inline constexpr int64_t kDefaultEnumerationCap = 1'000'000;

struct ScoredAssortment {
  Assortment set;
  double score = 0.0;
};

// Cardinality-capped family of offerable assortments: every subset of
// [1..N] with size at most max_size (the empty set only when include_empty).
// Downward-closed by construction. The enumeration is materialized once at
// construction and the object is immutable afterwards.
class FeasibleFamily {
 public:
  // Throws std::length_error naming the count if the family is larger than
  // enumeration_cap, std::domain_error on N < 1 or max_size < 0.
  FeasibleFamily(int n_items, int max_size, bool include_empty = false,
                 int64_t enumeration_cap = kDefaultEnumerationCap);

  int n_items() const { return n_items_; }
  int max_size() const { return max_size_; }
  bool include_empty() const { return include_empty_; }
  int size() const { return static_cast<int>(sets_.size()); }

  bool Contains(const Assortment& s) const;

  // Cardinality, then lexicographic.
  const std::vector<Assortment>& Enumerate() const { return sets_; }
  const Assortment& at(int index) const { return sets_[index]; }

  // Member maximizing sum r_i w_i / (1 + sum w_i). The first maximizer in
  // enumeration order wins, i.e. smallest cardinality then lexicographically
  // smallest. Throws std::domain_error on an empty family.
  ScoredAssortment ArgmaxRevenue(std::span<const double> weights,
                                 std::span<const double> revenues) const;

  // Score of every member, in enumeration order.
  std::vector<double> Scores(std::span<const double> weights,
                             std::span<const double> revenues) const;

  // sum_{k=lo..max_size} C(n, k), lo = 0 or 1. Saturates at INT64_MAX.
  static int64_t CountSubsets(int n_items, int max_size, bool include_empty);

 private:
  int n_items_;
  int max_size_;
  bool include_empty_;
  std::vector<Assortment> sets_;
  // Flattened 0-based member items for the argmax hot loop.
  std::vector<int> flat_items_;
  std::vector<int> offsets_;
};

}  // namespace mnlbandit

#endif  // MNLBANDIT_FEASIBLE_FAMILY_H_

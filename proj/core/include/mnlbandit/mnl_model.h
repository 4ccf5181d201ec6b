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

#ifndef MNLBANDIT_MNL_MODEL_H_
#define MNLBANDIT_MNL_MODEL_H_

#include <cstddef>
#include <filesystem>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mnlbandit/random.h"

namespace mnlbandit {

// Items are numbered 1..N throughout; 0 is the no-purchase option.
inline constexpr int kNoPurchase = 0;

// Per-item values addressed by 1-based item index. values() exposes the
// underlying 0-based storage for bulk arithmetic.
template <typename T>
class ItemVector {
 public:
  ItemVector() = default;
  explicit ItemVector(int n_items, T init = T{})
      : data_(static_cast<std::size_t>(n_items), init) {}
  explicit ItemVector(std::vector<T> values) : data_(std::move(values)) {}

  T& operator[](int item) { return data_[static_cast<std::size_t>(item - 1)]; }
  const T& operator[](int item) const {
    return data_[static_cast<std::size_t>(item - 1)];
  }

  int size() const { return static_cast<int>(data_.size()); }
  std::span<const T> values() const { return data_; }
  std::span<T> values() { return data_; }
  const std::vector<T>& vector() const { return data_; }

  friend bool operator==(const ItemVector&, const ItemVector&) = default;

 private:
  std::vector<T> data_;
};

// An offered set: distinct item indices kept in ascending order.
class Assortment {
 public:
  Assortment() = default;
  // Sorts the input; throws std::invalid_argument on duplicates or indices
  // below 1.
  explicit Assortment(std::vector<int> items);
  Assortment(std::initializer_list<int> items)
      : Assortment(std::vector<int>(items)) {}

  const std::vector<int>& items() const { return items_; }
  int size() const { return static_cast<int>(items_.size()); }
  bool empty() const { return items_.empty(); }
  bool Contains(int item) const;
  int max_item() const { return items_.empty() ? 0 : items_.back(); }

  // Throws std::domain_error if any index exceeds n_items.
  void CheckWithin(int n_items) const;

  std::string ToString() const;  // "{1,2,5}"

  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  friend bool operator==(const Assortment&, const Assortment&) = default;
  // Cardinality first, then lexicographic on the sorted items.
  friend bool operator<(const Assortment& a, const Assortment& b);

 private:
  std::vector<int> items_;
};

// [1..n] \ s.
Assortment Complement(const Assortment& s, int n_items);

struct ChoiceOutcome {
  int chosen = kNoPurchase;

  bool IsNoPurchase() const { return chosen == kNoPurchase; }
  friend bool operator==(ChoiceOutcome, ChoiceOutcome) = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Ground-truth MNL environment. v0 is fixed to 1.
class MnlInstance {
 public:
  // Throws std::invalid_argument unless v and r are nonempty, of equal
  // length, and strictly positive.
  MnlInstance(std::vector<double> attractions, std::vector<double> revenues);

  int n_items() const { return v_.size(); }
  // v(0) is the no-purchase weight 1.
  double v(int item) const { return item == kNoPurchase ? 1.0 : v_[item]; }
  double r(int item) const { return r_[item]; }
  const ItemVector<double>& attractions() const { return v_; }
  const ItemVector<double>& revenues() const { return r_; }
  double max_revenue() const;

  // Every v_i <= bound (bound 1 is the standard no-purchase dominance).
  bool AttractionsBoundedBy(double bound) const;

  // FNV digest of the exact parameter bits; stamped into trial metadata.
  std::string Digest() const;

  friend bool operator==(const MnlInstance&, const MnlInstance&) = default;

 private:
  ItemVector<double> v_;
  ItemVector<double> r_;
};

// v_i / (1 + sum_{j in s} v_j), v_0 = 1 for item 0; 0 when item is neither 0
// nor in s. Throws std::domain_error on out-of-range indices.
double ChoiceProbability(const MnlInstance& instance, const Assortment& s,
                         int item);

// sum_{i in s} r_i w_i / (1 + sum_{i in s} w_i) for arbitrary nonnegative
// weights. Shared by true revenue, optimistic scores and plug-in estimates.
double PlugInRevenue(std::span<const double> weights,
                     std::span<const double> revenues, const Assortment& s);

double ExpectedRevenue(const MnlInstance& instance, const Assortment& s);

// Draws one customer decision. Consumes exactly one Rng::Uniform() call.
// Throws std::domain_error on an empty assortment.
ChoiceOutcome SampleChoice(const MnlInstance& instance, const Assortment& s,
                           Rng& rng);

// All v first, then all r, in index order.
MnlInstance RandomInstance(int n_items, Interval v_range, Interval r_range,
                           Rng& rng);

// {"n_items": N, "v": [...], "r": [...]}
nlohmann::json InstanceToJson(const MnlInstance& instance);
MnlInstance InstanceFromJson(const nlohmann::json& doc);
MnlInstance LoadInstance(const std::filesystem::path& path);
void SaveInstance(const MnlInstance& instance,
                  const std::filesystem::path& path);

}  // namespace mnlbandit

#endif  // MNLBANDIT_MNL_MODEL_H_

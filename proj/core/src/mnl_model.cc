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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mnlbandit {

Assortment::Assortment(std::vector<int> items) : items_(std::move(items)) {
  std::sort(items_.begin(), items_.end());
  if (!items_.empty() && items_.front() < 1) {
    throw std::invalid_argument("assortment item indices start at 1");
  }
  if (std::adjacent_find(items_.begin(), items_.end()) != items_.end()) {
    throw std::invalid_argument("assortment contains a duplicate item");
  }
}

bool Assortment::Contains(int item) const {
  return std::binary_search(items_.begin(), items_.end(), item);
}

void Assortment::CheckWithin(int n_items) const {
  if (max_item() > n_items) {
    throw std::domain_error("item " + std::to_string(max_item()) +
                            " out of range for " + std::to_string(n_items) +
                            " items");
  }
}

std::string Assortment::ToString() const {
  std::string out = "{";
  for (std::size_t k = 0; k < items_.size(); ++k) {
    if (k > 0) out += ',';
    out += std::to_string(items_[k]);
  }
  return out + "}";
}

bool operator<(const Assortment& a, const Assortment& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.items_ < b.items_;
}

Assortment Complement(const Assortment& s, int n_items) {
  std::vector<int> rest;
  rest.reserve(static_cast<std::size_t>(n_items - s.size()));
  for (int i = 1; i <= n_items; ++i) {
    if (!s.Contains(i)) rest.push_back(i);
  }
  return Assortment(std::move(rest));
}

MnlInstance::MnlInstance(std::vector<double> attractions,
                         std::vector<double> revenues)
    : v_(std::move(attractions)), r_(std::move(revenues)) {
  if (v_.size() == 0) throw std::invalid_argument("instance has no items");
  if (v_.size() != r_.size()) {
    throw std::invalid_argument("v and r lengths differ");
  }
  for (int i = 1; i <= v_.size(); ++i) {
    if (!(v_[i] > 0.0) || !std::isfinite(v_[i])) {
      throw std::invalid_argument("attraction v_" + std::to_string(i) +
                                  " must be positive and finite");
    }
    if (!(r_[i] > 0.0) || !std::isfinite(r_[i])) {
      throw std::invalid_argument("revenue r_" + std::to_string(i) +
                                  " must be positive and finite");
    }
  }
}

double MnlInstance::max_revenue() const {
  const auto r = r_.values();
  return *std::max_element(r.begin(), r.end());
}

bool MnlInstance::AttractionsBoundedBy(double bound) const {
  const auto v = v_.values();
  return std::all_of(v.begin(), v.end(), [&](double x) { return x <= bound; });
}

std::string MnlInstance::Digest() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double x) {
    uint64_t bits = std::bit_cast<uint64_t>(x);
    for (int k = 0; k < 8; ++k) {
      h ^= (bits >> (8 * k)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  for (const double x : v_.values()) mix(x);
  for (const double x : r_.values()) mix(x);
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

double ChoiceProbability(const MnlInstance& instance, const Assortment& s,
                         int item) {
  s.CheckWithin(instance.n_items());
  if (item < 0 || item > instance.n_items()) {
    throw std::domain_error("item " + std::to_string(item) + " out of range");
  }
  if (item != kNoPurchase && !s.Contains(item)) return 0.0;
  double denom = 1.0;
  for (const int j : s) denom += instance.v(j);
  return instance.v(item) / denom;
}

double PlugInRevenue(std::span<const double> weights,
                     std::span<const double> revenues, const Assortment& s) {
  double num = 0.0;
  double denom = 1.0;
  for (const int i : s) {
    const auto k = static_cast<std::size_t>(i - 1);
    num += revenues[k] * weights[k];
    denom += weights[k];
  }
  return num / denom;
}

double ExpectedRevenue(const MnlInstance& instance, const Assortment& s) {
  s.CheckWithin(instance.n_items());
  return PlugInRevenue(instance.attractions().values(),
                       instance.revenues().values(), s);
}

ChoiceOutcome SampleChoice(const MnlInstance& instance, const Assortment& s,
                           Rng& rng) {
  if (s.empty()) throw std::domain_error("cannot offer an empty assortment");
  s.CheckWithin(instance.n_items());
  double total = 1.0;
  for (const int j : s) total += instance.v(j);
  // Inverse CDF over (0, s_1, s_2, ...).
  const double u = rng.Uniform() * total;
  double acc = 1.0;
  if (u < acc) return {kNoPurchase};
  for (const int j : s) {
    acc += instance.v(j);
    if (u < acc) return {j};
  }
  return {s.items().back()};
}

MnlInstance RandomInstance(int n_items, Interval v_range, Interval r_range,
                           Rng& rng) {
  if (n_items < 1) throw std::domain_error("n_items must be positive");
  if (!(v_range.lo > 0.0) || !(r_range.lo > 0.0)) {
    throw std::domain_error("parameter ranges need positive lower bounds");
  }
  if (v_range.hi < v_range.lo || r_range.hi < r_range.lo) {
    throw std::domain_error("parameter range upper bound below lower bound");
  }
  std::vector<double> v(static_cast<std::size_t>(n_items));
  std::vector<double> r(static_cast<std::size_t>(n_items));
  for (double& x : v) x = rng.UniformIn(v_range.lo, v_range.hi);
  for (double& x : r) x = rng.UniformIn(r_range.lo, r_range.hi);
  return MnlInstance(std::move(v), std::move(r));
}

nlohmann::json InstanceToJson(const MnlInstance& instance) {
  return {{"n_items", instance.n_items()},
          {"v", instance.attractions().vector()},
          {"r", instance.revenues().vector()}};
}

MnlInstance InstanceFromJson(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("instance must be object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "n_items" && key != "v" && key != "r") {
      throw std::invalid_argument("unknown instance key '" + key + "'");
    }
  }
  const int n = doc.at("n_items").get<int>();
  auto v = doc.at("v").get<std::vector<double>>();
  auto r = doc.at("r").get<std::vector<double>>();
  if (static_cast<int>(v.size()) != n || static_cast<int>(r.size()) != n) {
    throw std::invalid_argument("instance arrays do not match n_items");
  }
  return MnlInstance(std::move(v), std::move(r));
}

MnlInstance LoadInstance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return InstanceFromJson(nlohmann::json::parse(in));
}

void SaveInstance(const MnlInstance& instance,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << InstanceToJson(instance).dump(2) << '\n';
}

}  // namespace mnlbandit

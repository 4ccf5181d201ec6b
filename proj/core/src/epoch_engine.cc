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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mnlbandit {

int64_t EpochRecord::total_purchases() const {
  const auto c = counts.values();
  return std::accumulate(c.begin(), c.end(), int64_t{0});
}

EpochRun RunEpoch(const MnlInstance& instance, const Assortment& offered,
                  const ItemVector<double>& selection_prob,
                  int64_t epoch_index, int64_t t_now, int64_t horizon,
                  Rng& rng) {
  if (offered.empty()) throw std::domain_error("epoch offers an empty set");
  if (t_now > horizon) throw std::domain_error("epoch starts past horizon");
  offered.CheckWithin(instance.n_items());

  EpochRun run;
  EpochRecord& rec = run.record;
  rec.epoch_index = epoch_index;
  rec.offered = offered;
  rec.counts = ItemVector<int64_t>(instance.n_items(), 0);
  rec.selection_prob = selection_prob;

  for (int64_t t = t_now;; ++t) {
    const ChoiceOutcome c = SampleChoice(instance, offered, rng);
    run.steps.push_back(c);
    ++rec.length;
    if (c.IsNoPurchase()) break;
    ++rec.counts[c.chosen];
    if (t == horizon) {
      rec.truncated = true;
      break;
    }
  }
  return run;
}

EpochMoments EpochCountDistribution(const MnlInstance& instance,
                                    const Assortment& offered,
                                    int64_t n_epochs, Rng& rng,
                                    int histogram_size) {
  if (n_epochs < 1000) {
    throw std::invalid_argument("distribution check needs >= 1000 epochs");
  }
  const int n = instance.n_items();
  ItemVector<double> sum(n), sum_sq(n), sum_4th(n);
  std::vector<std::vector<double>> hist(
      static_cast<std::size_t>(n),
      std::vector<double>(static_cast<std::size_t>(histogram_size), 0.0));
  double len_sum = 0.0;
  double len_sq = 0.0;
  const ItemVector<double> unit(n, 1.0);
  for (int64_t e = 0; e < n_epochs; ++e) {
    const EpochRun run = RunEpoch(instance, offered, unit, e + 1, 1,
                                  kUnboundedHorizon, rng);
    const auto len = static_cast<double>(run.record.length);
    len_sum += len;
    len_sq += len * len;
    for (int i = 1; i <= n; ++i) {
      const auto c = static_cast<double>(run.record.counts[i]);
      sum[i] += c;
      sum_sq[i] += c * c;
      sum_4th[i] += c * c * c * c;
      if (run.record.counts[i] < histogram_size) {
        hist[static_cast<std::size_t>(i - 1)]
            [static_cast<std::size_t>(run.record.counts[i])] += 1.0;
      }
    }
  }
  const auto m = static_cast<double>(n_epochs);
  auto se = [m](double s1, double s2) {
    const double mean = s1 / m;
    const double var = std::max(0.0, (s2 - m * mean * mean) / (m - 1.0));
    return std::sqrt(var / m);
  };
  EpochMoments out;
  out.n_epochs = n_epochs;
  out.mean_count = ItemVector<double>(n);
  out.se_mean_count = ItemVector<double>(n);
  out.mean_sq_count = ItemVector<double>(n);
  out.se_mean_sq_count = ItemVector<double>(n);
  for (int i = 1; i <= n; ++i) {
    out.mean_count[i] = sum[i] / m;
    out.se_mean_count[i] = se(sum[i], sum_sq[i]);
    out.mean_sq_count[i] = sum_sq[i] / m;
    out.se_mean_sq_count[i] = se(sum_sq[i], sum_4th[i]);
    for (double& h : hist[static_cast<std::size_t>(i - 1)]) h /= m;
  }
  out.mean_length = len_sum / m;
  out.se_mean_length = se(len_sum, len_sq);
  out.count_histogram = std::move(hist);
  return out;
}

}  // namespace mnlbandit

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

#ifndef MNLBANDIT_EPOCH_ENGINE_H_
#define MNLBANDIT_EPOCH_ENGINE_H_

#include <cstdint>
#include <limits>
#include <vector>

#include "mnlbandit/mnl_model.h"
#include "mnlbandit/random.h"

namespace mnlbandit {

inline constexpr int64_t kUnboundedHorizon =
    std::numeric_limits<int64_t>::max();

// One offer-until-no-purchase epoch.
struct EpochRecord {
  int64_t epoch_index = 0;  // 1-based
  Assortment offered;
  // Steps consumed, including the terminal no-purchase step.
  int64_t length = 0;
  // Purchases of each item during the epoch; zero for items not offered.
  ItemVector<int64_t> counts;
  // P(i in offered | optimistic set) for offered items, 0 elsewhere.
  ItemVector<double> selection_prob;
  // The horizon ended the epoch before a no-purchase occurred.
  bool truncated = false;

  int64_t total_purchases() const;
};

struct EpochRun {
  EpochRecord record;
  std::vector<ChoiceOutcome> steps;  // one entry per consumed time step
};

// Offers `offered` from time step t_now until a no-purchase or until step
// `horizon` has been consumed. Steps are 1-based and inclusive, so at most
// horizon - t_now + 1 steps are used. Requires t_now <= horizon and a
// nonempty assortment (std::domain_error otherwise).
EpochRun RunEpoch(const MnlInstance& instance, const Assortment& offered,
                  const ItemVector<double>& selection_prob,
                  int64_t epoch_index, int64_t t_now, int64_t horizon,
                  Rng& rng);

// Sample moments of per-epoch purchase counts and epoch lengths over
// repeated epochs of a fixed assortment.
struct EpochMoments {
  int64_t n_epochs = 0;
  ItemVector<double> mean_count;
  ItemVector<double> se_mean_count;
  ItemVector<double> mean_sq_count;  // E[count^2]
  ItemVector<double> se_mean_sq_count;
  double mean_length = 0.0;
  double se_mean_length = 0.0;
  // histogram[m] = fraction of epochs with count_i == m, per item,
  // truncated at histogram_size.
  std::vector<std::vector<double>> count_histogram;
};

// Runs n_epochs untruncated epochs (n_epochs >= 1000, std::invalid_argument
// otherwise) and reports the empirical moments with standard errors.
EpochMoments EpochCountDistribution(const MnlInstance& instance,
                                    const Assortment& offered,
                                    int64_t n_epochs, Rng& rng,
                                    int histogram_size = 16);

}  // namespace mnlbandit

#endif  // MNLBANDIT_EPOCH_ENGINE_H_

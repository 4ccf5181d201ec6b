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

#ifndef MNLBANDIT_MNL_EXPERIMENT_UCB_H_
#define MNLBANDIT_MNL_EXPERIMENT_UCB_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mnlbandit/epoch_engine.h"
#include "mnlbandit/feasible_family.h"
#include "mnlbandit/mnl_model.h"
#include "mnlbandit/random.h"

namespace mnlbandit {

// Epoch-based UCB with forced complement exploration and IPW estimation.
//
// Three selection variants share one state container:
//   kStandard  offers the complement of the optimistic set with
//              probability 1/(2 l^alpha);
//   kKStar     splits the complement into chunks of at most K* items, each
//              offered with probability 1/(ceil(N/K*) l^alpha);
//   kGeneral   drops the v_i <= 1 requirement: uses the UCB2 index and
//              inserts deterministic exploratory epochs while some item in
//              the optimistic set has too few observations.
enum class Variant { kStandard, kKStar, kGeneral };

std::string_view VariantName(Variant v);
Variant ParseVariant(std::string_view name);  // "standard" | "k-star" | "general"

struct PolicyConfig {
  double alpha = 0.0;  // exploration decay exponent
  Variant variant = Variant::kStandard;
  std::optional<int> k_star;     // required for kKStar
  std::optional<double> b_bound;  // kGeneral; recorded, not used at runtime
  // false removes the complement branch entirely (optimistic set always).
  bool complement_sampling = true;

  // Throws std::invalid_argument. alpha must be finite and >= 0; values
  // above 1/2 are accepted but fall outside the analyzed range.
  void Validate(int n_items) const;
  bool OutOfTheory() const { return alpha > 0.5; }
};

enum class OfferKind { kOptimistic, kComplement, kComplementChunk, kExploratory };

std::string_view OfferKindName(OfferKind kind);

struct PolicyState {
  explicit PolicyState(int n_items);

  int n_items() const { return appearances.size(); }
  int64_t completed_epochs() const { return ell - 1; }

  int64_t ell = 1;                   // index of the next epoch to run
  ItemVector<int64_t> appearances;   // T_i: completed epochs offering i
  ItemVector<double> count_sum;      // sum of per-epoch counts over T_i
  ItemVector<double> mean;           // v-bar_i (0 while T_i == 0)
  ItemVector<double> ucb;            // UCB or UCB2 index, 1 while T_i == 0
  ItemVector<double> sum_v;          // IPW accumulator
  Assortment last_star;
  ItemVector<double> last_selection_probs;
};

struct OfferDecision {
  Assortment offered;
  ItemVector<double> selection_probs;  // P(i in offered | S*), 0 off-offer
  OfferKind kind = OfferKind::kOptimistic;
  Assortment optimistic;               // S*_l
  double optimistic_score = 0.0;
  double exploration_prob = 0.0;       // alpha_l (per chunk for kKStar)
  std::vector<Assortment> complement_chunks;  // kKStar partition
};

struct FinalEstimates {
  ItemVector<double> v_hat;
  int64_t completed_epochs = 0;
};

// 48 log(sqrt(N) l + 1), natural log.
double ConfidenceLogTerm(int n_items, int64_t ell);

// v + sqrt(v * c / T) + c / T with c = ConfidenceLogTerm(N, l). T == 0
// yields the initialization value 1.
double UcbIndex(double v_bar, int64_t t_i, int n_items, int64_t ell);
// v + max(sqrt(v), v) sqrt(c / T) + c / T; 1 when T == 0.
double Ucb2Index(double v_bar, int64_t t_i, int n_items, int64_t ell);

// alpha_l for the configured variant at epoch l >= 1.
double ExplorationProbability(const PolicyConfig& config, int n_items,
                              int64_t ell);

// [N] \ star split into consecutive ascending runs of at most k_star items.
std::vector<Assortment> PartitionComplement(const Assortment& star,
                                            int n_items, int k_star);

// Items with T_i < ConfidenceLogTerm(N, l).
Assortment UnderExploredItems(const PolicyState& state);

// Computes S*_l and draws the offer for epoch state.ell. Always consumes
// exactly one Rng::Uniform() call.
OfferDecision SelectAssortment(const PolicyState& state,
                               const PolicyConfig& config,
                               const FeasibleFamily& family,
                               const ItemVector<double>& revenues, Rng& rng);

// Folds a completed epoch into the state and advances l. Throws
// std::invalid_argument for a truncated record or one whose epoch index is
// not state.ell.
void ObserveEpoch(PolicyState& state, const PolicyConfig& config,
                  const EpochRecord& record);

// v_hat_i = SumV_i / L. Throws std::logic_error when L == 0.
FinalEstimates Finalize(const PolicyState& state);

// IPW running estimate; the zero vector before the first completed epoch.
ItemVector<double> RunningEstimate(const PolicyState& state);

double RevenueEstimate(const FinalEstimates& estimates,
                       const ItemVector<double>& revenues,
                       const Assortment& s);

// Pairwise treatment-effect estimates from final parameter estimates.
class AteEstimator {
 public:
  AteEstimator(FinalEstimates estimates, ItemVector<double> revenues);

  // v_hat_i - v_hat_j.
  double ParameterDifference(int i, int j) const;
  // R_hat(a) - R_hat(b).
  double RevenueDifference(const Assortment& a, const Assortment& b) const;

  // N x N table, row i-1 column j-1 holds ParameterDifference(i, j).
  std::vector<std::vector<double>> ParameterTable() const;
  // |S| x |S| table over the family's enumeration. Throws std::length_error
  // when |S|^2 exceeds cell_cap.
  std::vector<std::vector<double>> RevenueTable(
      const FeasibleFamily& family, int64_t cell_cap = 4'000'000) const;

  const FinalEstimates& estimates() const { return estimates_; }

 private:
  FinalEstimates estimates_;
  ItemVector<double> revenues_;
};

}  // namespace mnlbandit

#endif  // MNLBANDIT_MNL_EXPERIMENT_UCB_H_

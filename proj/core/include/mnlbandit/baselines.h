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

#ifndef MNLBANDIT_BASELINES_H_
#define MNLBANDIT_BASELINES_H_

#include <cstdint>
#include <vector>

#include "mnlbandit/feasible_family.h"
#include "mnlbandit/mnl_experiment_ucb.h"
#include "mnlbandit/random.h"

namespace mnlbandit {

// MNLBanditEE: always the optimistic set under the current UCB indices.
Assortment EeSelect(const PolicyState& state, const FeasibleFamily& family,
                    const ItemVector<double>& revenues);

struct Exp3EgParams {
  double decay = 0.5;              // exponent of the exploration schedule
  double exploration_rate = 0.05;  // delta
};

// EXP3 over assortments-as-arms with a forced-exploration floor, one arm per
// time step. At step t (1-based) the sampling distribution is
//   p_t = (1 - g_t) softmax(log_w) + g_t / |S|,
//   g_t = min(1, delta * t^(-decay) * |S|),
// and after observing reward x the chosen arm's log-weight grows by
//   eta_t * x / (reward_scale * p_t(arm)),  eta_t = sqrt(ln|S| / (|S| t)).
// Weights are kept in log space and shifted so the largest is 0.
class Exp3Eg {
 public:
  // reward_scale must be positive (std::invalid_argument otherwise).
  Exp3Eg(const FeasibleFamily& family, double reward_scale,
         Exp3EgParams params = {});

  int n_arms() const { return static_cast<int>(log_weights_.size()); }
  int64_t step() const { return step_; }
  const Assortment& arm(int index) const { return family_->at(index); }

  double ExplorationMix(int64_t t) const;
  double LearningRate(int64_t t) const;

  // Sampling distribution for the current step.
  std::vector<double> Distribution() const;

  // Draws an arm for the current step. Consumes one Rng::Uniform() call.
  int Select(Rng& rng);

  // Importance-weighted update for the arm returned by the last Select();
  // advances the step counter.
  void Update(int arm, double realized_reward);

  // x / (reward_scale * p) for the last draw, exposed for estimator checks.
  double ImportanceWeightedReward(int arm, double realized_reward) const;

  // Empirical mean realized reward per arm (0 for arms never pulled).
  double MeanReward(int arm) const;
  int64_t Pulls(int arm) const { return pulls_[arm]; }

  const std::vector<double>& log_weights() const { return log_weights_; }

 private:
  const FeasibleFamily* family_;
  double reward_scale_;
  Exp3EgParams params_;
  int64_t step_ = 1;
  std::vector<double> log_weights_;
  std::vector<double> last_distribution_;
  std::vector<double> reward_sums_;
  std::vector<int64_t> pulls_;
};

}  // namespace mnlbandit

#endif  // MNLBANDIT_BASELINES_H_

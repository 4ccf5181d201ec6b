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

#include "mnlbandit/baselines.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mnlbandit {

Assortment EeSelect(const PolicyState& state, const FeasibleFamily& family,
                    const ItemVector<double>& revenues) {
  return family.ArgmaxRevenue(state.ucb.values(), revenues.values()).set;
}

Exp3Eg::Exp3Eg(const FeasibleFamily& family, double reward_scale,
               Exp3EgParams params)
    : family_(&family),
      reward_scale_(reward_scale),
      params_(params),
      log_weights_(static_cast<std::size_t>(family.size()), 0.0),
      reward_sums_(static_cast<std::size_t>(family.size()), 0.0),
      pulls_(static_cast<std::size_t>(family.size()), 0) {
  if (!(reward_scale > 0.0)) {
    throw std::invalid_argument("reward_scale must be positive");
  }
  if (family.size() == 0) throw std::domain_error("EXP3EG needs arms");
  last_distribution_ = Distribution();
}

double Exp3Eg::ExplorationMix(int64_t t) const {
  const double g = params_.exploration_rate *
                   std::pow(static_cast<double>(t), -params_.decay) *
                   static_cast<double>(n_arms());
  return std::clamp(g, 0.0, 1.0);
}

double Exp3Eg::LearningRate(int64_t t) const {
  const auto k = static_cast<double>(n_arms());
  return std::sqrt(std::log(k) / (k * static_cast<double>(t)));
}

std::vector<double> Exp3Eg::Distribution() const {
  const double g = ExplorationMix(step_);
  const double top = *std::max_element(log_weights_.begin(), log_weights_.end());
  std::vector<double> p(log_weights_.size());
  double z = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    p[a] = std::exp(log_weights_[a] - top);
    z += p[a];
  }
  const double uniform = 1.0 / static_cast<double>(p.size());
  for (double& x : p) x = (1.0 - g) * (x / z) + g * uniform;
  return p;
}

int Exp3Eg::Select(Rng& rng) {
  last_distribution_ = Distribution();
  const double u = rng.Uniform();
  double acc = 0.0;
  for (std::size_t a = 0; a < last_distribution_.size(); ++a) {
    acc += last_distribution_[a];
    if (u < acc) return static_cast<int>(a);
  }
  return n_arms() - 1;
}

double Exp3Eg::ImportanceWeightedReward(int arm, double realized_reward) const {
  return realized_reward /
         (reward_scale_ * last_distribution_[static_cast<std::size_t>(arm)]);
}

void Exp3Eg::Update(int arm, double realized_reward) {
  const auto a = static_cast<std::size_t>(arm);
  log_weights_[a] +=
      LearningRate(step_) * ImportanceWeightedReward(arm, realized_reward);
  const double top = *std::max_element(log_weights_.begin(), log_weights_.end());
  for (double& w : log_weights_) w -= top;
  reward_sums_[a] += realized_reward;
  ++pulls_[a];
  ++step_;
}

double Exp3Eg::MeanReward(int arm) const {
  const auto a = static_cast<std::size_t>(arm);
  return pulls_[a] == 0 ? 0.0
                        : reward_sums_[a] / static_cast<double>(pulls_[a]);
}

}  // namespace mnlbandit

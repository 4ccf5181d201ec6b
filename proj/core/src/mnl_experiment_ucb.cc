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

#include "mnlbandit/mnl_experiment_ucb.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace mnlbandit {

std::string_view VariantName(Variant v) {
  switch (v) {
    case Variant::kStandard:
      return "standard";
    case Variant::kKStar:
      return "k-star";
    case Variant::kGeneral:
      return "general";
  }
  return "?";
}

Variant ParseVariant(std::string_view name) {
  if (name == "standard") return Variant::kStandard;
  if (name == "k-star") return Variant::kKStar;
  if (name == "general") return Variant::kGeneral;
  throw std::invalid_argument("unknown variant '" + std::string(name) + "'");
}

std::string_view OfferKindName(OfferKind kind) {
  switch (kind) {
    case OfferKind::kOptimistic:
      return "optimistic";
    case OfferKind::kComplement:
      return "complement";
    case OfferKind::kComplementChunk:
      return "complement-chunk";
    case OfferKind::kExploratory:
      return "exploratory";
  }
  return "?";
}

void PolicyConfig::Validate(int n_items) const {
  if (!std::isfinite(alpha) || alpha < 0.0) {
    throw std::invalid_argument("alpha must be finite and nonnegative");
  }
  if (variant == Variant::kKStar) {
    if (!k_star) throw std::invalid_argument("k-star variant needs k_star");
    if (*k_star < 1) throw std::invalid_argument("k_star must be >= 1");
    if (*k_star > n_items) throw std::invalid_argument("k_star exceeds N");
  } else if (k_star && *k_star < 1) {
    throw std::invalid_argument("k_star must be >= 1");
  }
  if (b_bound && !(*b_bound >= 1.0)) {
    throw std::invalid_argument("b_bound must be >= 1");
  }
}

PolicyState::PolicyState(int n_items)
    : appearances(n_items, 0),
      count_sum(n_items, 0.0),
      mean(n_items, 0.0),
      ucb(n_items, 1.0),
      sum_v(n_items, 0.0),
      last_selection_probs(n_items, 0.0) {}

double ConfidenceLogTerm(int n_items, int64_t ell) {
  return 48.0 * std::log(std::sqrt(static_cast<double>(n_items)) *
                             static_cast<double>(ell) +
                         1.0);
}

double UcbIndex(double v_bar, int64_t t_i, int n_items, int64_t ell) {
  if (t_i <= 0) return 1.0;
  const double radius =
      ConfidenceLogTerm(n_items, ell) / static_cast<double>(t_i);
  return v_bar + std::sqrt(v_bar * radius) + radius;
}

double Ucb2Index(double v_bar, int64_t t_i, int n_items, int64_t ell) {
  if (t_i <= 0) return 1.0;
  const double radius =
      ConfidenceLogTerm(n_items, ell) / static_cast<double>(t_i);
  return v_bar + std::max(std::sqrt(v_bar), v_bar) * std::sqrt(radius) +
         radius;
}

double ExplorationProbability(const PolicyConfig& config, int n_items,
                              int64_t ell) {
  const double decay = std::pow(static_cast<double>(ell), config.alpha);
  if (config.variant == Variant::kKStar) {
    const int k = *config.k_star;
    const int blocks = (n_items + k - 1) / k;
    return 1.0 / (static_cast<double>(blocks) * decay);
  }
  return 1.0 / (2.0 * decay);
}

std::vector<Assortment> PartitionComplement(const Assortment& star,
                                            int n_items, int k_star) {
  const Assortment rest = Complement(star, n_items);
  std::vector<Assortment> chunks;
  const auto& items = rest.items();
  for (std::size_t b = 0; b < items.size(); b += k_star) {
    const std::size_t e = std::min(items.size(), b + k_star);
    chunks.emplace_back(std::vector<int>(items.begin() + b, items.begin() + e));
  }
  return chunks;
}

Assortment UnderExploredItems(const PolicyState& state) {
  const double threshold = ConfidenceLogTerm(state.n_items(), state.ell);
  std::vector<int> out;
  for (int i = 1; i <= state.n_items(); ++i) {
    if (static_cast<double>(state.appearances[i]) < threshold) out.push_back(i);
  }
  return Assortment(std::move(out));
}

namespace {

ItemVector<double> TwoLevelProbs(int n, const Assortment& star, double in_star,
                                 double off_star) {
  ItemVector<double> p(n, off_star);
  for (const int i : star) p[i] = in_star;
  return p;
}

}  // namespace

OfferDecision SelectAssortment(const PolicyState& state,
                               const PolicyConfig& config,
                               const FeasibleFamily& family,
                               const ItemVector<double>& revenues, Rng& rng) {
  const int n = state.n_items();
  const ScoredAssortment star =
      family.ArgmaxRevenue(state.ucb.values(), revenues.values());
  const double u = rng.Uniform();

  OfferDecision d;
  d.optimistic = star.set;
  d.optimistic_score = star.score;
  d.exploration_prob = ExplorationProbability(config, n, state.ell);

  if (config.variant == Variant::kGeneral) {
    const double threshold = ConfidenceLogTerm(n, state.ell);
    const bool needs_exploration =
        std::any_of(star.set.begin(), star.set.end(), [&](int i) {
          return static_cast<double>(state.appearances[i]) < threshold;
        });
    if (needs_exploration) {
      // Lexicographically first feasible subset of maximal size.
      const Assortment under = UnderExploredItems(state);
      const auto& pool = under.items();
      const auto take =
          std::min<std::size_t>(pool.size(), family.max_size());
      d.offered = Assortment(std::vector<int>(pool.begin(), pool.begin() + take));
      d.kind = OfferKind::kExploratory;
      d.selection_probs = TwoLevelProbs(n, d.offered, 1.0, 0.0);
      return d;
    }
  }

  auto offer_star = [&] {
    d.offered = star.set;
    d.kind = OfferKind::kOptimistic;
    d.selection_probs = TwoLevelProbs(n, star.set, 1.0, 0.0);
  };

  if (!config.complement_sampling || star.set.size() == n) {
    offer_star();
    return d;
  }

  if (config.variant == Variant::kKStar) {
    d.complement_chunks = PartitionComplement(star.set, n, *config.k_star);
    const double alpha_l = d.exploration_prob;
    const auto m = static_cast<double>(d.complement_chunks.size());
    assert(m * alpha_l <= 1.0 + 1e-12);
    d.selection_probs = TwoLevelProbs(n, star.set, 1.0 - m * alpha_l, alpha_l);
    const auto j = static_cast<std::size_t>(u / alpha_l);
    if (j < d.complement_chunks.size()) {
      d.offered = d.complement_chunks[j];
      d.kind = OfferKind::kComplementChunk;
    } else {
      d.offered = star.set;
      d.kind = OfferKind::kOptimistic;
    }
    return d;
  }

  const double alpha_l = d.exploration_prob;
  d.selection_probs = TwoLevelProbs(n, star.set, 1.0 - alpha_l, alpha_l);
  if (u < alpha_l) {
    d.offered = Complement(star.set, n);
    d.kind = OfferKind::kComplement;
  } else {
    d.offered = star.set;
    d.kind = OfferKind::kOptimistic;
  }
  return d;
}

void ObserveEpoch(PolicyState& state, const PolicyConfig& config,
                  const EpochRecord& record) {
  if (record.truncated) {
    throw std::invalid_argument(
        "truncated epochs carry no estimator update");
  }
  if (record.epoch_index != state.ell) {
    throw std::invalid_argument("epoch record out of sequence");
  }
  const int n = state.n_items();
  for (const int i : record.offered) {
    const double p = record.selection_prob[i];
    if (!(p > 0.0)) {
      throw std::invalid_argument("offered item with zero selection prob");
    }
    const auto c = static_cast<double>(record.counts[i]);
    ++state.appearances[i];
    state.count_sum[i] += c;
    state.mean[i] = state.count_sum[i] / static_cast<double>(state.appearances[i]);
    state.ucb[i] = config.variant == Variant::kGeneral
                       ? Ucb2Index(state.mean[i], state.appearances[i], n, state.ell)
                       : UcbIndex(state.mean[i], state.appearances[i], n, state.ell);
    state.sum_v[i] += c / p;
  }
  state.last_selection_probs = record.selection_prob;
  ++state.ell;
}

FinalEstimates Finalize(const PolicyState& state) {
  const int64_t epochs = state.completed_epochs();
  if (epochs < 1) throw std::logic_error("no completed epoch to finalize");
  FinalEstimates out;
  out.completed_epochs = epochs;
  out.v_hat = ItemVector<double>(state.n_items());
  for (int i = 1; i <= state.n_items(); ++i) {
    out.v_hat[i] = state.sum_v[i] / static_cast<double>(epochs);
  }
  return out;
}

ItemVector<double> RunningEstimate(const PolicyState& state) {
  if (state.completed_epochs() == 0) return ItemVector<double>(state.n_items());
  return Finalize(state).v_hat;
}

double RevenueEstimate(const FinalEstimates& estimates,
                       const ItemVector<double>& revenues,
                       const Assortment& s) {
  s.CheckWithin(revenues.size());
  return PlugInRevenue(estimates.v_hat.values(), revenues.values(), s);
}

AteEstimator::AteEstimator(FinalEstimates estimates,
                           ItemVector<double> revenues)
    : estimates_(std::move(estimates)), revenues_(std::move(revenues)) {
  if (estimates_.v_hat.size() != revenues_.size()) {
    throw std::invalid_argument("estimate and revenue lengths differ");
  }
}

double AteEstimator::ParameterDifference(int i, int j) const {
  const int n = revenues_.size();
  if (i < 1 || i > n || j < 1 || j > n) {
    throw std::domain_error("item index out of range");
  }
  return estimates_.v_hat[i] - estimates_.v_hat[j];
}

double AteEstimator::RevenueDifference(const Assortment& a,
                                       const Assortment& b) const {
  return RevenueEstimate(estimates_, revenues_, a) -
         RevenueEstimate(estimates_, revenues_, b);
}

std::vector<std::vector<double>> AteEstimator::ParameterTable() const {
  const int n = revenues_.size();
  std::vector<std::vector<double>> table(
      static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) table[i - 1][j - 1] = ParameterDifference(i, j);
  }
  return table;
}

std::vector<std::vector<double>> AteEstimator::RevenueTable(
    const FeasibleFamily& family, int64_t cell_cap) const {
  const auto m = static_cast<int64_t>(family.size());
  if (m * m > cell_cap) {
    throw std::length_error("revenue ATE table would hold " +
                            std::to_string(m * m) + " cells");
  }
  const std::vector<double> r_hat =
      family.Scores(estimates_.v_hat.values(), revenues_.values());
  std::vector<std::vector<double>> table(
      static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(m)));
  for (std::size_t a = 0; a < r_hat.size(); ++a) {
    for (std::size_t b = 0; b < r_hat.size(); ++b) {
      table[a][b] = r_hat[a] - r_hat[b];
    }
  }
  return table;
}

}  // namespace mnlbandit

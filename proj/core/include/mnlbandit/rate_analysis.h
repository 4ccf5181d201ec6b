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

#ifndef MNLBANDIT_RATE_ANALYSIS_H_
#define MNLBANDIT_RATE_ANALYSIS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mnlbandit {

// Least-squares line through (log T, log metric).
struct RateFit {
  std::vector<double> x;
  std::vector<double> y;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Needs >= 3 points and strictly positive horizons and metrics
// (std::domain_error otherwise).
RateFit FitRate(std::span<const double> horizons, std::span<const double> metric);

// max_error * sqrt(regret). Both arguments must be nonnegative.
double ParetoProduct(double regret, double max_error);

// 12 ln(2/delta) sqrt(1 / (L+1)^(1-alpha)): high-probability radius for the
// IPW estimate after L completed epochs.
double EstimationRadius(double delta, double alpha, int64_t completed_epochs);

struct CoverageSample {
  double alpha = 0.0;
  int64_t completed_epochs = 0;
  std::vector<double> v_true;
  std::vector<double> v_hat;
};

// Fraction of (trial, item) pairs with |v_hat - v| <= EstimationRadius.
double CoverageFraction(std::span<const CoverageSample> trials, double delta);

// Acceptance thresholds for rate checks.
struct RateTolerances {
  double slope_tolerance = 0.15;
  double pareto_ratio = 3.0;
  double delta = 0.05;
};

// Upper limit on the fitted regret slope: max(1/2, 1 - alpha) + tol.
double RegretSlopeLimit(double alpha, const RateTolerances& tol);
// Target slope of mean |v_hat - v|: (alpha - 1) / 2.
double ErrorSlopeTarget(double alpha);

struct RateCheck {
  std::string policy;
  double alpha = 0.0;
  std::vector<double> horizons;
  RateFit regret_fit;
  RateFit error_fit;
  std::vector<double> pareto_products;
  double pareto_ratio = 0.0;
  std::optional<double> coverage;
  bool regret_ok = false;
  bool error_ok = false;
  bool pareto_ok = false;
  bool coverage_ok = true;
};

// Series of one (policy, alpha) at increasing horizons.
struct RateSeries {
  std::string policy;
  double alpha = 0.0;
  std::vector<double> horizons;
  std::vector<double> mean_regret;
  std::vector<double> mean_abs_error;
  std::vector<double> max_pair_error;
};

RateCheck CheckRates(const RateSeries& series, const RateTolerances& tol,
                     std::span<const CoverageSample> coverage = {});

nlohmann::json RateCheckToJson(const RateCheck& check,
                               const RateTolerances& tol);

// Reads summary.csv plus the inference.csv, estimates.csv and manifest.json
// written beside it, and checks every MNLExperimentUCB run with alpha in
// [0, 1/2]. Only grid points with t >= t_min are fitted.
nlohmann::json AnalyzeRunDirectory(const std::filesystem::path& summary_csv,
                                   const RateTolerances& tol,
                                   int64_t t_min = 1);

}  // namespace mnlbandit

#endif  // MNLBANDIT_RATE_ANALYSIS_H_

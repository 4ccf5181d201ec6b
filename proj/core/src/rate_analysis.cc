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

#include "mnlbandit/rate_analysis.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

#include "mnlbandit/csv.h"

namespace mnlbandit {

using nlohmann::json;

RateFit FitRate(std::span<const double> horizons, std::span<const double> metric) {
  if (horizons.size() != metric.size()) {
    throw std::invalid_argument("rate fit inputs differ in length");
  }
  if (horizons.size() < 3) throw std::domain_error("rate fit needs >= 3 points");
  RateFit fit;
  for (std::size_t k = 0; k < horizons.size(); ++k) {
    if (!(horizons[k] > 0.0) || !(metric[k] > 0.0)) {
      throw std::domain_error("rate fit needs positive horizons and metrics");
    }
    fit.x.push_back(std::log(horizons[k]));
    fit.y.push_back(std::log(metric[k]));
  }
  const auto n = static_cast<double>(fit.x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < fit.x.size(); ++k) {
    mx += fit.x[k];
    my += fit.y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < fit.x.size(); ++k) {
    sxx += (fit.x[k] - mx) * (fit.x[k] - mx);
    sxy += (fit.x[k] - mx) * (fit.y[k] - my);
    syy += (fit.y[k] - my) * (fit.y[k] - my);
  }
  if (sxx == 0.0) throw std::domain_error("rate fit needs distinct horizons");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t k = 0; k < fit.x.size(); ++k) {
    const double e = fit.y[k] - (fit.intercept + fit.slope * fit.x[k]);
    ss_res += e * e;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

double ParetoProduct(double regret, double max_error) {
  if (regret < 0.0 || max_error < 0.0) {
    throw std::domain_error("pareto product needs nonnegative inputs");
  }
  return max_error * std::sqrt(regret);
}

double EstimationRadius(double delta, double alpha, int64_t completed_epochs) {
  const double l1 = static_cast<double>(completed_epochs) + 1.0;
  return 12.0 * std::log(2.0 / delta) * std::sqrt(1.0 / std::pow(l1, 1.0 - alpha));
}

double CoverageFraction(std::span<const CoverageSample> trials, double delta) {
  int64_t inside = 0;
  int64_t total = 0;
  for (const CoverageSample& s : trials) {
    const double radius = EstimationRadius(delta, s.alpha, s.completed_epochs);
    for (std::size_t i = 0; i < s.v_true.size(); ++i) {
      ++total;
      if (std::abs(s.v_hat[i] - s.v_true[i]) <= radius) ++inside;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(inside) / static_cast<double>(total);
}

double RegretSlopeLimit(double alpha, const RateTolerances& tol) {
  return std::max(0.5, 1.0 - alpha) + tol.slope_tolerance;
}

double ErrorSlopeTarget(double alpha) { return (alpha - 1.0) / 2.0; }

RateCheck CheckRates(const RateSeries& series, const RateTolerances& tol,
                     std::span<const CoverageSample> coverage) {
  RateCheck c;
  c.policy = series.policy;
  c.alpha = series.alpha;
  c.horizons = series.horizons;
  c.regret_fit = FitRate(series.horizons, series.mean_regret);
  c.error_fit = FitRate(series.horizons, series.mean_abs_error);
  c.regret_ok = c.regret_fit.slope <= RegretSlopeLimit(series.alpha, tol);
  c.error_ok = std::abs(c.error_fit.slope - ErrorSlopeTarget(series.alpha)) <=
               tol.slope_tolerance;
  for (std::size_t k = 0; k < series.horizons.size(); ++k) {
    c.pareto_products.push_back(
        ParetoProduct(series.mean_regret[k], series.max_pair_error[k]));
  }
  const auto [lo, hi] =
      std::minmax_element(c.pareto_products.begin(), c.pareto_products.end());
  c.pareto_ratio = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
  c.pareto_ok = c.pareto_ratio <= tol.pareto_ratio;
  if (!coverage.empty()) {
    c.coverage = CoverageFraction(coverage, tol.delta);
    c.coverage_ok = *c.coverage >= 1.0 - tol.delta;
  }
  return c;
}

json RateCheckToJson(const RateCheck& c, const RateTolerances& tol) {
  auto fit_json = [](const RateFit& f) {
    return json{{"slope", f.slope}, {"intercept", f.intercept},
                {"r_squared", f.r_squared}};
  };
  json doc = {
      {"policy", c.policy},
      {"alpha", c.alpha},
      {"horizons", c.horizons},
      {"regret_fit", fit_json(c.regret_fit)},
      {"regret_slope_limit", RegretSlopeLimit(c.alpha, tol)},
      {"regret_ok", c.regret_ok},
      {"error_fit", fit_json(c.error_fit)},
      {"error_slope_target", ErrorSlopeTarget(c.alpha)},
      {"error_slope_tolerance", tol.slope_tolerance},
      {"error_ok", c.error_ok},
      {"pareto_products", c.pareto_products},
      {"pareto_ratio", c.pareto_ratio},
      {"pareto_ratio_limit", tol.pareto_ratio},
      {"pareto_ok", c.pareto_ok},
  };
  if (c.coverage) {
    doc["coverage"] = *c.coverage;
    doc["coverage_required"] = 1.0 - tol.delta;
    doc["coverage_ok"] = c.coverage_ok;
  }
  doc["pass"] = c.regret_ok && c.error_ok && c.pareto_ok && c.coverage_ok;
  return doc;
}

json AnalyzeRunDirectory(const std::filesystem::path& summary_csv,
                         const RateTolerances& tol, int64_t t_min) {
  const auto dir = summary_csv.parent_path();
  const CsvTable summary = ReadCsv(summary_csv);
  const CsvTable inference = ReadCsv(dir / "inference.csv");

  using Key = std::tuple<std::string, double, int64_t>;
  std::map<Key, std::pair<double, double>> inference_at;
  {
    const auto cp = inference.Column("policy"), ca = inference.Column("alpha"),
               ct = inference.Column("t"), ce = inference.Column("mean_abs_err_v"),
               cm = inference.Column("max_pair_err_v");
    for (const auto& row : inference.rows) {
      const auto alpha = ParseOptionalDouble(row[ca]);
      if (!alpha) continue;
      inference_at[{row[cp], *alpha, std::stoll(row[ct])}] = {
          *ParseOptionalDouble(row[ce]), *ParseOptionalDouble(row[cm])};
    }
  }

  std::map<std::pair<std::string, double>, RateSeries> series;
  {
    const auto cp = summary.Column("policy"), ca = summary.Column("alpha"),
               ct = summary.Column("t"), cr = summary.Column("mean_cum_regret");
    for (const auto& row : summary.rows) {
      const auto alpha = ParseOptionalDouble(row[ca]);
      if (!alpha || *alpha > 0.5) continue;
      if (row[cp].rfind("MNLExperimentUCB", 0) != 0) continue;
      const int64_t t = std::stoll(row[ct]);
      if (t < t_min) continue;
      const auto it = inference_at.find({row[cp], *alpha, t});
      if (it == inference_at.end()) continue;
      RateSeries& s = series[{row[cp], *alpha}];
      s.policy = row[cp];
      s.alpha = *alpha;
      s.horizons.push_back(static_cast<double>(t));
      s.mean_regret.push_back(*ParseOptionalDouble(row[cr]));
      s.mean_abs_error.push_back(it->second.first);
      s.max_pair_error.push_back(it->second.second);
    }
  }

  // Coverage at the horizon from final estimates and per-trial L.
  std::map<std::pair<std::string, double>, std::vector<CoverageSample>> coverage;
  const auto estimates_path = dir / "estimates.csv";
  const auto manifest_path = dir / "manifest.json";
  if (std::filesystem::exists(estimates_path) &&
      std::filesystem::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    const json manifest = json::parse(in);
    std::map<std::tuple<std::string, double, int>, int64_t> epochs;
    for (const json& t : manifest.at("trials")) {
      if (t.at("alpha").is_null()) continue;
      epochs[{t.at("policy").get<std::string>(), t.at("alpha").get<double>(),
              t.at("trial").get<int>()}] = t.at("completed_epochs").get<int64_t>();
    }
    const CsvTable est = ReadCsv(estimates_path);
    const auto cp = est.Column("policy"), ca = est.Column("alpha"),
               ctr = est.Column("trial"), cvt = est.Column("v_true"),
               cvh = est.Column("v_hat");
    std::map<std::tuple<std::string, double, int>, CoverageSample> samples;
    for (const auto& row : est.rows) {
      const auto alpha = ParseOptionalDouble(row[ca]);
      const auto v_hat = ParseOptionalDouble(row[cvh]);
      if (!alpha || !v_hat) continue;
      const auto key = std::make_tuple(row[cp], *alpha, std::stoi(row[ctr]));
      CoverageSample& s = samples[key];
      s.alpha = *alpha;
      s.completed_epochs = epochs.count(key) ? epochs.at(key) : 0;
      s.v_true.push_back(*ParseOptionalDouble(row[cvt]));
      s.v_hat.push_back(*v_hat);
    }
    for (auto& [key, s] : samples) {
      coverage[{std::get<0>(key), std::get<1>(key)}].push_back(std::move(s));
    }
  }

  json checks = json::array();
  bool all_pass = true;
  for (const auto& [key, s] : series) {
    if (s.horizons.size() < 3) continue;
    const auto it = coverage.find(key);
    const std::span<const CoverageSample> cov =
        it == coverage.end() ? std::span<const CoverageSample>()
                             : std::span<const CoverageSample>(it->second);
    const RateCheck c = CheckRates(s, tol, cov);
    json doc = RateCheckToJson(c, tol);
    all_pass = all_pass && doc.at("pass").get<bool>();
    checks.push_back(std::move(doc));
  }
  return {{"source", summary_csv.string()},
          {"t_min", t_min},
          {"delta", tol.delta},
          {"checks", checks},
          {"pass", all_pass && !checks.empty()}};
}

}  // namespace mnlbandit

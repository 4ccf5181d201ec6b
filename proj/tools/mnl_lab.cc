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

// mnl_lab: run MNL-bandit experiments and check rates on their output.
//
//   mnl_lab run --config cfg.json [--out-dir DIR] [--workers N] [--seed S]
//   mnl_lab rates --in DIR/summary.csv --out rates.json [--delta D] [--t-min T]
//   mnl_lab instance --n-items N --seed S --out inst.json

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mnlbandit/harness.h"
#include "mnlbandit/mnl_model.h"
#include "mnlbandit/rate_analysis.h"

namespace {

int RunCommand(const std::string& config_path,
               const std::optional<std::string>& out_dir,
               const std::optional<int>& workers,
               const std::optional<uint64_t>& seed) {
  mnlbandit::ExperimentConfig config =
      mnlbandit::ExperimentConfig::Load(config_path);
  if (out_dir) config.output_dir = *out_dir;
  if (workers) config.workers = *workers;
  if (seed) config.master_seed = *seed;
  config.Validate();

  const mnlbandit::ExperimentResult result =
      mnlbandit::RunExperiment(config, config.workers);
  mnlbandit::WriteOutputs(result, config.output_dir);
  std::cerr << "ran " << result.trials.size() << " trials in "
            << result.wall_clock_seconds << " s -> " << config.output_dir
            << "\n";
  if (!result.failures.empty()) {
    std::cerr << "warning: " << result.failures.size()
              << " trial(s) failed; see manifest.json\n";
  }
  return 0;
}

int RatesCommand(const std::string& in, const std::string& out, double delta,
                 int64_t t_min) {
  mnlbandit::RateTolerances tol;
  tol.delta = delta;
  const nlohmann::json report = mnlbandit::AnalyzeRunDirectory(in, tol, t_min);
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot write " + out);
  os << report.dump(2) << '\n';
  for (const auto& check : report.at("checks")) {
    std::cout << (check.at("pass").get<bool>() ? "PASS " : "FAIL ")
              << check.at("policy").get<std::string>()
              << " alpha=" << check.at("alpha").get<double>()
              << " regret_slope=" << check.at("regret_fit").at("slope").get<double>()
              << " error_slope=" << check.at("error_fit").at("slope").get<double>()
              << " pareto_ratio=" << check.at("pareto_ratio").get<double>() << "\n";
  }
  return report.at("pass").get<bool>() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MNL-bandit simulation laboratory"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config");
  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<int> workers;
  std::optional<uint64_t> seed;
  run->add_option("--config", config_path, "Experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--out-dir", out_dir, "Output directory (overrides config)");
  run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Master seed override");

  auto* rates = app.add_subcommand("rates", "Fit rates on a run's summary.csv");
  std::string rates_in;
  std::string rates_out = "rates.json";
  double delta = 0.05;
  int64_t t_min = 1;
  rates->add_option("--in", rates_in, "summary.csv of a run")
      ->required()
      ->check(CLI::ExistingFile);
  rates->add_option("--out", rates_out, "Output JSON report");
  rates->add_option("--delta", delta, "Confidence level for coverage")
      ->check(CLI::Range(1e-12, 1.0));
  rates->add_option("--t-min", t_min, "Ignore grid points below this t");

  auto* inst = app.add_subcommand("instance", "Draw a random instance file");
  int n_items = 10;
  uint64_t inst_seed = 0;
  std::string inst_out;
  std::vector<double> v_range{0.1, 1.0};
  std::vector<double> r_range{0.5, 1.5};
  inst->add_option("--n-items", n_items, "Number of items")->check(CLI::PositiveNumber);
  inst->add_option("--seed", inst_seed, "Random seed");
  inst->add_option("--v-range", v_range, "Attraction range lo hi")->expected(2);
  inst->add_option("--r-range", r_range, "Revenue range lo hi")->expected(2);
  inst->add_option("--out", inst_out, "Output instance JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return RunCommand(config_path, out_dir, workers, seed);
    if (*rates) return RatesCommand(rates_in, rates_out, delta, t_min);
    if (*inst) {
      mnlbandit::Rng rng(inst_seed);
      const auto instance = mnlbandit::RandomInstance(
          n_items, {v_range[0], v_range[1]}, {r_range[0], r_range[1]}, rng);
      mnlbandit::SaveInstance(instance, inst_out);
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}

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

#ifndef MNLBANDIT_HARNESS_H_
#define MNLBANDIT_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mnlbandit/baselines.h"
#include "mnlbandit/feasible_family.h"
#include "mnlbandit/mnl_experiment_ucb.h"
#include "mnlbandit/mnl_model.h"

namespace mnlbandit {

enum class PolicyKind { kExperimentUcb, kBanditEe, kExp3Eg, kOracle };

// One policy entry of an experiment config. JSON keys: name, label, variant,
// k_star, b_bound, alphas, exp3_alpha, exp3_delta.
struct PolicySpec {
  PolicyKind kind = PolicyKind::kExperimentUcb;
  std::string label;  // CSV "policy" column
  Variant variant = Variant::kStandard;
  std::optional<int> k_star;
  std::optional<double> b_bound;
  std::optional<std::vector<double>> alphas;  // overrides the config grid
  Exp3EgParams exp3;

  bool UsesAlpha() const { return kind == PolicyKind::kExperimentUcb; }

  static PolicySpec FromJson(const nlohmann::json& doc);
  nlohmann::json ToJson() const;
};

// A policy paired with one exploration exponent (nullopt for policies
// without one).
struct RunSpec {
  PolicySpec policy;
  std::optional<double> alpha;

  PolicyConfig ToPolicyConfig() const;
  bool OutOfTheory() const { return alpha && *alpha > 0.5; }
};

struct InstanceSource {
  enum class Type { kRandom, kFile };
  Type type = Type::kRandom;
  Interval v_range{0.1, 1.0};
  Interval r_range{0.5, 1.5};
  std::filesystem::path path;
};

struct ExperimentConfig {
  int n_items = 10;
  int max_size = 5;
  int64_t horizon = 1000;
  int trials = 20;
  std::vector<PolicySpec> policies;
  std::vector<double> alphas{0.0, 0.25, 0.5, 1.0};
  uint64_t master_seed = 0;
  InstanceSource instance_source;
  std::vector<int64_t> metric_grid;  // empty: default grid
  std::string output_dir = "out";
  int workers = 1;

  // Unknown keys anywhere in the document are rejected with
  // std::invalid_argument.
  static ExperimentConfig FromJson(const nlohmann::json& doc);
  static ExperimentConfig Load(const std::filesystem::path& path);
  nlohmann::json ToJson() const;

  // Throws std::invalid_argument describing the first inconsistency.
  void Validate() const;

  // Every step up to 10^4; beyond that ~400 log-spaced points plus T.
  std::vector<int64_t> ResolvedGrid() const;
  std::vector<RunSpec> Runs() const;
};

struct EpochLogEntry {
  int64_t index = 0;
  int64_t start = 0;  // first time step
  int64_t length = 0;
  Assortment offered;
  Assortment optimistic;
  OfferKind kind = OfferKind::kOptimistic;
  bool truncated = false;
};

struct TrialSeeds {
  uint64_t instance = 0;
  uint64_t selection = 0;
  uint64_t customer = 0;
};

// Instance seed depends on (master, trial) only, so every policy faces the
// same instance in a given trial. Policy streams add the label and alpha.
TrialSeeds DeriveTrialSeeds(uint64_t master_seed, int trial_index,
                            const RunSpec& run);

struct TrialResult {
  std::string policy;
  std::optional<double> alpha;
  int trial = 0;
  TrialSeeds seeds;
  std::string instance_digest;

  std::vector<int64_t> grid;
  std::vector<double> cum_regret;
  std::vector<int> offered_size;
  std::vector<std::optional<double>> mse_v;
  std::vector<std::optional<double>> mse_r;
  // Parameter estimate in force at each grid point (empty for policies
  // without a parameter estimator).
  std::vector<std::vector<double>> v_hat_grid;

  ItemVector<double> v_true;
  std::optional<ItemVector<double>> v_hat;
  int64_t completed_epochs = 0;
  int64_t exploratory_epochs = 0;
  // Steps whose offered set out-earned the best feasible set.
  int64_t negative_gap_steps = 0;
  std::vector<EpochLogEntry> epochs;
};

// Shared read-only inputs of one trial.
struct TrialContext {
  const MnlInstance* instance = nullptr;
  const FeasibleFamily* family = nullptr;
  std::vector<int64_t> grid;
};

MnlInstance TrialInstance(const ExperimentConfig& config, int trial_index);

TrialResult RunTrial(const ExperimentConfig& config, const RunSpec& run,
                     int trial_index);
// Same as above with explicit instance/family/grid; seeds still come from
// (config.master_seed, trial_index, run).
TrialResult RunTrial(const TrialContext& context, const RunSpec& run,
                     const TrialSeeds& seeds, int64_t horizon,
                     int trial_index);

// Runs an epoch-based policy for exactly n_epochs completed epochs with no
// horizon. Used for estimator studies that condition on L.
PolicyState SimulateEpochs(const MnlInstance& instance,
                           const FeasibleFamily& family,
                           const PolicyConfig& config, int64_t n_epochs,
                           Rng& selection_rng, Rng& customer_rng);

struct SummaryRow {
  std::string policy;
  std::optional<double> alpha;
  int64_t t = 0;
  double mean_cum_regret = 0.0;
  double sd_cum_regret = 0.0;
  std::optional<double> mean_mse_v, sd_mse_v, mean_mse_r, sd_mse_r;
};

struct InferenceRow {
  std::string policy;
  std::optional<double> alpha;
  int64_t t = 0;
  double mean_abs_err_v = 0.0;  // over trials and items
  double max_pair_err_v = 0.0;  // max over i<j of mean |dv_hat - dv|
};

struct TrialFailure {
  std::string policy;
  std::optional<double> alpha;
  int trial = 0;
  std::string message;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<RunSpec> runs;
  std::vector<TrialResult> trials;  // ordered by (run, trial)
  std::vector<TrialFailure> failures;
  std::vector<SummaryRow> summary;
  std::vector<InferenceRow> inference;
  double wall_clock_seconds = 0.0;
};

// Sample mean and standard deviation (n - 1; 0 for a single trial) of each
// series across trials of a run.
std::vector<SummaryRow> Summarize(const std::vector<TrialResult>& trials);
std::vector<InferenceRow> SummarizeInference(
    const std::vector<TrialResult>& trials);

// Trials execute on `workers` threads; results merge by (run, trial) so the
// output does not depend on scheduling.
ExperimentResult RunExperiment(const ExperimentConfig& config, int workers = 1);

// per_step.csv, summary.csv, estimates.csv, inference.csv, manifest.json.
void WriteOutputs(const ExperimentResult& result,
                  const std::filesystem::path& dir);

nlohmann::json BuildManifest(const ExperimentResult& result);

std::string LibraryVersion();

}  // namespace mnlbandit

#endif  // MNLBANDIT_HARNESS_H_

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

#include "mnlbandit/harness.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "mnlbandit/csv.h"
#include "mnlbandit/epoch_engine.h"
#include "mnlbandit/random.h"

#ifndef MNLBANDIT_VERSION_STRING
#define MNLBANDIT_VERSION_STRING "unknown"
#endif

namespace mnlbandit {

using nlohmann::json;

std::string LibraryVersion() { return MNLBANDIT_VERSION_STRING; }

namespace {

void RejectUnknownKeys(const json& doc, const std::set<std::string>& allowed,
                       const std::string& where) {
  if (!doc.is_object()) throw std::invalid_argument(where + " must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (!allowed.contains(key)) {
      throw std::invalid_argument("unknown key '" + key + "' in " + where);
    }
  }
}

Interval ParseInterval(const json& doc, const std::string& what) {
  const auto v = doc.get<std::vector<double>>();
  if (v.size() != 2) throw std::invalid_argument(what + " must be [lo, hi]");
  return {v[0], v[1]};
}

std::string_view KindName(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kExperimentUcb:
      return "MNLExperimentUCB";
    case PolicyKind::kBanditEe:
      return "MNLBanditEE";
    case PolicyKind::kExp3Eg:
      return "EXP3EG";
    case PolicyKind::kOracle:
      return "Oracle";
  }
  return "?";
}

PolicyKind ParseKind(const std::string& name) {
  for (const PolicyKind k : {PolicyKind::kExperimentUcb, PolicyKind::kBanditEe,
                             PolicyKind::kExp3Eg, PolicyKind::kOracle}) {
    if (KindName(k) == name) return k;
  }
  throw std::invalid_argument("unknown policy name '" + name + "'");
}

std::string DefaultLabel(const PolicySpec& spec) {
  std::string label(KindName(spec.kind));
  if (spec.kind == PolicyKind::kExperimentUcb) {
    if (spec.variant == Variant::kKStar) label += "-KStar";
    if (spec.variant == Variant::kGeneral) label += "-General";
  }
  return label;
}

json OptionalToJson(const std::optional<double>& x) {
  return x ? json(*x) : json(nullptr);
}

}  // namespace

PolicySpec PolicySpec::FromJson(const json& doc) {
  RejectUnknownKeys(doc,
                    {"name", "label", "variant", "k_star", "b_bound", "alphas",
                     "exp3_alpha", "exp3_delta"},
                    "policy entry");
  PolicySpec spec;
  spec.kind = ParseKind(doc.at("name").get<std::string>());
  if (doc.contains("variant")) {
    spec.variant = ParseVariant(doc.at("variant").get<std::string>());
  }
  if (doc.contains("k_star")) spec.k_star = doc.at("k_star").get<int>();
  if (doc.contains("b_bound")) spec.b_bound = doc.at("b_bound").get<double>();
  if (doc.contains("alphas")) {
    spec.alphas = doc.at("alphas").get<std::vector<double>>();
  }
  if (doc.contains("exp3_alpha")) spec.exp3.decay = doc.at("exp3_alpha").get<double>();
  if (doc.contains("exp3_delta")) {
    spec.exp3.exploration_rate = doc.at("exp3_delta").get<double>();
  }
  spec.label = doc.contains("label") ? doc.at("label").get<std::string>()
                                     : DefaultLabel(spec);
  return spec;
}

json PolicySpec::ToJson() const {
  json doc = {{"name", KindName(kind)}, {"label", label}};
  if (kind == PolicyKind::kExperimentUcb) doc["variant"] = VariantName(variant);
  if (k_star) doc["k_star"] = *k_star;
  if (b_bound) doc["b_bound"] = *b_bound;
  if (alphas) doc["alphas"] = *alphas;
  if (kind == PolicyKind::kExp3Eg) {
    doc["exp3_alpha"] = exp3.decay;
    doc["exp3_delta"] = exp3.exploration_rate;
  }
  return doc;
}

PolicyConfig RunSpec::ToPolicyConfig() const {
  PolicyConfig pc;
  pc.alpha = alpha.value_or(0.0);
  pc.k_star = policy.k_star;
  pc.b_bound = policy.b_bound;
  if (policy.kind == PolicyKind::kExperimentUcb) {
    pc.variant = policy.variant;
  } else {
    pc.complement_sampling = false;
  }
  return pc;
}

ExperimentConfig ExperimentConfig::FromJson(const json& doc) {
  RejectUnknownKeys(doc,
                    {"n_items", "max_size", "horizon", "trials", "policies",
                     "alphas", "master_seed", "instance_source", "metric_grid",
                     "output_dir", "workers"},
                    "experiment config");
  ExperimentConfig c;
  if (doc.contains("n_items")) c.n_items = doc.at("n_items").get<int>();
  if (doc.contains("max_size")) c.max_size = doc.at("max_size").get<int>();
  if (doc.contains("horizon")) c.horizon = doc.at("horizon").get<int64_t>();
  if (doc.contains("trials")) c.trials = doc.at("trials").get<int>();
  if (doc.contains("alphas")) c.alphas = doc.at("alphas").get<std::vector<double>>();
  if (doc.contains("master_seed")) c.master_seed = doc.at("master_seed").get<uint64_t>();
  if (doc.contains("output_dir")) c.output_dir = doc.at("output_dir").get<std::string>();
  if (doc.contains("workers")) c.workers = doc.at("workers").get<int>();
  if (doc.contains("metric_grid") && !doc.at("metric_grid").is_null()) {
    c.metric_grid = doc.at("metric_grid").get<std::vector<int64_t>>();
  }
  for (const json& p : doc.at("policies")) c.policies.push_back(PolicySpec::FromJson(p));
  if (doc.contains("instance_source")) {
    const json& src = doc.at("instance_source");
    RejectUnknownKeys(src, {"type", "v_range", "r_range", "path"},
                      "instance_source");
    const auto type = src.at("type").get<std::string>();
    if (type == "random") {
      c.instance_source.type = InstanceSource::Type::kRandom;
      if (src.contains("path")) {
        throw std::invalid_argument("random instance_source takes no path");
      }
      if (src.contains("v_range")) {
        c.instance_source.v_range = ParseInterval(src.at("v_range"), "v_range");
      }
      if (src.contains("r_range")) {
        c.instance_source.r_range = ParseInterval(src.at("r_range"), "r_range");
      }
    } else if (type == "file") {
      c.instance_source.type = InstanceSource::Type::kFile;
      c.instance_source.path = src.at("path").get<std::string>();
    } else {
      throw std::invalid_argument("instance_source type must be random|file");
    }
  }
  return c;
}

ExperimentConfig ExperimentConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return FromJson(json::parse(in));
}

json ExperimentConfig::ToJson() const {
  json policies_json = json::array();
  for (const auto& p : policies) policies_json.push_back(p.ToJson());
  json src;
  if (instance_source.type == InstanceSource::Type::kRandom) {
    src = {{"type", "random"},
           {"v_range", {instance_source.v_range.lo, instance_source.v_range.hi}},
           {"r_range", {instance_source.r_range.lo, instance_source.r_range.hi}}};
  } else {
    src = {{"type", "file"}, {"path", instance_source.path.string()}};
  }
  json doc = {{"n_items", n_items},   {"max_size", max_size},
              {"horizon", horizon},   {"trials", trials},
              {"policies", policies_json}, {"alphas", alphas},
              {"master_seed", master_seed}, {"instance_source", src},
              {"output_dir", output_dir}, {"workers", workers}};
  doc["metric_grid"] = metric_grid.empty() ? json(nullptr) : json(metric_grid);
  return doc;
}

void ExperimentConfig::Validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (n_items < 1) fail("n_items must be >= 1");
  if (max_size < 1) fail("max_size must be >= 1");
  if (horizon < 1) fail("horizon must be >= 1");
  if (trials < 1) fail("trials must be >= 1");
  if (workers < 1) fail("workers must be >= 1");
  if (policies.empty()) fail("at least one policy is required");
  if (FeasibleFamily::CountSubsets(n_items, max_size, false) >
      kDefaultEnumerationCap) {
    fail("feasible family exceeds the enumeration cap");
  }
  for (const int64_t t : metric_grid) {
    if (t < 1 || t > horizon) fail("metric_grid entries must lie in [1, horizon]");
  }
  if (instance_source.type == InstanceSource::Type::kRandom) {
    const auto& s = instance_source;
    if (!(s.v_range.lo > 0.0) || !(s.r_range.lo > 0.0)) {
      fail("instance ranges need positive lower bounds");
    }
    if (s.v_range.hi < s.v_range.lo || s.r_range.hi < s.r_range.lo) {
      fail("instance range upper bound below lower bound");
    }
  } else {
    const MnlInstance inst = LoadInstance(instance_source.path);
    if (inst.n_items() != n_items) fail("instance file n_items mismatch");
  }
  std::set<std::pair<std::string, std::string>> seen;
  for (const RunSpec& run : Runs()) {
    if (run.policy.UsesAlpha()) run.ToPolicyConfig().Validate(n_items);
    const auto key = std::make_pair(run.policy.label, FormatOptional(run.alpha));
    if (!seen.insert(key).second) {
      fail("duplicate policy/alpha pair " + key.first + " " + key.second);
    }
    if (run.policy.kind == PolicyKind::kExp3Eg &&
        (run.policy.exp3.decay < 0.0 || run.policy.exp3.exploration_rate < 0.0)) {
      fail("EXP3EG parameters must be nonnegative");
    }
  }
}

std::vector<int64_t> ExperimentConfig::ResolvedGrid() const {
  if (!metric_grid.empty()) {
    std::vector<int64_t> g = metric_grid;
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
  }
  std::vector<int64_t> g;
  if (horizon <= 10'000) {
    for (int64_t t = 1; t <= horizon; ++t) g.push_back(t);
    return g;
  }
  constexpr int kPoints = 400;
  const double top = std::log(static_cast<double>(horizon));
  for (int k = 0; k < kPoints; ++k) {
    const double x = top * k / (kPoints - 1);
    g.push_back(std::clamp<int64_t>(std::llround(std::exp(x)), 1, horizon));
  }
  g.push_back(horizon);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

std::vector<RunSpec> ExperimentConfig::Runs() const {
  std::vector<RunSpec> runs;
  for (const PolicySpec& p : policies) {
    if (p.UsesAlpha()) {
      for (const double a : p.alphas.value_or(alphas)) runs.push_back({p, a});
    } else {
      runs.push_back({p, std::nullopt});
    }
  }
  return runs;
}

TrialSeeds DeriveTrialSeeds(uint64_t master_seed, int trial_index,
                            const RunSpec& run) {
  const auto trial = static_cast<uint64_t>(trial_index);
  const uint64_t label = HashLabel(run.policy.label);
  const uint64_t alpha =
      run.alpha ? std::bit_cast<uint64_t>(*run.alpha) : 0xfffffffffffffffULL;
  TrialSeeds s;
  s.instance = DeriveSeed(master_seed, {HashLabel("instance"), trial});
  s.selection = DeriveSeed(master_seed, {HashLabel("selection"), trial, label, alpha});
  s.customer = DeriveSeed(master_seed, {HashLabel("customer"), trial, label, alpha});
  return s;
}

MnlInstance TrialInstance(const ExperimentConfig& config, int trial_index) {
  if (config.instance_source.type == InstanceSource::Type::kFile) {
    return LoadInstance(config.instance_source.path);
  }
  Rng rng(DeriveSeed(config.master_seed,
                     {HashLabel("instance"), static_cast<uint64_t>(trial_index)}));
  return RandomInstance(config.n_items, config.instance_source.v_range,
                        config.instance_source.r_range, rng);
}

namespace {

// Records series values at grid points as time advances.
class GridRecorder {
 public:
  GridRecorder(const std::vector<int64_t>& grid, TrialResult& out)
      : grid_(grid), out_(out) {}

  bool Due(int64_t t) const { return next_ < grid_.size() && grid_[next_] == t; }

  void Record(double cum_regret, int offered_size,
              std::optional<double> mse_v, std::optional<double> mse_r,
              const std::vector<double>* v_hat) {
    out_.cum_regret.push_back(cum_regret);
    out_.offered_size.push_back(offered_size);
    out_.mse_v.push_back(mse_v);
    out_.mse_r.push_back(mse_r);
    if (v_hat) out_.v_hat_grid.push_back(*v_hat);
    ++next_;
  }

 private:
  const std::vector<int64_t>& grid_;
  TrialResult& out_;
  std::size_t next_ = 0;
};

double MeanSquaredError(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s / static_cast<double>(a.size());
}

void RunEpochPolicy(const TrialContext& ctx, const RunSpec& run,
                    const TrialSeeds& seeds, int64_t horizon,
                    const std::vector<double>& true_scores, double r_star,
                    TrialResult& out) {
  const MnlInstance& inst = *ctx.instance;
  const FeasibleFamily& family = *ctx.family;
  const int n = inst.n_items();
  const bool is_ee = run.policy.kind == PolicyKind::kBanditEe;
  const PolicyConfig pc = run.ToPolicyConfig();
  PolicyState state(n);
  Rng selection_rng(seeds.selection);
  Rng customer_rng(seeds.customer);
  GridRecorder rec(ctx.grid, out);

  std::vector<double> estimate(static_cast<std::size_t>(n), 0.0);
  bool estimate_changed = true;
  double mse_v = 0.0;
  double mse_r = 0.0;
  double cum = 0.0;

  for (int64_t t = 1; t <= horizon;) {
    OfferDecision d;
    if (is_ee) {
      d.optimistic = EeSelect(state, family, inst.revenues());
      d.offered = d.optimistic;
      d.selection_probs = ItemVector<double>(n, 0.0);
      for (const int i : d.offered) d.selection_probs[i] = 1.0;
    } else {
      d = SelectAssortment(state, pc, family, inst.revenues(), selection_rng);
    }
    state.last_star = d.optimistic;
    const EpochRun epoch = RunEpoch(inst, d.offered, d.selection_probs,
                                    state.ell, t, horizon, customer_rng);
    const EpochRecord& er = epoch.record;
    const double gap = r_star - ExpectedRevenue(inst, d.offered);
    if (gap < 0.0) out.negative_gap_steps += er.length;
    if (d.kind == OfferKind::kExploratory) ++out.exploratory_epochs;
    out.epochs.push_back({er.epoch_index, t, er.length, d.offered,
                          d.optimistic, d.kind, er.truncated});

    for (int64_t k = 0; k < er.length; ++k, ++t) {
      cum += gap;
      if (k + 1 == er.length && !er.truncated) {
        ObserveEpoch(state, pc, er);
        const auto fresh = is_ee ? state.mean : RunningEstimate(state);
        estimate.assign(fresh.values().begin(), fresh.values().end());
        estimate_changed = true;
      }
      if (rec.Due(t)) {
        if (estimate_changed) {
          mse_v = MeanSquaredError(estimate, inst.attractions().values());
          mse_r = MeanSquaredError(
              family.Scores(estimate, inst.revenues().values()), true_scores);
          estimate_changed = false;
        }
        rec.Record(cum, d.offered.size(), mse_v, mse_r, &estimate);
      }
    }
  }
  out.completed_epochs = state.completed_epochs();
  out.v_hat = ItemVector<double>(estimate);
}

void RunExp3Policy(const TrialContext& ctx, const RunSpec& run,
                   const TrialSeeds& seeds, int64_t horizon,
                   const std::vector<double>& true_scores, double r_star,
                   TrialResult& out) {
  const MnlInstance& inst = *ctx.instance;
  const FeasibleFamily& family = *ctx.family;
  Exp3Eg bandit(family, inst.max_revenue(), run.policy.exp3);
  Rng selection_rng(seeds.selection);
  Rng customer_rng(seeds.customer);
  GridRecorder rec(ctx.grid, out);
  std::vector<double> arm_means(true_scores.size(), 0.0);
  double cum = 0.0;
  for (int64_t t = 1; t <= horizon; ++t) {
    const int arm = bandit.Select(selection_rng);
    const Assortment& s = family.at(arm);
    const ChoiceOutcome c = SampleChoice(inst, s, customer_rng);
    const double reward = c.IsNoPurchase() ? 0.0 : inst.r(c.chosen);
    bandit.Update(arm, reward);
    arm_means[static_cast<std::size_t>(arm)] = bandit.MeanReward(arm);
    const double gap = r_star - true_scores[static_cast<std::size_t>(arm)];
    cum += gap;
    if (rec.Due(t)) {
      rec.Record(cum, s.size(), std::nullopt,
                 MeanSquaredError(arm_means, true_scores), nullptr);
    }
  }
  out.completed_epochs = 0;
}

void RunOraclePolicy(const TrialContext& ctx, const TrialSeeds& seeds,
                     int64_t horizon, const Assortment& best, double r_star,
                     TrialResult& out) {
  Rng customer_rng(seeds.customer);
  GridRecorder rec(ctx.grid, out);
  const double gap = r_star - ExpectedRevenue(*ctx.instance, best);
  double cum = 0.0;
  for (int64_t t = 1; t <= horizon; ++t) {
    SampleChoice(*ctx.instance, best, customer_rng);
    cum += gap;
    if (rec.Due(t)) rec.Record(cum, best.size(), std::nullopt, std::nullopt, nullptr);
  }
}

}  // namespace

TrialResult RunTrial(const TrialContext& context, const RunSpec& run,
                     const TrialSeeds& seeds, int64_t horizon,
                     int trial_index) {
  const MnlInstance& inst = *context.instance;
  const FeasibleFamily& family = *context.family;
  if (family.n_items() != inst.n_items()) {
    throw std::invalid_argument("family and instance sizes differ");
  }
  TrialResult out;
  out.policy = run.policy.label;
  out.alpha = run.alpha;
  out.trial = trial_index;
  out.seeds = seeds;
  out.instance_digest = inst.Digest();
  out.grid = context.grid;
  out.v_true = inst.attractions();

  const std::vector<double> true_scores =
      family.Scores(inst.attractions().values(), inst.revenues().values());
  const ScoredAssortment best = family.ArgmaxRevenue(
      inst.attractions().values(), inst.revenues().values());

  switch (run.policy.kind) {
    case PolicyKind::kExperimentUcb:
    case PolicyKind::kBanditEe:
      RunEpochPolicy(context, run, seeds, horizon, true_scores, best.score, out);
      break;
    case PolicyKind::kExp3Eg:
      RunExp3Policy(context, run, seeds, horizon, true_scores, best.score, out);
      break;
    case PolicyKind::kOracle:
      RunOraclePolicy(context, seeds, horizon, best.set, best.score, out);
      break;
  }
  return out;
}

TrialResult RunTrial(const ExperimentConfig& config, const RunSpec& run,
                     int trial_index) {
  const MnlInstance inst = TrialInstance(config, trial_index);
  const FeasibleFamily family(config.n_items, config.max_size);
  TrialContext ctx{&inst, &family, config.ResolvedGrid()};
  return RunTrial(ctx, run,
                  DeriveTrialSeeds(config.master_seed, trial_index, run),
                  config.horizon, trial_index);
}

PolicyState SimulateEpochs(const MnlInstance& instance,
                           const FeasibleFamily& family,
                           const PolicyConfig& config, int64_t n_epochs,
                           Rng& selection_rng, Rng& customer_rng) {
  PolicyState state(instance.n_items());
  for (int64_t e = 0; e < n_epochs; ++e) {
    const OfferDecision d = SelectAssortment(state, config, family,
                                             instance.revenues(), selection_rng);
    state.last_star = d.optimistic;
    const EpochRun run = RunEpoch(instance, d.offered, d.selection_probs,
                                  state.ell, 1, kUnboundedHorizon, customer_rng);
    ObserveEpoch(state, config, run.record);
  }
  return state;
}

namespace {

// Consecutive trials sharing (policy, alpha).
std::vector<std::pair<std::size_t, std::size_t>> GroupRuns(
    const std::vector<TrialResult>& trials) {
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  std::size_t begin = 0;
  for (std::size_t k = 1; k <= trials.size(); ++k) {
    if (k == trials.size() || trials[k].policy != trials[begin].policy ||
        trials[k].alpha != trials[begin].alpha) {
      groups.emplace_back(begin, k);
      begin = k;
    }
  }
  return groups;
}

std::pair<double, double> MeanSd(const std::vector<double>& xs) {
  const auto n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (const double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

std::vector<SummaryRow> Summarize(const std::vector<TrialResult>& trials) {
  std::vector<SummaryRow> rows;
  for (const auto& [b, e] : GroupRuns(trials)) {
    const TrialResult& head = trials[b];
    for (std::size_t g = 0; g < head.grid.size(); ++g) {
      SummaryRow row;
      row.policy = head.policy;
      row.alpha = head.alpha;
      row.t = head.grid[g];
      std::vector<double> regret, mv, mr;
      bool has_v = true;
      bool has_r = true;
      for (std::size_t k = b; k < e; ++k) {
        regret.push_back(trials[k].cum_regret[g]);
        if (trials[k].mse_v[g]) mv.push_back(*trials[k].mse_v[g]); else has_v = false;
        if (trials[k].mse_r[g]) mr.push_back(*trials[k].mse_r[g]); else has_r = false;
      }
      std::tie(row.mean_cum_regret, row.sd_cum_regret) = MeanSd(regret);
      if (has_v) {
        const auto [m, s] = MeanSd(mv);
        row.mean_mse_v = m;
        row.sd_mse_v = s;
      }
      if (has_r) {
        const auto [m, s] = MeanSd(mr);
        row.mean_mse_r = m;
        row.sd_mse_r = s;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<InferenceRow> SummarizeInference(
    const std::vector<TrialResult>& trials) {
  std::vector<InferenceRow> rows;
  for (const auto& [b, e] : GroupRuns(trials)) {
    const TrialResult& head = trials[b];
    if (head.v_hat_grid.empty()) continue;
    const int n = head.v_true.size();
    const auto m = static_cast<double>(e - b);
    for (std::size_t g = 0; g < head.grid.size(); ++g) {
      InferenceRow row;
      row.policy = head.policy;
      row.alpha = head.alpha;
      row.t = head.grid[g];
      double abs_sum = 0.0;
      std::vector<double> pair_err(static_cast<std::size_t>(n * n), 0.0);
      for (std::size_t k = b; k < e; ++k) {
        const auto& est = trials[k].v_hat_grid[g];
        const auto truth = trials[k].v_true.values();
        for (int i = 0; i < n; ++i) {
          const double di = est[i] - truth[i];
          abs_sum += std::abs(di);
          for (int j = i + 1; j < n; ++j) {
            pair_err[i * n + j] += std::abs(di - (est[j] - truth[j]));
          }
        }
      }
      row.mean_abs_err_v = abs_sum / (m * n);
      for (const double p : pair_err) row.max_pair_err_v = std::max(row.max_pair_err_v, p / m);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

ExperimentResult RunExperiment(const ExperimentConfig& config, int workers) {
  config.Validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.config = config;
  result.runs = config.Runs();

  const FeasibleFamily family(config.n_items, config.max_size);
  const std::vector<int64_t> grid = config.ResolvedGrid();
  std::vector<MnlInstance> instances;
  instances.reserve(static_cast<std::size_t>(config.trials));
  for (int k = 0; k < config.trials; ++k) instances.push_back(TrialInstance(config, k));

  const std::size_t n_tasks = result.runs.size() * static_cast<std::size_t>(config.trials);
  std::vector<std::optional<TrialResult>> slots(n_tasks);
  std::vector<std::optional<std::string>> errors(n_tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t task = next++; task < n_tasks; task = next++) {
      const std::size_t r = task / static_cast<std::size_t>(config.trials);
      const int trial = static_cast<int>(task % static_cast<std::size_t>(config.trials));
      const RunSpec& run = result.runs[r];
      try {
        TrialContext ctx{&instances[static_cast<std::size_t>(trial)], &family, grid};
        slots[task] = RunTrial(ctx, run,
                               DeriveTrialSeeds(config.master_seed, trial, run),
                               config.horizon, trial);
      } catch (const std::exception& ex) {
        errors[task] = ex.what();
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(workers, static_cast<int>(n_tasks)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  for (std::size_t task = 0; task < n_tasks; ++task) {
    if (slots[task]) {
      result.trials.push_back(std::move(*slots[task]));
    } else {
      const RunSpec& run = result.runs[task / static_cast<std::size_t>(config.trials)];
      result.failures.push_back(
          {run.policy.label, run.alpha,
           static_cast<int>(task % static_cast<std::size_t>(config.trials)),
           errors[task].value_or("unknown failure")});
    }
  }
  result.summary = Summarize(result.trials);
  result.inference = SummarizeInference(result.trials);
  result.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

json BuildManifest(const ExperimentResult& result) {
  json runs = json::array();
  std::vector<double> out_of_theory;
  for (const RunSpec& run : result.runs) {
    runs.push_back({{"policy", run.policy.label},
                    {"alpha", OptionalToJson(run.alpha)},
                    {"out_of_theory", run.OutOfTheory()}});
    if (run.OutOfTheory()) out_of_theory.push_back(*run.alpha);
  }
  json trials = json::array();
  for (const TrialResult& t : result.trials) {
    trials.push_back({{"policy", t.policy},
                      {"alpha", OptionalToJson(t.alpha)},
                      {"trial", t.trial},
                      {"instance_seed", t.seeds.instance},
                      {"selection_seed", t.seeds.selection},
                      {"customer_seed", t.seeds.customer},
                      {"instance_digest", t.instance_digest},
                      {"completed_epochs", t.completed_epochs},
                      {"exploratory_epochs", t.exploratory_epochs},
                      {"negative_gap_steps", t.negative_gap_steps}});
  }
  json failures = json::array();
  for (const TrialFailure& f : result.failures) {
    failures.push_back({{"policy", f.policy},
                        {"alpha", OptionalToJson(f.alpha)},
                        {"trial", f.trial},
                        {"message", f.message}});
  }
  std::sort(out_of_theory.begin(), out_of_theory.end());
  out_of_theory.erase(std::unique(out_of_theory.begin(), out_of_theory.end()),
                      out_of_theory.end());
  return {
      {"tool", "mnlbandit"},
      {"version", LibraryVersion()},
      {"config", result.config.ToJson()},
      {"master_seed", result.config.master_seed},
      {"runs", runs},
      {"trials", trials},
      {"failures", failures},
      {"warning_count", result.failures.size()},
      {"wall_clock_seconds", result.wall_clock_seconds},
      {"flags",
       {{"exp3eg_schedule_is_approximation", true},
        {"exp3eg_mse_v", "null: no parameter estimator"},
        {"exp3eg_mse_r", "per-arm empirical mean realized reward"},
        {"mnlbanditee_estimate", "per-item sample mean (no IPW)"},
        {"estimate_before_first_epoch", "zero vector"},
        {"estimate_between_epochs", "frozen at last completed epoch"},
        {"regret", "expected per-step revenue gap to best feasible set"},
        {"alphas_out_of_theory", out_of_theory}}},
  };
}

void WriteOutputs(const ExperimentResult& result,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    CsvWriter w(dir / "per_step.csv", {"policy", "alpha", "trial", "t",
                                       "offered_size", "cum_regret", "mse_v",
                                       "mse_r"});
    for (const TrialResult& tr : result.trials) {
      for (std::size_t g = 0; g < tr.grid.size(); ++g) {
        w << tr.policy << tr.alpha << tr.trial << tr.grid[g]
          << tr.offered_size[g] << tr.cum_regret[g] << tr.mse_v[g] << tr.mse_r[g];
        w.EndRow();
      }
    }
  }
  {
    CsvWriter w(dir / "summary.csv",
                {"policy", "alpha", "t", "mean_cum_regret", "sd_cum_regret",
                 "mean_mse_v", "sd_mse_v", "mean_mse_r", "sd_mse_r"});
    for (const SummaryRow& r : result.summary) {
      w << r.policy << r.alpha << r.t << r.mean_cum_regret << r.sd_cum_regret
        << r.mean_mse_v << r.sd_mse_v << r.mean_mse_r << r.sd_mse_r;
      w.EndRow();
    }
  }
  {
    CsvWriter w(dir / "estimates.csv",
                {"policy", "alpha", "trial", "item", "v_true", "v_hat"});
    for (const TrialResult& tr : result.trials) {
      for (int i = 1; i <= tr.v_true.size(); ++i) {
        std::optional<double> v_hat;
        if (tr.v_hat) v_hat = (*tr.v_hat)[i];
        w << tr.policy << tr.alpha << tr.trial << i << tr.v_true[i] << v_hat;
        w.EndRow();
      }
    }
  }
  {
    CsvWriter w(dir / "inference.csv", {"policy", "alpha", "t",
                                        "mean_abs_err_v", "max_pair_err_v"});
    for (const InferenceRow& r : result.inference) {
      w << r.policy << r.alpha << r.t << r.mean_abs_err_v << r.max_pair_err_v;
      w.EndRow();
    }
  }
  std::ofstream manifest(dir / "manifest.json");
  if (!manifest) throw std::runtime_error("cannot write manifest.json");
  manifest << BuildManifest(result).dump(2) << '\n';
}

}  // namespace mnlbandit

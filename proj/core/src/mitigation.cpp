#include "fairaudit/mitigation.hpp"

#include <algorithm>

#include "fairaudit/lfr.hpp"
#include "fairaudit/postprocess.hpp"
#include "fairaudit/prejudice.hpp"
#include "fairaudit/repair.hpp"

namespace fairaudit {

namespace {

ForestOptions forest_options(const MethodConfig& cfg, std::uint64_t seed) {
  ForestOptions f;
  f.n_trees = cfg.forest_trees;
  f.max_depth = cfg.forest_depth;
  f.min_samples_leaf = cfg.forest_min_leaf;
  f.seed = seed;
  return f;
}

MethodOutcome method_repair(const FoldContext& ctx) {
  RepairOptions ropts;
  ropts.lambda = ctx.config.repair_lambda;
  QuantileRepair repair = QuantileRepair::fit(ctx.train, ropts);
  Dataset train_fixed = repair.transform(ctx.train);
  Dataset test_fixed = repair.transform(ctx.test);
  Encoder enc = Encoder::fit(train_fixed);
  Matrix xtr = enc.transform(train_fixed);
  Matrix xte = enc.transform(test_fixed);
  RandomForest forest =
      RandomForest::fit(xtr, train_fixed.y, forest_options(ctx.config, ctx.seed));
  MethodOutcome out;
  out.scores = forest.score(xte);
  out.labels = RandomForest::labels_from_scores(out.scores);
  return out;
}

MethodOutcome method_representation(const FoldContext& ctx) {
  LfrOptions lopts;
  lopts.prototypes = ctx.config.lfr_prototypes;
  lopts.ax = ctx.config.lfr_ax;
  lopts.ay = ctx.config.lfr_ay;
  lopts.az = ctx.config.lfr_az;
  lopts.max_iters = ctx.config.lfr_iters;
  lopts.seed = ctx.seed;
  FairRepresentation rep = FairRepresentation::fit(ctx.train, lopts);

  Matrix xtr = rep.reconstruct(ctx.train);
  std::vector<double> train_scores = rep.label_scores(ctx.train);
  std::vector<std::uint8_t> ytr(train_scores.size());
  for (std::size_t i = 0; i < train_scores.size(); ++i) ytr[i] = train_scores[i] >= 0.5 ? 1 : 0;

  MethodOutcome out;
  bool has0 = false, has1 = false;
  for (auto v : ytr) (v ? has1 : has0) = true;
  if (!has0 || !has1) out.flags.push_back("representation_labels_collapsed");

  Matrix xte = rep.reconstruct(ctx.test);
  RandomForest forest =
      RandomForest::fit(xtr, ytr, forest_options(ctx.config, derive_seed(ctx.seed, 1)));
  out.scores = forest.score(xte);
  out.labels = RandomForest::labels_from_scores(out.scores);
  return out;
}

MethodOutcome method_prejudice(const FoldContext& ctx) {
  PrOptions popts;
  popts.eta = ctx.config.pr_eta;
  popts.l2 = ctx.config.pr_l2;
  popts.max_iters = ctx.config.pr_iters;
  popts.seed = ctx.seed;
  PrejudiceRemover pr = PrejudiceRemover::fit(ctx.train, popts);
  MethodOutcome out;
  out.scores = pr.predict_proba(ctx.test);
  out.labels.resize(out.scores.size());
  for (std::size_t i = 0; i < out.scores.size(); ++i)
    out.labels[i] = out.scores[i] >= 0.5 ? 1 : 0;
  return out;
}

MethodOutcome method_reject_option(const FoldContext& ctx) {
  RocOptions ropts;
  ropts.spd_tolerance = ctx.config.roc_spd_tolerance;
  RocRule rule = fit_reject_option(ctx.fit_scores, ctx.train.y, ctx.train_mask, ropts);
  MethodOutcome out;
  out.labels = apply_reject_option(rule, ctx.test_scores, ctx.test_mask);
  if (rule.fallback_used) out.flags.push_back("band_selection_fallback");
  return out;
}

MethodOutcome method_equalized_odds(const FoldContext& ctx) {
  std::vector<std::uint8_t> base_train = RandomForest::labels_from_scores(ctx.fit_scores);
  OddsMix mix = fit_equalized_odds(base_train, ctx.train.y, ctx.train_mask);
  std::vector<std::uint8_t> base_test = RandomForest::labels_from_scores(ctx.test_scores);
  MethodOutcome out;
  out.labels = apply_equalized_odds(mix, base_test, ctx.test_mask, ctx.seed);
  if (mix.degenerate) out.flags.push_back("rate_constraints_relaxed");
  return out;
}

MethodOutcome method_calibrated_odds(const FoldContext& ctx) {
  CostMix mix = fit_calibrated_odds(ctx.fit_scores, ctx.train.y, ctx.train_mask);
  MethodOutcome out;
  out.scores = apply_calibrated_odds(mix, ctx.test_scores, ctx.test_mask, ctx.seed);
  out.labels = RandomForest::labels_from_scores(out.scores);
  if (mix.degenerate) out.flags.push_back("cost_mix_degenerate");
  if (mix.clamped) out.flags.push_back("cost_mix_clamped");
  return out;
}

}  // namespace

const std::vector<std::string>& mitigation_method_names() {
  static const std::vector<std::string> names = {"dir", "lfr", "pr", "roc", "eo", "ceo"};
  return names;
}

bool is_mitigation_method(const std::string& name) {
  const auto& names = mitigation_method_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

std::size_t mitigation_method_index(const std::string& name) {
  const auto& names = mitigation_method_names();
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ConfigError("unknown mitigation method '" + name + "'");
  return std::size_t(it - names.begin());
}

MethodOutcome run_method(const std::string& name, const FoldContext& ctx) {
  if (name == "dir") return method_repair(ctx);
  if (name == "lfr") return method_representation(ctx);
  if (name == "pr") return method_prejudice(ctx);
  if (name == "roc") return method_reject_option(ctx);
  if (name == "eo") return method_equalized_odds(ctx);
  if (name == "ceo") return method_calibrated_odds(ctx);
  throw ConfigError("unknown mitigation method '" + name + "'");
}

}  // namespace fairaudit

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairaudit/dataset.hpp"
#include "fairaudit/encode.hpp"
#include "fairaudit/forest.hpp"

namespace fairaudit {

/// Hyperparameters for every stage, pre-filled with the defaults the audit
/// uses when the config file does not override them.
struct MethodConfig {
  std::size_t forest_trees = 100;
  std::size_t forest_depth = 16;
  std::size_t forest_min_leaf = 1;

  double repair_lambda = 1.0;

  std::size_t lfr_prototypes = 5;
  double lfr_ax = 0.01;
  double lfr_ay = 1.0;
  double lfr_az = 50.0;
  std::size_t lfr_iters = 5000;

  double pr_eta = 1.0;
  double pr_l2 = 0.01;
  std::size_t pr_iters = 1000;

  double roc_spd_tolerance = 0.05;
};

/// Everything a mitigation method may need for one fold. The biased forest
/// and its scores are shared across post-processing methods so they all
/// correct the same base model. fit_scores are leave-bag-out estimates on
/// the fold's training rows, which mirror how the model scores unseen data.
struct FoldContext {
  const Dataset& train;
  const Dataset& test;
  const Matrix& x_train;
  const Matrix& x_test;
  const RandomForest& biased;
  const std::vector<double>& fit_scores;
  const std::vector<double>& test_scores;
  const std::vector<std::uint8_t>& train_mask;
  const std::vector<std::uint8_t>& test_mask;
  std::uint64_t seed;
  const MethodConfig& config;
};

struct MethodOutcome {
  std::vector<std::uint8_t> labels;  // decisions on the fold's test rows
  std::vector<double> scores;        // empty when the method yields none
  std::vector<std::string> flags;    // degeneracies and fallbacks hit
};

/// Stable method order: dir, lfr, pr, roc, eo, ceo.
const std::vector<std::string>& mitigation_method_names();
bool is_mitigation_method(const std::string& name);
std::size_t mitigation_method_index(const std::string& name);

MethodOutcome run_method(const std::string& name, const FoldContext& ctx);

}  // namespace fairaudit

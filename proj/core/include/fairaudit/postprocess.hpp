#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fairaudit/common.hpp"

namespace fairaudit {

/// Reject-option band selection. The grid is thresholds t = 0.01..0.99 in
/// steps of 0.01 and, per threshold, 50 equal margin steps up to
/// min(t, 1-t). A (t, m) rule predicts: inside the open band (t-m, t+m),
/// unprivileged rows get the favorable label and privileged rows the
/// unfavorable one; outside the band, score >= t decides. Among grid
/// points whose selection-rate gap on the fit set is within spd_tolerance,
/// the one with the best balanced accuracy wins; when none qualifies the
/// minimum-gap point is used and fallback_used is set.
struct RocOptions {
  double spd_tolerance = 0.05;
};

struct RocRule {
  double threshold = 0.5;
  double margin = 0.0;
  bool fallback_used = false;
  double fit_spd = 0.0;
  double fit_balanced_accuracy = 0.0;
};

RocRule fit_reject_option(const std::vector<double>& scores, const std::vector<std::uint8_t>& y,
                          const std::vector<std::uint8_t>& privileged, RocOptions opts = {});

std::vector<std::uint8_t> apply_reject_option(const RocRule& rule,
                                              const std::vector<double>& scores,
                                              const std::vector<std::uint8_t>& privileged);

/// Label-mixing rates that equalize both post-mix TPR and FPR across the
/// two groups. mix[g][b] is the probability of assigning the favorable
/// label to a group-g row whose base prediction is b. Chosen to minimize
/// expected misclassification cost against the fit labels; when a
/// (group, label) cell is empty, the corresponding rate equality cannot be
/// estimated and is dropped (listed in relaxed, degenerate set).
struct OddsMix {
  double mix[2][2] = {{0.0, 1.0}, {0.0, 1.0}};
  double base_tpr[2] = {0.0, 0.0};
  double base_fpr[2] = {0.0, 0.0};
  bool degenerate = false;
  std::vector<std::string> relaxed;
};

OddsMix fit_equalized_odds(const std::vector<std::uint8_t>& base_labels,
                           const std::vector<std::uint8_t>& y,
                           const std::vector<std::uint8_t>& privileged);

/// Analytic post-mix rates: tpr[g] = mix[g][1]*base_tpr[g] +
/// mix[g][0]*(1-base_tpr[g]), and likewise fpr via base_fpr.
struct GroupRates {
  double tpr[2];
  double fpr[2];
};

GroupRates expected_rates(const OddsMix& fit);

std::vector<std::uint8_t> apply_equalized_odds(const OddsMix& fit,
                                               const std::vector<std::uint8_t>& base_labels,
                                               const std::vector<std::uint8_t>& privileged,
                                               std::uint64_t seed);

/// Score-mixing toward the group base rate, equalizing a generalized cost
/// (the mean of score-based false negative and false positive rates).
/// The cheaper group mixes with probability alpha, where alpha solves
/// (1-a)*cost_low + a*cost_trivial_low = cost_high, clamped to [0, 1].
struct CostMix {
  int low_cost_group = 0;       // group index whose scores get mixed
  double alpha = 0.0;
  double base_rate[2] = {0.0, 0.0};
  double cost[2] = {0.0, 0.0};  // generalized cost per group
  bool clamped = false;
  bool degenerate = false;      // empty cell or no cost gap to close
};

CostMix fit_calibrated_odds(const std::vector<double>& scores, const std::vector<std::uint8_t>& y,
                            const std::vector<std::uint8_t>& privileged);

std::vector<double> apply_calibrated_odds(const CostMix& fit, const std::vector<double>& scores,
                                          const std::vector<std::uint8_t>& privileged,
                                          std::uint64_t seed);

}  // namespace fairaudit

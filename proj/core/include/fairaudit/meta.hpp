#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairaudit/common.hpp"
#include "fairaudit/rules.hpp"
#include "fairaudit/tree.hpp"

namespace fairaudit {

/// Per-record comparison of a model's decisions against the true labels:
///  0 where they agree, +1 where the model granted the favorable outcome
/// against an unfavorable label, -1 where it withheld a favorable one.
std::vector<int> treatment_labels(const std::vector<std::uint8_t>& y_true,
                                  const std::vector<std::uint8_t>& y_model);

struct MetaOptions {
  std::size_t max_depth = 6;
  std::size_t min_samples_leaf = 20;
  std::size_t cv_folds = 5;
  std::uint64_t seed = 0;
};

/// Cohort sizes and how well the explaining tree recovers them. The three
/// ratios are fractions of the audited records and sum to 1. Precisions
/// are per predicted class and stay unset when a class is never predicted.
struct CohortReport {
  std::size_t n = 0;
  double agree_ratio = 0.0;
  double disagree_pos_ratio = 0.0;
  double disagree_neg_ratio = 0.0;
  double meta_accuracy = 0.0;
  std::optional<double> agree_precision;
  std::optional<double> disagree_pos_precision;
  std::optional<double> disagree_neg_precision;
};

CohortReport cohort_report(const std::vector<int>& labels, const std::vector<int>& predicted);

/// Tree over the treatment labels plus its cross-validated quality. The
/// tree itself is fit on all audited records; accuracy and precisions come
/// from held-out predictions of an internal stratified CV, so they are not
/// inflated by memorization. negative_rules are the tree's class -1 paths,
/// most-populated first.
struct MetaResult {
  DecisionTree tree;
  std::vector<int> cv_predictions;
  CohortReport report;
  std::vector<Rule> negative_rules;
};

MetaResult explain_treatment(const Matrix& x, const std::vector<std::string>& feature_names,
                             const std::vector<int>& labels, MetaOptions opts);

}  // namespace fairaudit

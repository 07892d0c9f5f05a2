#include "fairaudit/meta.hpp"

#include <algorithm>

#include "fairaudit/split.hpp"

namespace fairaudit {

std::vector<int> treatment_labels(const std::vector<std::uint8_t>& y_true,
                                  const std::vector<std::uint8_t>& y_model) {
  if (y_true.size() != y_model.size())
    throw DataError("label vectors must have equal length");
  std::vector<int> out(y_true.size());
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] > 1 || y_model[i] > 1) throw DataError("labels must be 0/1");
    if (y_true[i] == y_model[i]) {
      out[i] = 0;
    } else {
      out[i] = y_model[i] == 1 ? 1 : -1;
    }
  }
  return out;
}

CohortReport cohort_report(const std::vector<int>& labels, const std::vector<int>& predicted) {
  if (labels.empty()) throw DataError("cannot report on zero audited records");
  if (labels.size() != predicted.size())
    throw DataError("labels and predictions must have equal length");
  CohortReport r;
  r.n = labels.size();
  std::size_t agree = 0, pos = 0, neg = 0, correct = 0;
  std::size_t pred_count[3] = {0, 0, 0}, pred_hit[3] = {0, 0, 0};  // -1, 0, +1
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < -1 || labels[i] > 1 || predicted[i] < -1 || predicted[i] > 1)
      throw DataError("treatment labels must be -1, 0 or +1");
    if (labels[i] == 0) ++agree;
    if (labels[i] == 1) ++pos;
    if (labels[i] == -1) ++neg;
    std::size_t slot = std::size_t(predicted[i] + 1);
    ++pred_count[slot];
    if (predicted[i] == labels[i]) {
      ++correct;
      ++pred_hit[slot];
    }
  }
  double n = double(r.n);
  r.agree_ratio = double(agree) / n;
  r.disagree_pos_ratio = double(pos) / n;
  r.disagree_neg_ratio = double(neg) / n;
  r.meta_accuracy = double(correct) / n;
  if (pred_count[1] > 0) r.agree_precision = double(pred_hit[1]) / double(pred_count[1]);
  if (pred_count[2] > 0) r.disagree_pos_precision = double(pred_hit[2]) / double(pred_count[2]);
  if (pred_count[0] > 0) r.disagree_neg_precision = double(pred_hit[0]) / double(pred_count[0]);
  return r;
}

MetaResult explain_treatment(const Matrix& x, const std::vector<std::string>& feature_names,
                             const std::vector<int>& labels, MetaOptions opts) {
  if (x.rows != labels.size()) throw DataError("label count does not match matrix rows");
  if (x.rows < opts.cv_folds) throw DataError("fewer audited records than CV folds");

  TreeOptions topts;
  topts.max_depth = opts.max_depth;
  topts.min_samples_leaf = opts.min_samples_leaf;

  MetaResult result;
  result.cv_predictions.assign(x.rows, 0);
  auto folds = stratified_kfold_multi(labels, opts.cv_folds, derive_seed(opts.seed, 0xcf01));
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::uint8_t> in_test(x.rows, 0);
    for (std::size_t i : folds[f]) in_test[i] = 1;
    std::vector<std::size_t> train_rows;
    train_rows.reserve(x.rows - folds[f].size());
    for (std::size_t i = 0; i < x.rows; ++i)
      if (!in_test[i]) train_rows.push_back(i);
    if (train_rows.empty()) throw DataError("CV fold left no training records");
    DecisionTree tree = DecisionTree::fit(x, labels, topts, nullptr, &train_rows);
    for (std::size_t i : folds[f])
      result.cv_predictions[i] = tree.predict_row(&x.a[i * x.cols]);
  }

  result.tree = DecisionTree::fit(x, labels, topts);
  result.report = cohort_report(labels, result.cv_predictions);

  auto all_rules = extract_rules(result.tree, feature_names);
  for (auto& rule : all_rules)
    if (rule.klass == -1) result.negative_rules.push_back(std::move(rule));
  std::stable_sort(result.negative_rules.begin(), result.negative_rules.end(),
                   [](const Rule& a, const Rule& b) { return a.support > b.support; });
  return result;
}

}  // namespace fairaudit

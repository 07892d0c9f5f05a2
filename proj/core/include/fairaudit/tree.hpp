#pragma once

#include <cstdint>
#include <vector>

#include "fairaudit/common.hpp"

namespace fairaudit {

struct TreeOptions {
  std::size_t max_depth = 16;
  std::size_t min_samples_leaf = 1;
  std::size_t max_features = 0;  // per-node feature sample; 0 means all
  std::uint64_t seed = 0;        // only used when max_features > 0
};

/// One node of a fitted tree. Internal nodes route row to `left` when
/// row[feature] <= threshold, else to `right`. Leaves have feature == -1
/// and predict `value`; class_counts holds training counts per class in
/// the order of DecisionTree::classes().
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int value = 0;
  std::vector<std::size_t> class_counts;
};

/// CART with Gini impurity over an arbitrary (small) set of integer class
/// values. Splits use midpoint thresholds; ties in impurity decrease go to
/// the lowest feature index, then the lowest threshold; leaf ties go to the
/// smallest class value. Deterministic for fixed inputs and seed.
class DecisionTree {
 public:
  /// binary_hint, when given, marks columns whose values are all 0/1 so
  /// they can be split without sorting; size must be x.cols.
  static DecisionTree fit(const Matrix& x, const std::vector<int>& y, TreeOptions opts,
                          const std::vector<std::uint8_t>* binary_hint = nullptr,
                          const std::vector<std::size_t>* row_subset = nullptr);

  int predict_row(const double* row) const;
  std::vector<int> predict(const Matrix& x) const;

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const std::vector<int>& classes() const { return classes_; }
  std::size_t depth() const;

 private:
  std::vector<TreeNode> nodes_;
  std::vector<int> classes_;
};

}  // namespace fairaudit

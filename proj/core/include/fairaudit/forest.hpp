#pragma once

#include <cstdint>
#include <vector>

#include "fairaudit/common.hpp"
#include "fairaudit/tree.hpp"

namespace fairaudit {

struct ForestOptions {
  std::size_t n_trees = 100;
  std::size_t max_depth = 16;
  std::size_t min_samples_leaf = 1;
  std::uint64_t seed = 0;
};

/// Bagged CART ensemble for 0/1 labels. Each tree sees a bootstrap sample
/// (n draws with replacement, seeded per tree) and samples ceil(sqrt(d))
/// features per node. score() is the fraction of trees voting favorable;
/// predict() thresholds it at 0.5.
///
/// oob_scores() gives each training row the vote fraction over only the
/// trees whose bootstrap missed that row, which estimates held-out scores
/// without a separate split. Rows in every bag (rare) fall back to the
/// full-forest score.
class RandomForest {
 public:
  static RandomForest fit(const Matrix& x, const std::vector<std::uint8_t>& y,
                          ForestOptions opts);

  std::vector<double> score(const Matrix& x) const;
  std::vector<std::uint8_t> predict(const Matrix& x) const;
  double score_row(const double* row) const;

  const std::vector<double>& oob_scores() const { return oob_scores_; }
  const std::vector<DecisionTree>& trees() const { return trees_; }

  static std::vector<std::uint8_t> labels_from_scores(const std::vector<double>& scores);

 private:
  std::vector<DecisionTree> trees_;
  std::vector<double> oob_scores_;
};

}  // namespace fairaudit

#include "fairaudit/forest.hpp"

#include <cmath>

namespace fairaudit {

RandomForest RandomForest::fit(const Matrix& x, const std::vector<std::uint8_t>& y,
                               ForestOptions opts) {
  if (x.rows == 0) throw DataError("cannot fit a forest on an empty matrix");
  if (y.size() != x.rows) throw DataError("label count does not match matrix rows");
  if (opts.n_trees == 0) throw ConfigError("forest needs at least one tree");

  std::vector<int> yi(y.begin(), y.end());
  std::vector<std::uint8_t> binary(x.cols, 1);
  for (std::size_t j = 0; j < x.cols; ++j) {
    for (std::size_t i = 0; i < x.rows; ++i) {
      double v = x.a[i * x.cols + j];
      if (v != 0.0 && v != 1.0) {
        binary[j] = 0;
        break;
      }
    }
  }

  RandomForest forest;
  forest.trees_.reserve(opts.n_trees);
  std::size_t n = x.rows;
  std::vector<std::size_t> bag(n);
  std::vector<std::uint8_t> in_bag(n);
  std::vector<std::uint32_t> oob_votes(n, 0), oob_total(n, 0);

  for (std::size_t t = 0; t < opts.n_trees; ++t) {
    // Bootstrap RNG is derived only from (seed, tree index) so the same
    // bags can be reconstructed independently of anything else.
    Rng boot(derive_seed(opts.seed, t));
    std::fill(in_bag.begin(), in_bag.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = std::size_t(boot.next_below(n));
      bag[i] = r;
      in_bag[r] = 1;
    }
    TreeOptions topts;
    topts.max_depth = opts.max_depth;
    topts.min_samples_leaf = opts.min_samples_leaf;
    topts.max_features = std::size_t(std::ceil(std::sqrt(double(x.cols))));
    topts.seed = derive_seed(opts.seed, t, 1);
    forest.trees_.push_back(DecisionTree::fit(x, yi, topts, &binary, &bag));

    const DecisionTree& tree = forest.trees_.back();
    for (std::size_t i = 0; i < n; ++i) {
      if (in_bag[i]) continue;
      ++oob_total[i];
      if (tree.predict_row(&x.a[i * x.cols]) == 1) ++oob_votes[i];
    }
  }

  forest.oob_scores_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (oob_total[i] > 0) {
      forest.oob_scores_[i] = double(oob_votes[i]) / double(oob_total[i]);
    } else {
      forest.oob_scores_[i] = forest.score_row(&x.a[i * x.cols]);
    }
  }
  return forest;
}

double RandomForest::score_row(const double* row) const {
  std::size_t votes = 0;
  for (const auto& tree : trees_)
    if (tree.predict_row(row) == 1) ++votes;
  return double(votes) / double(trees_.size());
}

std::vector<double> RandomForest::score(const Matrix& x) const {
  std::vector<double> out(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) out[i] = score_row(&x.a[i * x.cols]);
  return out;
}

std::vector<std::uint8_t> RandomForest::labels_from_scores(const std::vector<double>& scores) {
  std::vector<std::uint8_t> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = scores[i] >= 0.5 ? 1 : 0;
  return out;
}

std::vector<std::uint8_t> RandomForest::predict(const Matrix& x) const {
  return labels_from_scores(score(x));
}

}  // namespace fairaudit

#pragma once

#include <cstdint>
#include <vector>

#include "fairaudit/common.hpp"

namespace fairaudit {

struct LogisticOptions {
  double l2 = 0.0;          // ridge strength; the intercept is not penalized
  std::size_t max_iters = 500;
  double tol = 1e-6;        // gradient norm at which to stop
};

struct LogisticModel {
  std::vector<double> weights;
  double intercept = 0.0;
  bool converged = false;
  std::size_t iterations = 0;

  double score_row(const double* row) const;
  std::vector<double> predict_proba(const Matrix& x) const;
};

/// Binary logistic regression minimizing mean negative log-likelihood plus
/// (l2/2)*||w||^2, by gradient descent with backtracking line search.
LogisticModel fit_logistic(const Matrix& x, const std::vector<std::uint8_t>& y,
                           LogisticOptions opts);

}  // namespace fairaudit

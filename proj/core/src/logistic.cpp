#include "fairaudit/logistic.hpp"

#include <cmath>

#include "fairaudit/optimize.hpp"

namespace fairaudit {

namespace {

double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

}  // namespace

double LogisticModel::score_row(const double* row) const {
  double z = intercept;
  for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * row[j];
  return 1.0 / (1.0 + std::exp(-z));
}

std::vector<double> LogisticModel::predict_proba(const Matrix& x) const {
  if (x.cols != weights.size()) throw DataError("feature count does not match fitted model");
  std::vector<double> out(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) out[i] = score_row(&x.a[i * x.cols]);
  return out;
}

LogisticModel fit_logistic(const Matrix& x, const std::vector<std::uint8_t>& y,
                           LogisticOptions opts) {
  if (x.rows == 0 || x.cols == 0) throw DataError("cannot fit logistic model on empty matrix");
  if (y.size() != x.rows) throw DataError("label count does not match matrix rows");
  const std::size_t n = x.rows, d = x.cols;
  const double inv_n = 1.0 / double(n);

  // Parameter vector layout: d weights then the intercept.
  auto objective = [&](const std::vector<double>& theta, std::vector<double>& grad) {
    double value = 0.0;
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = &x.a[i * d];
      double z = theta[d];
      for (std::size_t j = 0; j < d; ++j) z += theta[j] * row[j];
      value += y[i] ? softplus(-z) : softplus(z);
      double p = 1.0 / (1.0 + std::exp(-z));
      double r = p - double(y[i]);
      for (std::size_t j = 0; j < d; ++j) grad[j] += r * row[j];
      grad[d] += r;
    }
    value *= inv_n;
    for (std::size_t j = 0; j <= d; ++j) grad[j] *= inv_n;
    for (std::size_t j = 0; j < d; ++j) {
      value += 0.5 * opts.l2 * theta[j] * theta[j];
      grad[j] += opts.l2 * theta[j];
    }
    return value;
  };

  OptimizeResult res = minimize_gd(objective, std::vector<double>(d + 1, 0.0), opts.max_iters,
                                   opts.tol);
  LogisticModel model;
  model.weights.assign(res.x.begin(), res.x.begin() + std::ptrdiff_t(d));
  model.intercept = res.x[d];
  model.converged = res.converged;
  model.iterations = res.iterations;
  return model;
}

}  // namespace fairaudit

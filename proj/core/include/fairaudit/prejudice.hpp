#pragma once

#include <cstdint>
#include <vector>

#include "fairaudit/common.hpp"
#include "fairaudit/dataset.hpp"
#include "fairaudit/encode.hpp"

namespace fairaudit {

struct PrOptions {
  double eta = 1.0;   // weight of the mutual-information penalty
  double l2 = 0.01;   // ridge on weights, intercepts unpenalized
  std::size_t max_iters = 1000;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

/// Two per-group logistic models trained jointly. The objective is
///   sum_n nll_n + eta * PI + (l2/2) * (||w_u||^2 + ||w_p||^2)
/// where PI = sum_n sum_y p(y|x_n) * ln( q_g(y) / q(y) ), with q_g(y) the
/// mean predicted probability of y inside the row's group and q(y) the
/// overall mean. The contributions of q through the log cancel exactly,
/// leaving d(PI)/dp_n = ln(q_g (1-q) / (q (1-q_g))).
/// Parameter layout: [w_unpriv (d), b_unpriv, w_priv (d), b_priv].
struct PrProblem {
  const Matrix& x;
  const std::vector<std::uint8_t>& y;
  const std::vector<std::uint8_t>& privileged;
  double eta, l2;

  std::size_t dim() const { return 2 * (x.cols + 1); }
  double objective(const std::vector<double>& theta, std::vector<double>& grad) const;
  double value(const std::vector<double>& theta) const;
  /// The penalty term alone, for the same parameters.
  double prejudice_index(const std::vector<double>& theta) const;
  std::vector<double> probabilities(const std::vector<double>& theta) const;
};

class PrejudiceRemover {
 public:
  static PrejudiceRemover fit(const Dataset& train, PrOptions opts);

  std::vector<double> predict_proba(const Dataset& ds) const;
  std::vector<std::uint8_t> predict(const Dataset& ds) const;

  const std::vector<double>& parameters() const { return theta_; }
  const std::vector<double>& objective_trace() const { return trace_; }

 private:
  Encoder encoder_;
  Standardizer scaler_;
  std::vector<double> theta_;
  std::vector<double> trace_;
};

}  // namespace fairaudit

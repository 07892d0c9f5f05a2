#pragma once

#include <cstdint>
#include <vector>

#include "fairaudit/common.hpp"
#include "fairaudit/dataset.hpp"
#include "fairaudit/encode.hpp"

namespace fairaudit {

struct LfrOptions {
  std::size_t prototypes = 5;
  double ax = 0.01;  // reconstruction weight
  double ay = 1.0;   // label fidelity weight
  double az = 50.0;  // group parity weight
  std::size_t max_iters = 5000;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

/// Objective for a prototype-based fair representation over a fixed design
/// matrix (rows scaled to [0,1], protected columns excluded). Parameters
/// are the K prototype vectors followed by K prototype label values:
///   theta = [v_11..v_1d, ..., v_K1..v_Kd, w_1..w_K].
/// Soft assignments M(n,k) = softmax_k(-||x_n - v_k||^2). The value is
///   az * sum_k |mean_unpriv M(.,k) - mean_priv M(.,k)|
/// + ax * mean_n ||x_n - sum_k M(n,k) v_k||^2
/// + ay * mean_n BCE(y_n, clamp(sum_k M(n,k) w_k)).
/// objective() fills the exact gradient (clamped rows contribute zero to
/// the label term's gradient), so it can be checked by finite differences.
struct LfrProblem {
  const Matrix& x;
  const std::vector<std::uint8_t>& y;
  const std::vector<std::uint8_t>& privileged;
  std::size_t prototypes;
  double ax, ay, az;

  std::size_t dim() const { return prototypes * x.cols + prototypes; }
  double objective(const std::vector<double>& theta, std::vector<double>& grad) const;
  double value(const std::vector<double>& theta) const;
};

/// Fitted representation: maps records to reconstructions in the scaled
/// encoded feature space and to prototype-blended label scores.
class FairRepresentation {
 public:
  static FairRepresentation fit(const Dataset& train, LfrOptions opts);

  /// Reconstructed rows x_hat = M v in the scaled feature space.
  Matrix reconstruct(const Dataset& ds) const;
  /// Blended label scores in [0, 1], one per record.
  std::vector<double> label_scores(const Dataset& ds) const;

  const std::vector<double>& parameters() const { return theta_; }
  const std::vector<double>& objective_trace() const { return trace_; }
  const Encoder& encoder() const { return encoder_; }

 private:
  Matrix project(const Dataset& ds) const;

  Encoder encoder_;
  MinMaxScaler scaler_;
  std::vector<double> theta_;
  std::vector<double> trace_;
  std::size_t prototypes_ = 0;
  std::size_t d_ = 0;
};

}  // namespace fairaudit

#pragma once

#include <array>
#include <vector>

#include "fairaudit/dataset.hpp"

namespace fairaudit {

/// 101-point empirical quantile grid (q = 0.00, 0.01, ..., 1.00) of a
/// sorted, nonempty sample, with linear interpolation between order
/// statistics.
std::vector<double> empirical_quantiles(const std::vector<double>& sorted_values);

/// Right-continuous empirical CDF: fraction of sample values <= x.
double empirical_cdf(const std::vector<double>& sorted_values, double x);

struct RepairOptions {
  double lambda = 1.0;  // 0 leaves data unchanged, 1 repairs fully
};

/// Rank-preserving quantile repair of every numeric column toward the
/// cross-group median quantile function. Fit on training data; transform
/// maps each value x to (1-lambda)*x + lambda*target_quantile(cdf_g(x))
/// using its row's group g. Categorical columns pass through unchanged.
class QuantileRepair {
 public:
  static QuantileRepair fit(const Dataset& train, RepairOptions opts);

  Dataset transform(const Dataset& ds) const;

  double lambda() const { return lambda_; }

 private:
  struct ColumnState {
    std::size_t column;                            // schema index
    std::array<std::vector<double>, 2> sorted;     // per group, ascending
    std::vector<double> target;                    // 101-point grid
  };
  std::vector<ColumnState> columns_;
  double lambda_ = 1.0;
};

}  // namespace fairaudit

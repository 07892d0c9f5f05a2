#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace fairaudit {

struct OptimizeResult {
  std::vector<double> x;
  double value = 0.0;
  double grad_norm = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// Gradient descent with Armijo backtracking. objective(x, grad) returns
/// the value and fills grad (same size as x). The iterate sequence is
/// non-increasing in objective value: a step is only taken when it
/// satisfies the sufficient-decrease test, and the loop stops early when
/// no such step exists at the smallest trial size. Stops when the gradient
/// norm drops below tol or after max_iters accepted steps.
inline OptimizeResult minimize_gd(
    const std::function<double(const std::vector<double>&, std::vector<double>&)>& objective,
    std::vector<double> x0, std::size_t max_iters, double tol,
    std::vector<double>* trace = nullptr) {
  OptimizeResult res;
  res.x = std::move(x0);
  std::vector<double> grad(res.x.size()), trial(res.x.size()), trial_grad(res.x.size());
  double value = objective(res.x, grad);
  if (trace) trace->push_back(value);
  double step = 1.0;
  const double c1 = 1e-4;

  for (std::size_t it = 0; it < max_iters; ++it) {
    double g2 = 0.0;
    for (double g : grad) g2 += g * g;
    res.grad_norm = std::sqrt(g2);
    if (res.grad_norm < tol) {
      res.converged = true;
      break;
    }
    bool accepted = false;
    double s = step;
    for (int half = 0; half < 60; ++half) {
      for (std::size_t i = 0; i < res.x.size(); ++i) trial[i] = res.x[i] - s * grad[i];
      double tv = objective(trial, trial_grad);
      if (tv <= value - c1 * s * g2) {
        res.x.swap(trial);
        grad.swap(trial_grad);
        value = tv;
        if (trace) trace->push_back(value);
        step = std::min(s * 2.0, 1e6);
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    res.iterations = it + 1;
    if (!accepted) break;
  }
  res.value = value;
  return res;
}

}  // namespace fairaudit

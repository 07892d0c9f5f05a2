#include "fairaudit/prejudice.hpp"

#include <algorithm>
#include <cmath>

#include "fairaudit/optimize.hpp"

namespace fairaudit {

namespace {

double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double clamp_prob(double p) { return std::clamp(p, 1e-12, 1.0 - 1e-12); }

}  // namespace

std::vector<double> PrProblem::probabilities(const std::vector<double>& theta) const {
  const std::size_t n = x.rows, d = x.cols;
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* w = theta.data() + (privileged[i] ? d + 1 : 0);
    const double* row = &x.a[i * d];
    double z = w[d];
    for (std::size_t j = 0; j < d; ++j) z += w[j] * row[j];
    p[i] = 1.0 / (1.0 + std::exp(-z));
  }
  return p;
}

double PrProblem::prejudice_index(const std::vector<double>& theta) const {
  const std::size_t n = x.rows;
  std::vector<double> p = probabilities(theta);
  double sum_u = 0.0, sum_p = 0.0;
  std::size_t n_p = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (privileged[i]) {
      sum_p += p[i];
      ++n_p;
    } else {
      sum_u += p[i];
    }
  }
  std::size_t n_u = n - n_p;
  if (n_u == 0 || n_p == 0)
    throw DataError("prejudice index needs both protected groups present");
  double q_u = clamp_prob(sum_u / double(n_u));
  double q_p = clamp_prob(sum_p / double(n_p));
  double q = clamp_prob((sum_u + sum_p) / double(n));
  double pi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double qg = privileged[i] ? q_p : q_u;
    pi += p[i] * std::log(qg / q) + (1.0 - p[i]) * std::log((1.0 - qg) / (1.0 - q));
  }
  return pi;
}

double PrProblem::objective(const std::vector<double>& theta, std::vector<double>& grad) const {
  const std::size_t n = x.rows, d = x.cols;
  if (theta.size() != dim()) throw DataError("parameter vector has wrong size");
  grad.assign(dim(), 0.0);

  std::vector<double> p(n), z(n);
  double sum_u = 0.0, sum_p = 0.0;
  std::size_t n_p = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double* w = theta.data() + (privileged[i] ? d + 1 : 0);
    const double* row = &x.a[i * d];
    double zi = w[d];
    for (std::size_t j = 0; j < d; ++j) zi += w[j] * row[j];
    z[i] = zi;
    p[i] = 1.0 / (1.0 + std::exp(-zi));
    if (privileged[i]) {
      sum_p += p[i];
      ++n_p;
    } else {
      sum_u += p[i];
    }
  }
  std::size_t n_u = n - n_p;
  if (n_u == 0 || n_p == 0)
    throw DataError("prejudice objective needs both protected groups present");

  double q_u = clamp_prob(sum_u / double(n_u));
  double q_p = clamp_prob(sum_p / double(n_p));
  double q = clamp_prob((sum_u + sum_p) / double(n));
  // d(PI)/dp for each group; the paths through q_g and q cancel.
  double kick_u = std::log(q_u * (1.0 - q) / (q * (1.0 - q_u)));
  double kick_p = std::log(q_p * (1.0 - q) / (q * (1.0 - q_p)));

  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    value += y[i] ? softplus(-z[i]) : softplus(z[i]);
    value += eta * (p[i] * std::log((privileged[i] ? q_p : q_u) / q) +
                    (1.0 - p[i]) * std::log((1.0 - (privileged[i] ? q_p : q_u)) / (1.0 - q)));
    double r = (p[i] - double(y[i])) +
               eta * (privileged[i] ? kick_p : kick_u) * p[i] * (1.0 - p[i]);
    double* g = grad.data() + (privileged[i] ? d + 1 : 0);
    const double* row = &x.a[i * d];
    for (std::size_t j = 0; j < d; ++j) g[j] += r * row[j];
    g[d] += r;
  }
  for (int gix = 0; gix < 2; ++gix) {
    double* g = grad.data() + (gix ? d + 1 : 0);
    const double* w = theta.data() + (gix ? d + 1 : 0);
    for (std::size_t j = 0; j < d; ++j) {
      value += 0.5 * l2 * w[j] * w[j];
      g[j] += l2 * w[j];
    }
  }
  return value;
}

double PrProblem::value(const std::vector<double>& theta) const {
  std::vector<double> grad;
  return objective(theta, grad);
}

PrejudiceRemover PrejudiceRemover::fit(const Dataset& train, PrOptions opts) {
  PrejudiceRemover pr;
  Encoder::Options eopts;
  eopts.include_protected = false;
  pr.encoder_ = Encoder::fit(train, eopts);
  Matrix raw = pr.encoder_.transform(train);
  pr.scaler_ = Standardizer::fit(raw);
  Matrix x = pr.scaler_.transform(raw);
  auto mask = group_mask(train);

  PrProblem prob{x, train.y, mask, opts.eta, opts.l2};
  auto obj = [&prob](const std::vector<double>& th, std::vector<double>& g) {
    return prob.objective(th, g);
  };
  OptimizeResult res = minimize_gd(obj, std::vector<double>(prob.dim(), 0.0), opts.max_iters,
                                   opts.tol, &pr.trace_);
  pr.theta_ = std::move(res.x);
  return pr;
}

std::vector<double> PrejudiceRemover::predict_proba(const Dataset& ds) const {
  Matrix x = scaler_.transform(encoder_.transform(ds));
  auto mask = group_mask(ds);
  const std::size_t d = x.cols;
  std::vector<double> out(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double* w = theta_.data() + (mask[i] ? d + 1 : 0);
    const double* row = &x.a[i * d];
    double z = w[d];
    for (std::size_t j = 0; j < d; ++j) z += w[j] * row[j];
    out[i] = 1.0 / (1.0 + std::exp(-z));
  }
  return out;
}

std::vector<std::uint8_t> PrejudiceRemover::predict(const Dataset& ds) const {
  auto p = predict_proba(ds);
  std::vector<std::uint8_t> out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] >= 0.5 ? 1 : 0;
  return out;
}

}  // namespace fairaudit

#include "fairaudit/lfr.hpp"

#include <algorithm>
#include <cmath>

#include "fairaudit/optimize.hpp"

namespace fairaudit {

namespace {

constexpr double kScoreClamp = 1e-6;

// Soft assignments for one row: M_k = softmax_k(-||x - v_k||^2).
void assignments(const double* row, const double* v, std::size_t k, std::size_t d, double* m) {
  double best = -1e300;
  for (std::size_t j = 0; j < k; ++j) {
    double s = 0.0;
    for (std::size_t t = 0; t < d; ++t) {
      double diff = row[t] - v[j * d + t];
      s -= diff * diff;
    }
    m[j] = s;
    best = std::max(best, s);
  }
  double denom = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    m[j] = std::exp(m[j] - best);
    denom += m[j];
  }
  for (std::size_t j = 0; j < k; ++j) m[j] /= denom;
}

}  // namespace

double LfrProblem::objective(const std::vector<double>& theta, std::vector<double>& grad) const {
  const std::size_t n = x.rows, d = x.cols, k = prototypes;
  if (theta.size() != dim()) throw DataError("parameter vector has wrong size");
  grad.assign(dim(), 0.0);
  const double* v = theta.data();
  const double* w = theta.data() + k * d;
  double* gv = grad.data();
  double* gw = grad.data() + k * d;
  const double inv_n = 1.0 / double(n);

  std::size_t n_priv = 0;
  for (auto p : privileged) n_priv += p;
  std::size_t n_unpriv = n - n_priv;
  if (n_priv == 0 || n_unpriv == 0)
    throw DataError("representation learning needs both protected groups present");

  // Pass 1: assignments, label scores, reconstruction loss, group means.
  std::vector<double> m(n * k), yhat_raw(n);
  std::vector<double> mean_u(k, 0.0), mean_p(k, 0.0);
  double lx = 0.0, ly = 0.0;
  std::vector<double> recon(d);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = &x.a[i * d];
    double* mi = &m[i * k];
    assignments(row, v, k, d, mi);
    for (std::size_t j = 0; j < k; ++j) (privileged[i] ? mean_p : mean_u)[j] += mi[j];
    double yr = 0.0;
    for (std::size_t j = 0; j < k; ++j) yr += mi[j] * w[j];
    yhat_raw[i] = yr;
    double yc = std::clamp(yr, kScoreClamp, 1.0 - kScoreClamp);
    ly += y[i] ? -std::log(yc) : -std::log(1.0 - yc);
    std::fill(recon.begin(), recon.end(), 0.0);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t t = 0; t < d; ++t) recon[t] += mi[j] * v[j * d + t];
    for (std::size_t t = 0; t < d; ++t) {
      double r = row[t] - recon[t];
      lx += r * r;
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    mean_u[j] /= double(n_unpriv);
    mean_p[j] /= double(n_priv);
  }
  double lz = 0.0;
  std::vector<double> zsign(k);
  for (std::size_t j = 0; j < k; ++j) {
    double z = mean_u[j] - mean_p[j];
    lz += std::fabs(z);
    zsign[j] = z > 0.0 ? 1.0 : z < 0.0 ? -1.0 : 0.0;
  }
  lx *= inv_n;
  ly *= inv_n;
  double value = az * lz + ax * lx + ay * ly;

  // Pass 2: backpropagate through M's softmax and the direct v paths.
  std::vector<double> gm(k), gs(k);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = &x.a[i * d];
    const double* mi = &m[i * k];
    std::fill(recon.begin(), recon.end(), 0.0);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t t = 0; t < d; ++t) recon[t] += mi[j] * v[j * d + t];

    double beta = 0.0;  // d(BCE)/d(yhat), zero where the clamp is active
    if (yhat_raw[i] > kScoreClamp && yhat_raw[i] < 1.0 - kScoreClamp) {
      double yc = yhat_raw[i];
      beta = (yc - double(y[i])) / (yc * (1.0 - yc));
    }
    double group_term = privileged[i] ? -1.0 / double(n_priv) : 1.0 / double(n_unpriv);

    for (std::size_t j = 0; j < k; ++j) {
      double dot = 0.0;
      for (std::size_t t = 0; t < d; ++t) dot += (row[t] - recon[t]) * v[j * d + t];
      gm[j] = ax * inv_n * (-2.0 * dot) + ay * inv_n * beta * w[j] + az * zsign[j] * group_term;
      gw[j] += ay * inv_n * beta * mi[j];
    }
    double dot_mg = 0.0;
    for (std::size_t j = 0; j < k; ++j) dot_mg += mi[j] * gm[j];
    for (std::size_t j = 0; j < k; ++j) gs[j] = mi[j] * (gm[j] - dot_mg);
    for (std::size_t j = 0; j < k; ++j) {
      // s_j = -||row - v_j||^2, so ds_j/dv_j = 2 (row - v_j); the direct
      // reconstruction path adds -2 M_ij (row - recon).
      for (std::size_t t = 0; t < d; ++t) {
        gv[j * d + t] += gs[j] * 2.0 * (row[t] - v[j * d + t]);
        gv[j * d + t] += ax * inv_n * (-2.0 * mi[j]) * (row[t] - recon[t]);
      }
    }
  }
  return value;
}

double LfrProblem::value(const std::vector<double>& theta) const {
  std::vector<double> grad;
  return objective(theta, grad);
}

FairRepresentation FairRepresentation::fit(const Dataset& train, LfrOptions opts) {
  if (opts.prototypes < 2) throw ConfigError("representation needs at least 2 prototypes");
  FairRepresentation fr;
  Encoder::Options eopts;
  eopts.include_protected = false;
  fr.encoder_ = Encoder::fit(train, eopts);
  Matrix raw = fr.encoder_.transform(train);
  fr.scaler_ = MinMaxScaler::fit(raw);
  Matrix x = fr.scaler_.transform(raw);
  auto mask = group_mask(train);

  fr.prototypes_ = opts.prototypes;
  fr.d_ = x.cols;
  LfrProblem prob{x, train.y, mask, opts.prototypes, opts.ax, opts.ay, opts.az};

  Rng rng(derive_seed(opts.seed, 0x1f12));
  std::vector<double> theta0(prob.dim());
  for (auto& t : theta0) t = rng.next_double();

  auto obj = [&prob](const std::vector<double>& th, std::vector<double>& g) {
    return prob.objective(th, g);
  };
  OptimizeResult res = minimize_gd(obj, std::move(theta0), opts.max_iters, opts.tol, &fr.trace_);
  fr.theta_ = std::move(res.x);
  return fr;
}

Matrix FairRepresentation::project(const Dataset& ds) const {
  Matrix raw = encoder_.transform(ds);
  return scaler_.transform(raw);
}

Matrix FairRepresentation::reconstruct(const Dataset& ds) const {
  Matrix x = project(ds);
  const double* v = theta_.data();
  Matrix out;
  out.rows = x.rows;
  out.cols = d_;
  out.a.assign(out.rows * out.cols, 0.0);
  std::vector<double> m(prototypes_);
  for (std::size_t i = 0; i < x.rows; ++i) {
    assignments(&x.a[i * d_], v, prototypes_, d_, m.data());
    for (std::size_t j = 0; j < prototypes_; ++j)
      for (std::size_t t = 0; t < d_; ++t) out.a[i * d_ + t] += m[j] * v[j * d_ + t];
  }
  return out;
}

std::vector<double> FairRepresentation::label_scores(const Dataset& ds) const {
  Matrix x = project(ds);
  const double* v = theta_.data();
  const double* w = theta_.data() + prototypes_ * d_;
  std::vector<double> out(x.rows);
  std::vector<double> m(prototypes_);
  for (std::size_t i = 0; i < x.rows; ++i) {
    assignments(&x.a[i * d_], v, prototypes_, d_, m.data());
    double yr = 0.0;
    for (std::size_t j = 0; j < prototypes_; ++j) yr += m[j] * w[j];
    out[i] = std::clamp(yr, 0.0, 1.0);
  }
  return out;
}

}  // namespace fairaudit

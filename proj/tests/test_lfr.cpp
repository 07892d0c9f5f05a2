#include <doctest.h>

#include <cmath>

#include "fairaudit/dataset.hpp"
#include "fairaudit/lfr.hpp"

using namespace fairaudit;

namespace {

LfrProblem tiny_problem(const Matrix& x, const std::vector<std::uint8_t>& y,
                        const std::vector<std::uint8_t>& priv) {
  return LfrProblem{x, y, priv, 2, 0.01, 1.0, 50.0};
}

}  // namespace

TEST_CASE("objective value matches an independently computed fixture") {
  Matrix x;
  x.rows = 3;
  x.cols = 2;
  x.a = {0.1, 0.9, 0.8, 0.2, 0.5, 0.5};
  std::vector<std::uint8_t> y{1, 0, 1};
  std::vector<std::uint8_t> priv{1, 0, 1};
  LfrProblem problem = tiny_problem(x, y, priv);

  // theta layout: prototype rows then label weights
  std::vector<double> theta{0.2, 0.8, 0.7, 0.3, 0.9, 0.1};
  REQUIRE(theta.size() == problem.dim());
  // frozen: Lx 0.095212768942, Ly 0.547870729111, Lz 0.479584129026
  CHECK(problem.value(theta) == doctest::Approx(24.528029308079).epsilon(1e-9));
}

TEST_CASE("analytic gradient matches central finite differences") {
  Rng rng(61);
  std::size_t n = 24;
  Matrix x;
  x.rows = n;
  x.cols = 3;
  x.a.resize(n * 3);
  std::vector<std::uint8_t> y(n), priv(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < 3; ++j) x.a[i * 3 + j] = rng.next_double();
    y[i] = std::uint8_t(rng.next_below(2));
    priv[i] = std::uint8_t(i % 2);
  }
  LfrProblem problem{x, y, priv, 3, 0.01, 1.0, 50.0};

  std::vector<double> theta(problem.dim());
  for (auto& t : theta) t = 0.1 + 0.8 * rng.next_double();
  std::vector<double> grad(theta.size());
  problem.objective(theta, grad);

  double h = 1e-6;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    std::vector<double> hi = theta, lo = theta;
    hi[k] += h;
    lo[k] -= h;
    double fd = (problem.value(hi) - problem.value(lo)) / (2.0 * h);
    double denom = std::max({std::abs(fd), std::abs(grad[k]), 1e-8});
    CHECK(std::abs(grad[k] - fd) / denom <= 1e-4);
  }
}

TEST_CASE("fit runs a monotone descent and is deterministic") {
  Dataset ds = synth_biased(300, 0.3, 19);
  LfrOptions opts;
  opts.max_iters = 150;
  opts.seed = 4;
  FairRepresentation rep = FairRepresentation::fit(ds, opts);

  const auto& trace = rep.objective_trace();
  REQUIRE(trace.size() >= 2);
  for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-9);

  FairRepresentation again = FairRepresentation::fit(ds, opts);
  CHECK(again.parameters() == rep.parameters());

  LfrOptions other = opts;
  other.seed = 5;
  FairRepresentation different = FairRepresentation::fit(ds, other);
  CHECK(different.parameters() != rep.parameters());
}

TEST_CASE("reconstructions live in the scaled feature space") {
  Dataset ds = synth_biased(200, 0.3, 20);
  LfrOptions opts;
  opts.max_iters = 100;
  opts.seed = 7;
  FairRepresentation rep = FairRepresentation::fit(ds, opts);
  Matrix recon = rep.reconstruct(ds);
  CHECK(recon.rows == 200);
  CHECK(recon.cols == rep.encoder().feature_count());
  for (double v : recon.a) {
    CHECK(v >= -1.0);
    CHECK(v <= 2.0);  // prototypes near the unit box keep mixtures near it
  }
}

TEST_CASE("label scores stay inside [0,1] and the protected column is excluded") {
  Dataset ds = synth_biased(200, 0.3, 21);
  LfrOptions opts;
  opts.max_iters = 100;
  opts.seed = 8;
  FairRepresentation rep = FairRepresentation::fit(ds, opts);
  for (double s : rep.label_scores(ds)) {
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
  for (const auto& name : rep.encoder().feature_names()) {
    CHECK(name.rfind("group_", 0) != 0);
  }
}

TEST_CASE("stronger parity weight narrows the group gap in prototype usage") {
  Dataset ds = synth_biased(400, 0.5, 22);
  auto gap_for = [&](double az) {
    LfrOptions opts;
    opts.az = az;
    opts.max_iters = 250;
    opts.seed = 9;
    FairRepresentation rep = FairRepresentation::fit(ds, opts);
    // proxy: score-distribution gap between groups after the fit
    auto scores = rep.label_scores(ds);
    auto mask = group_mask(ds);
    double sp = 0, np = 0, su = 0, nu = 0;
    for (std::size_t i = 0; i < ds.n(); ++i) {
      if (mask[i]) { sp += scores[i]; np += 1; }
      else { su += scores[i]; nu += 1; }
    }
    return std::abs(sp / np - su / nu);
  };
  CHECK(gap_for(50.0) <= gap_for(0.0) + 0.02);
}

#include <doctest.h>

#include <cmath>
#include <optional>

#include "fairaudit/common.hpp"
#include "fairaudit/metrics.hpp"

using namespace fairaudit;

namespace {

// Straight re-count from the definitions, kept deliberately naive so it
// cannot share a bug with the library implementation.
struct NaiveMetrics {
  double accuracy;
  std::optional<double> di, spd, eod, aod;
};

NaiveMetrics naive(const std::vector<std::uint8_t>& y, const std::vector<std::uint8_t>& pred,
                   const std::vector<std::uint8_t>& priv) {
  NaiveMetrics m{};
  std::size_t n = y.size(), correct = 0;
  for (std::size_t i = 0; i < n; ++i) correct += y[i] == pred[i];
  m.accuracy = double(correct) / double(n);

  double np = 0, nu = 0, favp = 0, favu = 0;
  double tp_p = 0, pos_p = 0, tp_u = 0, pos_u = 0;
  double fp_p = 0, neg_p = 0, fp_u = 0, neg_u = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (priv[i]) {
      np += 1; favp += pred[i];
      if (y[i]) { pos_p += 1; tp_p += pred[i]; }
      else { neg_p += 1; fp_p += pred[i]; }
    } else {
      nu += 1; favu += pred[i];
      if (y[i]) { pos_u += 1; tp_u += pred[i]; }
      else { neg_u += 1; fp_u += pred[i]; }
    }
  }
  if (np > 0 && nu > 0) {
    double rp = favp / np, ru = favu / nu;
    m.spd = ru - rp;
    if (rp > 0) m.di = ru / rp;
    if (pos_p > 0 && pos_u > 0) m.eod = tp_u / pos_u - tp_p / pos_p;
    if (pos_p > 0 && pos_u > 0 && neg_p > 0 && neg_u > 0)
      m.aod = 0.5 * ((fp_u / neg_u - fp_p / neg_p) + (tp_u / pos_u - tp_p / pos_p));
  }
  return m;
}

}  // namespace

TEST_CASE("fairness metrics match a hand-worked example") {
  std::vector<std::uint8_t> y    {1, 0, 1, 1, 0, 0, 1, 0};
  std::vector<std::uint8_t> pred {1, 0, 0, 1, 1, 0, 1, 1};
  std::vector<std::uint8_t> priv {1, 1, 1, 1, 0, 0, 0, 0};

  FairnessReport r = fairness_report(y, pred, priv);
  CHECK(r.accuracy == doctest::Approx(0.625));
  REQUIRE(r.disparate_impact.has_value());
  CHECK(*r.disparate_impact == doctest::Approx(1.5));
  REQUIRE(r.statistical_parity.has_value());
  CHECK(*r.statistical_parity == doctest::Approx(0.25));
  REQUIRE(r.equal_opportunity.has_value());
  CHECK(*r.equal_opportunity == doctest::Approx(1.0 / 3.0));
  REQUIRE(r.average_odds.has_value());
  CHECK(*r.average_odds == doctest::Approx(0.5));
}

TEST_CASE("metrics agree with a brute-force recount on random inputs") {
  Rng rng(20240101);
  for (int trial = 0; trial < 400; ++trial) {
    std::size_t n = 2 + rng.next_below(30);
    std::vector<std::uint8_t> y(n), pred(n), priv(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = std::uint8_t(rng.next_below(2));
      pred[i] = std::uint8_t(rng.next_below(2));
      priv[i] = std::uint8_t(rng.next_below(2));
    }
    FairnessReport got = fairness_report(y, pred, priv);
    NaiveMetrics want = naive(y, pred, priv);

    CHECK(std::abs(got.accuracy - want.accuracy) <= 1e-12);
    CHECK(got.disparate_impact.has_value() == want.di.has_value());
    CHECK(got.statistical_parity.has_value() == want.spd.has_value());
    CHECK(got.equal_opportunity.has_value() == want.eod.has_value());
    CHECK(got.average_odds.has_value() == want.aod.has_value());
    if (want.di) CHECK(std::abs(*got.disparate_impact - *want.di) <= 1e-12);
    if (want.spd) CHECK(std::abs(*got.statistical_parity - *want.spd) <= 1e-12);
    if (want.eod) CHECK(std::abs(*got.equal_opportunity - *want.eod) <= 1e-12);
    if (want.aod) CHECK(std::abs(*got.average_odds - *want.aod) <= 1e-12);
  }
}

TEST_CASE("group metrics are undefined exactly when their inputs vanish") {
  SUBCASE("single-group input leaves every comparison unset") {
    std::vector<std::uint8_t> y{1, 0, 1}, pred{1, 1, 0}, priv{1, 1, 1};
    FairnessReport r = fairness_report(y, pred, priv);
    CHECK_FALSE(r.disparate_impact.has_value());
    CHECK_FALSE(r.statistical_parity.has_value());
    CHECK_FALSE(r.equal_opportunity.has_value());
    CHECK_FALSE(r.average_odds.has_value());
    CHECK(r.accuracy == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("zero privileged selection rate leaves DI unset but SPD defined") {
    std::vector<std::uint8_t> y{1, 0, 1, 0}, pred{0, 0, 1, 1}, priv{1, 1, 0, 0};
    FairnessReport r = fairness_report(y, pred, priv);
    CHECK_FALSE(r.disparate_impact.has_value());
    REQUIRE(r.statistical_parity.has_value());
    CHECK(*r.statistical_parity == doctest::Approx(1.0));
  }
  SUBCASE("no positives in one group leaves TPR comparisons unset") {
    std::vector<std::uint8_t> y{0, 0, 1, 0}, pred{1, 0, 1, 1}, priv{1, 1, 0, 0};
    FairnessReport r = fairness_report(y, pred, priv);
    CHECK_FALSE(r.equal_opportunity.has_value());
    CHECK_FALSE(r.average_odds.has_value());
    CHECK(r.disparate_impact.has_value());
  }
}

TEST_CASE("confusion validates its inputs") {
  std::vector<std::uint8_t> y{1, 0}, pred{1}, priv{1, 0};
  CHECK_THROWS_AS(confusion(y, pred, priv), DataError);
  std::vector<std::uint8_t> empty;
  CHECK_THROWS_AS(confusion(empty, empty, empty), DataError);
  std::vector<std::uint8_t> bad{2, 0};
  std::vector<std::uint8_t> ok{1, 0};
  CHECK_THROWS_AS(confusion(bad, ok, ok), DataError);
}

TEST_CASE("aggregate reports sample stddev over defined folds only") {
  FairnessReport a, b, c;
  a.accuracy = 0.8; b.accuracy = 0.9; c.accuracy = 0.7;
  a.disparate_impact = 0.5;
  b.disparate_impact = 0.7;
  // c leaves DI unset: only two folds count toward that metric
  AggregateReport agg = aggregate({a, b, c});
  CHECK(agg.accuracy.count == 3);
  CHECK(agg.accuracy.mean == doctest::Approx(0.8));
  CHECK(agg.accuracy.stddev == doctest::Approx(0.1));
  CHECK(agg.disparate_impact.count == 2);
  CHECK(agg.disparate_impact.mean == doctest::Approx(0.6));
  CHECK(agg.disparate_impact.stddev == doctest::Approx(std::sqrt(0.02)));

  // undefined everywhere stays undefined rather than erroring
  FairnessReport d; d.accuracy = 0.5;
  AggregateReport none = aggregate({d});
  CHECK(none.disparate_impact.count == 0);
}

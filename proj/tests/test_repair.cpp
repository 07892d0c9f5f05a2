#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fairaudit/dataset.hpp"
#include "fairaudit/repair.hpp"

using namespace fairaudit;

TEST_CASE("empirical_quantiles interpolates the 101-point grid linearly") {
  std::vector<double> sorted{1, 1, 2, 3, 4, 5, 6, 9};
  auto grid = empirical_quantiles(sorted);
  REQUIRE(grid.size() == 101);
  // frozen from an independent linear-interpolation computation
  CHECK(grid[0] == doctest::Approx(1.0));
  CHECK(grid[25] == doctest::Approx(1.75));
  CHECK(grid[50] == doctest::Approx(3.5));
  CHECK(grid[75] == doctest::Approx(5.25));
  CHECK(grid[100] == doctest::Approx(9.0));
  CHECK(grid[10] == doctest::Approx(1.0));
  CHECK(grid[33] == doctest::Approx(2.31));
  CHECK(grid[90] == doctest::Approx(6.9));
  CHECK(std::is_sorted(grid.begin(), grid.end()));
}

TEST_CASE("empirical_cdf is the right-continuous step fraction") {
  std::vector<double> sorted{1, 2, 2, 5};
  CHECK(empirical_cdf(sorted, 0.5) == doctest::Approx(0.0));
  CHECK(empirical_cdf(sorted, 1.0) == doctest::Approx(0.25));
  CHECK(empirical_cdf(sorted, 2.0) == doctest::Approx(0.75));
  CHECK(empirical_cdf(sorted, 3.0) == doctest::Approx(0.75));
  CHECK(empirical_cdf(sorted, 5.0) == doctest::Approx(1.0));
  CHECK(empirical_cdf(sorted, 9.0) == doctest::Approx(1.0));
}

TEST_CASE("lambda zero is the identity transform") {
  Dataset ds = synth_biased(500, 0.3, 13);
  RepairOptions opts;
  opts.lambda = 0.0;
  QuantileRepair rep = QuantileRepair::fit(ds, opts);
  Dataset out = rep.transform(ds);
  for (const auto& col : ds.schema.columns) {
    if (col.kind != ColumnKind::numeric) continue;
    CHECK(out.numeric_column(col.name) == ds.numeric_column(col.name));
  }
}

TEST_CASE("full repair pulls both group distributions onto the shared target") {
  Dataset ds = synth_biased(4000, 0.4, 13);
  RepairOptions opts;
  opts.lambda = 1.0;
  QuantileRepair rep = QuantileRepair::fit(ds, opts);
  Dataset out = rep.transform(ds);
  auto mask = group_mask(ds);

  for (const char* name : {"f1", "f2"}) {
    std::vector<double> a, b;
    const auto& col = out.numeric_column(name);
    for (std::size_t i = 0; i < out.n(); ++i) (mask[i] ? a : b).push_back(col[i]);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    auto qa = empirical_quantiles(a);
    auto qb = empirical_quantiles(b);
    // grid resolution: adjacent target quantile spacing bounds the residual
    double resolution = 0.0;
    for (std::size_t i = 1; i < qa.size(); ++i)
      resolution = std::max(resolution, std::max(qa[i] - qa[i - 1], qb[i] - qb[i - 1]));
    for (std::size_t i = 5; i <= 95; ++i)
      CHECK(std::abs(qa[i] - qb[i]) <= resolution + 1e-9);
  }
}

TEST_CASE("repair preserves within-group order") {
  Dataset ds = synth_biased(1000, 0.3, 14);
  RepairOptions opts;
  opts.lambda = 1.0;
  QuantileRepair rep = QuantileRepair::fit(ds, opts);
  Dataset out = rep.transform(ds);
  auto mask = group_mask(ds);

  const auto& before = ds.numeric_column("f1");
  const auto& after = out.numeric_column("f1");
  for (int g = 0; g < 2; ++g) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ds.n(); ++i)
      if (int(mask[i]) == g) idx.push_back(i);
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < std::min(idx.size(), a + 40); ++b) {
        if (before[idx[a]] < before[idx[b]])
          CHECK(after[idx[a]] <= after[idx[b]] + 1e-12);
        if (before[idx[a]] > before[idx[b]])
          CHECK(after[idx[a]] >= after[idx[b]] - 1e-12);
      }
  }
}

TEST_CASE("partial repair interpolates between identity and full repair") {
  Dataset ds = synth_biased(800, 0.4, 15);
  RepairOptions half;
  half.lambda = 0.5;
  RepairOptions full;
  full.lambda = 1.0;
  Dataset h = QuantileRepair::fit(ds, half).transform(ds);
  Dataset f = QuantileRepair::fit(ds, full).transform(ds);

  const auto& orig = ds.numeric_column("f1");
  const auto& hv = h.numeric_column("f1");
  const auto& fv = f.numeric_column("f1");
  for (std::size_t i = 0; i < 100; ++i) {
    double expect = 0.5 * orig[i] + 0.5 * fv[i];
    CHECK(hv[i] == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("categorical columns pass through untouched") {
  Dataset ds = synth_biased(300, 0.3, 16);
  RepairOptions opts;
  opts.lambda = 1.0;
  Dataset out = QuantileRepair::fit(ds, opts).transform(ds);
  const auto& before = ds.categorical_column("c1");
  const auto& after = out.categorical_column("c1");
  CHECK(before == after);
}

TEST_CASE("repair options are validated") {
  Dataset ds = synth_biased(100, 0.3, 17);
  RepairOptions bad;
  bad.lambda = 1.5;
  CHECK_THROWS_AS(QuantileRepair::fit(ds, bad), ConfigError);
  bad.lambda = -0.1;
  CHECK_THROWS_AS(QuantileRepair::fit(ds, bad), ConfigError);
}

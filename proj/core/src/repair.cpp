#include "fairaudit/repair.hpp"

#include <algorithm>
#include <cmath>

namespace fairaudit {

std::vector<double> empirical_quantiles(const std::vector<double>& sorted_values) {
  if (sorted_values.empty()) throw DataError("cannot take quantiles of an empty sample");
  const std::size_t m = sorted_values.size();
  std::vector<double> grid(101);
  for (int qi = 0; qi <= 100; ++qi) {
    double h = (double(qi) / 100.0) * double(m - 1);
    std::size_t lo = std::size_t(h);
    std::size_t hi = std::min(lo + 1, m - 1);
    double frac = h - double(lo);
    grid[std::size_t(qi)] = sorted_values[lo] * (1.0 - frac) + sorted_values[hi] * frac;
  }
  return grid;
}

double empirical_cdf(const std::vector<double>& sorted_values, double x) {
  if (sorted_values.empty()) throw DataError("cannot evaluate CDF of an empty sample");
  auto it = std::upper_bound(sorted_values.begin(), sorted_values.end(), x);
  return double(it - sorted_values.begin()) / double(sorted_values.size());
}

namespace {

double grid_at(const std::vector<double>& grid, double q) {
  double h = std::clamp(q, 0.0, 1.0) * 100.0;
  std::size_t lo = std::size_t(h);
  std::size_t hi = std::min(lo + 1, std::size_t(100));
  double frac = h - double(lo);
  return grid[lo] * (1.0 - frac) + grid[hi] * frac;
}

}  // namespace

QuantileRepair QuantileRepair::fit(const Dataset& train, RepairOptions opts) {
  if (!(opts.lambda >= 0.0 && opts.lambda <= 1.0))
    throw ConfigError("repair strength lambda must lie in [0, 1]");
  QuantileRepair rep;
  rep.lambda_ = opts.lambda;
  auto mask = group_mask(train);

  for (std::size_t ci = 0; ci < train.schema.columns.size(); ++ci) {
    if (train.schema.columns[ci].kind != ColumnKind::numeric) continue;
    ColumnState st;
    st.column = ci;
    const auto& vals = train.numeric[train.slot[ci]];
    for (std::size_t i = 0; i < vals.size(); ++i)
      st.sorted[mask[i] ? 1 : 0].push_back(vals[i]);
    for (int g = 0; g < 2; ++g) {
      if (st.sorted[std::size_t(g)].empty())
        throw DataError("cannot fit repair: a protected group has no training records");
      std::sort(st.sorted[std::size_t(g)].begin(), st.sorted[std::size_t(g)].end());
    }
    auto q0 = empirical_quantiles(st.sorted[0]);
    auto q1 = empirical_quantiles(st.sorted[1]);
    st.target.resize(101);
    // Median across the two groups at each grid point.
    for (std::size_t qi = 0; qi <= 100; ++qi) st.target[qi] = 0.5 * (q0[qi] + q1[qi]);
    rep.columns_.push_back(std::move(st));
  }
  return rep;
}

Dataset QuantileRepair::transform(const Dataset& ds) const {
  Dataset out = ds;
  if (lambda_ == 0.0) return out;
  auto mask = group_mask(ds);
  for (const auto& st : columns_) {
    if (st.column >= out.schema.columns.size() ||
        out.schema.columns[st.column].kind != ColumnKind::numeric)
      throw DataError("repair/schema mismatch");
    auto& vals = out.numeric[out.slot[st.column]];
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const auto& group_sorted = st.sorted[mask[i] ? 1 : 0];
      double u = empirical_cdf(group_sorted, vals[i]);
      double repaired = grid_at(st.target, u);
      vals[i] = (1.0 - lambda_) * vals[i] + lambda_ * repaired;
    }
  }
  return out;
}

}  // namespace fairaudit

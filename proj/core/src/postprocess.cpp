#include "fairaudit/postprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace fairaudit {

namespace {

void check_inputs(std::size_t n, std::size_t ny, std::size_t np) {
  if (n == 0) throw DataError("post-processing needs a nonempty fit set");
  if (n != ny || n != np)
    throw DataError("scores, labels and group flags must have equal length");
}

}  // namespace

RocRule fit_reject_option(const std::vector<double>& scores, const std::vector<std::uint8_t>& y,
                          const std::vector<std::uint8_t>& privileged, RocOptions opts) {
  check_inputs(scores.size(), y.size(), privileged.size());
  // Per (group, label) cell, sorted scores allow O(log n) band counts.
  std::array<std::array<std::vector<double>, 2>, 2> cell;
  for (std::size_t i = 0; i < scores.size(); ++i)
    cell[privileged[i]][y[i]].push_back(scores[i]);
  for (auto& g : cell)
    for (auto& c : g) std::sort(c.begin(), c.end());

  auto count_less = [](const std::vector<double>& v, double x) {
    return double(std::lower_bound(v.begin(), v.end(), x) - v.begin());
  };
  auto count_leq = [](const std::vector<double>& v, double x) {
    return double(std::upper_bound(v.begin(), v.end(), x) - v.begin());
  };

  double n_u = double(cell[0][0].size() + cell[0][1].size());
  double n_p = double(cell[1][0].size() + cell[1][1].size());
  if (n_u == 0.0 || n_p == 0.0)
    throw DataError("reject option needs both protected groups in the fit set");
  double pos = double(cell[0][1].size() + cell[1][1].size());
  double neg = double(cell[0][0].size() + cell[1][0].size());

  RocRule best;
  bool have_ok = false;
  double best_ok_bacc = -1.0, best_any_gap = 1e300;
  RocRule best_any;

  for (int ti = 1; ti <= 99; ++ti) {
    double t = double(ti) / 100.0;
    double max_m = std::min(t, 1.0 - t);
    for (int mi = 1; mi <= 50; ++mi) {
      double m = max_m * double(mi) / 50.0;
      double lo = t - m, hi = t + m;
      // Favorable predictions: unprivileged rows inside the open band or at
      // score >= t+m; privileged rows only at score >= t+m.
      double fav_u = 0.0, fav_p = 0.0, tp = 0.0, fp = 0.0;
      for (int yy = 0; yy < 2; ++yy) {
        const auto& cu = cell[0][yy];
        double band = count_less(cu, hi) - count_leq(cu, lo);
        double upper = double(cu.size()) - count_less(cu, hi);
        double fav = band + upper;
        fav_u += fav;
        (yy ? tp : fp) += fav;
        const auto& cp = cell[1][yy];
        double upper_p = double(cp.size()) - count_less(cp, hi);
        fav_p += upper_p;
        (yy ? tp : fp) += upper_p;
      }
      double spd = fav_u / n_u - fav_p / n_p;
      double tpr = pos > 0.0 ? tp / pos : 0.0;
      double tnr = neg > 0.0 ? (neg - fp) / neg : 0.0;
      double bacc = 0.5 * (tpr + tnr);
      if (std::fabs(spd) <= opts.spd_tolerance) {
        if (!have_ok || bacc > best_ok_bacc) {
          have_ok = true;
          best_ok_bacc = bacc;
          best = {t, m, false, spd, bacc};
        }
      }
      if (std::fabs(spd) < best_any_gap) {
        best_any_gap = std::fabs(spd);
        best_any = {t, m, true, spd, bacc};
      }
    }
  }
  return have_ok ? best : best_any;
}

std::vector<std::uint8_t> apply_reject_option(const RocRule& rule,
                                              const std::vector<double>& scores,
                                              const std::vector<std::uint8_t>& privileged) {
  if (scores.size() != privileged.size())
    throw DataError("scores and group flags must have equal length");
  std::vector<std::uint8_t> out(scores.size());
  double lo = rule.threshold - rule.margin, hi = rule.threshold + rule.margin;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    double s = scores[i];
    if (s > lo && s < hi) {
      out[i] = privileged[i] ? 0 : 1;
    } else {
      out[i] = s >= rule.threshold ? 1 : 0;
    }
  }
  return out;
}

namespace {

struct CellCounts {
  // count[g][y][b]: rows of group g, label y, base prediction b
  double count[2][2][2] = {{{0, 0}, {0, 0}}, {{0, 0}, {0, 0}}};
};

}  // namespace

OddsMix fit_equalized_odds(const std::vector<std::uint8_t>& base_labels,
                           const std::vector<std::uint8_t>& y,
                           const std::vector<std::uint8_t>& privileged) {
  check_inputs(base_labels.size(), y.size(), privileged.size());
  CellCounts c;
  for (std::size_t i = 0; i < y.size(); ++i) ++c.count[privileged[i]][y[i]][base_labels[i]];

  OddsMix fit;
  bool have_pos[2], have_neg[2];
  for (int g = 0; g < 2; ++g) {
    double pos = c.count[g][1][0] + c.count[g][1][1];
    double neg = c.count[g][0][0] + c.count[g][0][1];
    have_pos[g] = pos > 0.0;
    have_neg[g] = neg > 0.0;
    fit.base_tpr[g] = have_pos[g] ? c.count[g][1][1] / pos : 0.0;
    fit.base_fpr[g] = have_neg[g] ? c.count[g][0][1] / neg : 0.0;
  }
  bool use_tpr = have_pos[0] && have_pos[1];
  bool use_fpr = have_neg[0] && have_neg[1];
  if (!use_tpr) {
    fit.degenerate = true;
    fit.relaxed.push_back("tpr");
  }
  if (!use_fpr) {
    fit.degenerate = true;
    fit.relaxed.push_back("fpr");
  }
  if (!use_tpr && !use_fpr) return fit;  // identity mix

  double total = 0.0;
  for (int g = 0; g < 2; ++g)
    for (int yy = 0; yy < 2; ++yy)
      for (int b = 0; b < 2; ++b) total += c.count[g][yy][b];

  // Variables x = (p[0][0], p[0][1], p[1][0], p[1][1]) where p[g][b] is the
  // probability of the favorable label for base prediction b in group g.
  // Post-mix TPR_g = p[g][1] * tpr_g + p[g][0] * (1 - tpr_g); FPR alike.
  // cost(x) = sum_g [ mass(g,0) * FPR_g + mass(g,1) * (1 - TPR_g) ].
  auto rate = [&](const double* x, int g, int yy) {
    double base = yy ? fit.base_tpr[g] : fit.base_fpr[g];
    return x[2 * g + 1] * base + x[2 * g + 0] * (1.0 - base);
  };
  auto cost = [&](const double* x) {
    double v = 0.0;
    for (int g = 0; g < 2; ++g) {
      double mass0 = (c.count[g][0][0] + c.count[g][0][1]) / total;
      double mass1 = (c.count[g][1][0] + c.count[g][1][1]) / total;
      v += mass0 * rate(x, g, 0) + mass1 * (1.0 - rate(x, g, 1));
    }
    return v;
  };

  // Equality constraints as a x = 0 rows over the 4 variables.
  std::vector<std::array<double, 4>> eq;
  if (use_tpr)
    eq.push_back({1.0 - fit.base_tpr[0], fit.base_tpr[0], -(1.0 - fit.base_tpr[1]),
                  -fit.base_tpr[1]});
  if (use_fpr)
    eq.push_back({1.0 - fit.base_fpr[0], fit.base_fpr[0], -(1.0 - fit.base_fpr[1]),
                  -fit.base_fpr[1]});

  const double identity[4] = {0.0, 1.0, 0.0, 1.0};
  double best_cost = 1e300, best_dist = 1e300;
  double best_x[4] = {0.0, 1.0, 0.0, 1.0};
  bool found = false;
  const double tol = 1e-9;

  std::size_t n_eq = eq.size();
  std::size_t n_free = 4 - n_eq;  // bounds to pin so the system is square
  // Enumerate which variables are pinned and at which bound.
  std::vector<std::size_t> vars = {0, 1, 2, 3};
  std::vector<std::vector<std::size_t>> pin_sets;
  {
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
      if (pick.size() == n_free) {
        pin_sets.push_back(pick);
        return;
      }
      for (std::size_t i = start; i < 4; ++i) {
        pick.push_back(i);
        rec(i + 1);
        pick.pop_back();
      }
    };
    rec(0);
  }

  for (const auto& pins : pin_sets) {
    for (std::size_t mask = 0; mask < (std::size_t(1) << pins.size()); ++mask) {
      double x[4];
      bool pinned[4] = {false, false, false, false};
      for (std::size_t pi = 0; pi < pins.size(); ++pi) {
        x[pins[pi]] = (mask >> pi) & 1 ? 1.0 : 0.0;
        pinned[pins[pi]] = true;
      }
      std::vector<std::size_t> free_vars;
      for (std::size_t vix = 0; vix < 4; ++vix)
        if (!pinned[vix]) free_vars.push_back(vix);
      // Solve the n_eq x n_eq system for the free variables.
      if (free_vars.size() != n_eq) continue;
      if (n_eq == 1) {
        double a = eq[0][free_vars[0]];
        double b = 0.0;
        for (std::size_t vix = 0; vix < 4; ++vix)
          if (pinned[vix]) b -= eq[0][vix] * x[vix];
        if (std::fabs(a) < 1e-14) continue;
        x[free_vars[0]] = b / a;
      } else {
        double a00 = eq[0][free_vars[0]], a01 = eq[0][free_vars[1]];
        double a10 = eq[1][free_vars[0]], a11 = eq[1][free_vars[1]];
        double b0 = 0.0, b1 = 0.0;
        for (std::size_t vix = 0; vix < 4; ++vix) {
          if (!pinned[vix]) continue;
          b0 -= eq[0][vix] * x[vix];
          b1 -= eq[1][vix] * x[vix];
        }
        double det = a00 * a11 - a01 * a10;
        if (std::fabs(det) < 1e-14) continue;
        x[free_vars[0]] = (b0 * a11 - b1 * a01) / det;
        x[free_vars[1]] = (a00 * b1 - a10 * b0) / det;
      }
      bool ok = true;
      for (double v : x)
        if (!(v >= -tol && v <= 1.0 + tol)) ok = false;
      if (!ok) continue;
      for (auto& v : x) v = std::clamp(v, 0.0, 1.0);
      double cv = cost(x);
      double dist = 0.0;
      for (int vix = 0; vix < 4; ++vix) dist += std::fabs(x[vix] - identity[vix]);
      if (!found || cv < best_cost - 1e-12 ||
          (std::fabs(cv - best_cost) <= 1e-12 && dist < best_dist)) {
        found = true;
        best_cost = cv;
        best_dist = dist;
        for (int vix = 0; vix < 4; ++vix) best_x[vix] = x[vix];
      }
    }
  }
  if (!found)
    throw DataError("no feasible rate-equalizing mix exists for these counts");
  fit.mix[0][0] = best_x[0];
  fit.mix[0][1] = best_x[1];
  fit.mix[1][0] = best_x[2];
  fit.mix[1][1] = best_x[3];
  return fit;
}

GroupRates expected_rates(const OddsMix& fit) {
  GroupRates r;
  for (int g = 0; g < 2; ++g) {
    r.tpr[g] = fit.mix[g][1] * fit.base_tpr[g] + fit.mix[g][0] * (1.0 - fit.base_tpr[g]);
    r.fpr[g] = fit.mix[g][1] * fit.base_fpr[g] + fit.mix[g][0] * (1.0 - fit.base_fpr[g]);
  }
  return r;
}

std::vector<std::uint8_t> apply_equalized_odds(const OddsMix& fit,
                                               const std::vector<std::uint8_t>& base_labels,
                                               const std::vector<std::uint8_t>& privileged,
                                               std::uint64_t seed) {
  if (base_labels.size() != privileged.size())
    throw DataError("labels and group flags must have equal length");
  Rng rng(derive_seed(seed, 0xe90dd5));
  std::vector<std::uint8_t> out(base_labels.size());
  for (std::size_t i = 0; i < base_labels.size(); ++i) {
    double p = fit.mix[privileged[i]][base_labels[i]];
    out[i] = rng.next_double() < p ? 1 : 0;
  }
  return out;
}

CostMix fit_calibrated_odds(const std::vector<double>& scores, const std::vector<std::uint8_t>& y,
                            const std::vector<std::uint8_t>& privileged) {
  check_inputs(scores.size(), y.size(), privileged.size());
  double sum_fn[2] = {0, 0}, sum_fp[2] = {0, 0}, sum_y[2] = {0, 0};
  double n_pos[2] = {0, 0}, n_neg[2] = {0, 0};
  for (std::size_t i = 0; i < scores.size(); ++i) {
    int g = privileged[i];
    sum_y[g] += y[i];
    if (y[i]) {
      sum_fn[g] += 1.0 - scores[i];
      n_pos[g] += 1.0;
    } else {
      sum_fp[g] += scores[i];
      n_neg[g] += 1.0;
    }
  }
  CostMix fit;
  for (int g = 0; g < 2; ++g) {
    double n_g = n_pos[g] + n_neg[g];
    if (n_pos[g] == 0.0 || n_neg[g] == 0.0) {
      fit.degenerate = true;
      fit.base_rate[g] = n_g > 0.0 ? sum_y[g] / n_g : 0.0;
      continue;
    }
    fit.base_rate[g] = sum_y[g] / n_g;
    double gfnr = sum_fn[g] / n_pos[g];
    double gfpr = sum_fp[g] / n_neg[g];
    fit.cost[g] = 0.5 * (gfnr + gfpr);
  }
  if (fit.degenerate) return fit;  // alpha stays 0

  // A constant prediction at the base rate has generalized cost 1/2
  // regardless of the group, so that is the mixing target.
  fit.low_cost_group = fit.cost[0] <= fit.cost[1] ? 0 : 1;
  int lo = fit.low_cost_group, hi = 1 - lo;
  double trivial = 0.5;
  double denom = trivial - fit.cost[lo];
  if (denom <= 0.0) {
    fit.degenerate = true;  // the cheap group cannot get worse by mixing
    fit.alpha = 0.0;
    return fit;
  }
  double alpha = (fit.cost[hi] - fit.cost[lo]) / denom;
  if (alpha > 1.0) {
    fit.alpha = 1.0;
    fit.clamped = true;
  } else {
    fit.alpha = alpha;
  }
  return fit;
}

std::vector<double> apply_calibrated_odds(const CostMix& fit, const std::vector<double>& scores,
                                          const std::vector<std::uint8_t>& privileged,
                                          std::uint64_t seed) {
  if (scores.size() != privileged.size())
    throw DataError("scores and group flags must have equal length");
  Rng rng(derive_seed(seed, 0xce05));
  std::vector<double> out = scores;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (int(privileged[i]) != fit.low_cost_group) continue;
    if (rng.next_double() < fit.alpha) out[i] = fit.base_rate[fit.low_cost_group];
  }
  return out;
}

}  // namespace fairaudit

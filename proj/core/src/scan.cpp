#include "fairaudit/scan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fairaudit {

namespace {

constexpr double kClipLo = 0.01;
constexpr double kClipHi = 0.99;
constexpr double kQMax = 20.0;
constexpr std::size_t kMaxLevels = 256;

double clip(double p) { return std::clamp(p, kClipLo, kClipHi); }

/// Subset statistics sufficient for the likelihood: total outcomes and a
/// histogram of expectation levels (or per-record lists past kMaxLevels).
struct Agg {
  double y_sum = 0.0;
  double e_sum = 0.0;
  std::size_t n = 0;
  std::vector<double> level_count;  // histogram path
  std::vector<double> raw_p;        // fallback path

  void reset(std::size_t levels, bool histogram) {
    y_sum = e_sum = 0.0;
    n = 0;
    if (histogram) {
      level_count.assign(levels, 0.0);
    } else {
      raw_p.clear();
    }
  }
  void combine(const Agg& other) {
    y_sum += other.y_sum;
    e_sum += other.e_sum;
    n += other.n;
    if (!other.level_count.empty()) {
      if (level_count.empty()) level_count.assign(other.level_count.size(), 0.0);
      for (std::size_t l = 0; l < other.level_count.size(); ++l)
        level_count[l] += other.level_count[l];
    }
    raw_p.insert(raw_p.end(), other.raw_p.begin(), other.raw_p.end());
  }
};

double agg_llr(const Agg& a, const std::vector<double>& levels, double q) {
  double v = a.y_sum * std::log(q);
  if (!a.level_count.empty()) {
    for (std::size_t l = 0; l < levels.size(); ++l) {
      if (a.level_count[l] == 0.0) continue;
      v -= a.level_count[l] * std::log(1.0 - levels[l] + q * levels[l]);
    }
  } else {
    for (double p : a.raw_p) v -= std::log(1.0 - p + q * p);
  }
  return v;
}

// Ternary search over ln q; the likelihood is strictly concave there.
std::pair<double, double> agg_optimal_q(const Agg& a, const std::vector<double>& levels,
                                        ScanDirection dir) {
  if (a.n == 0) return {1.0, 0.0};
  double lo = dir == ScanDirection::over ? 0.0 : std::log(1.0 / kQMax);
  double hi = dir == ScanDirection::over ? std::log(kQMax) : 0.0;
  for (int it = 0; it < 90; ++it) {
    double m1 = lo + (hi - lo) / 3.0;
    double m2 = hi - (hi - lo) / 3.0;
    if (agg_llr(a, levels, std::exp(m1)) < agg_llr(a, levels, std::exp(m2))) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  double q = std::exp(0.5 * (lo + hi));
  return {q, agg_llr(a, levels, q)};
}

struct Workspace {
  std::vector<std::size_t> cat_cols;               // schema indices
  std::vector<const std::vector<std::int32_t>*> codes;
  std::vector<std::size_t> n_values;
  std::vector<double> p;                           // clipped expectations
  std::vector<double> levels;                      // distinct p values
  std::vector<std::size_t> level_of;               // per record, histogram path
  bool histogram = true;

  Workspace(const Dataset& ds, const std::vector<double>& expectations) {
    if (expectations.size() != ds.n())
      throw DataError("expectations length does not match record count");
    for (std::size_t ci = 0; ci < ds.schema.columns.size(); ++ci) {
      if (ds.schema.columns[ci].kind != ColumnKind::categorical) continue;
      cat_cols.push_back(ci);
      codes.push_back(&ds.categorical[ds.slot[ci]]);
      n_values.push_back(ds.schema.columns[ci].categories.size());
    }
    if (cat_cols.empty()) throw DataError("scan needs at least one categorical column");
    p.resize(expectations.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!std::isfinite(expectations[i]))
        throw DataError("expectations must be finite probabilities");
      p[i] = clip(expectations[i]);
    }
    levels = p;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    histogram = levels.size() <= kMaxLevels;
    if (histogram) {
      level_of.resize(p.size());
      for (std::size_t i = 0; i < p.size(); ++i)
        level_of[i] = std::size_t(
            std::lower_bound(levels.begin(), levels.end(), p[i]) - levels.begin());
    }
  }

  void add_record(Agg& a, std::size_t i, const std::vector<std::uint8_t>& y) const {
    a.y_sum += y[i];
    a.e_sum += p[i];
    ++a.n;
    if (histogram) {
      a.level_count[level_of[i]] += 1.0;
    } else {
      a.raw_p.push_back(p[i]);
    }
  }
};

using Included = std::vector<std::vector<std::uint8_t>>;  // [attr][value]

double penalty_of(const Included& inc, double penalty) {
  double total = 0.0;
  for (const auto& attr : inc) {
    std::size_t on = 0;
    for (auto v : attr) on += v;
    if (on < attr.size()) total += penalty * double(on);
  }
  return total;
}

Subgroup to_subgroup(const Dataset& ds, const Workspace& ws, const Included& inc) {
  Subgroup sg;
  for (std::size_t a = 0; a < ws.cat_cols.size(); ++a) {
    std::size_t on = 0;
    for (auto v : inc[a]) on += v;
    if (on == inc[a].size()) continue;
    const auto& col = ds.schema.columns[ws.cat_cols[a]];
    std::vector<std::string> vals;
    for (std::size_t v = 0; v < inc[a].size(); ++v)
      if (inc[a][v]) vals.push_back(col.categories[v]);
    sg.values[col.name] = std::move(vals);
  }
  return sg;
}

Included from_subgroup(const Dataset& ds, const Workspace& ws, const Subgroup& sg) {
  Included inc(ws.cat_cols.size());
  for (std::size_t a = 0; a < ws.cat_cols.size(); ++a)
    inc[a].assign(ws.n_values[a], 1);
  for (const auto& [name, vals] : sg.values) {
    bool found = false;
    for (std::size_t a = 0; a < ws.cat_cols.size(); ++a) {
      const auto& col = ds.schema.columns[ws.cat_cols[a]];
      if (col.name != name) continue;
      found = true;
      std::fill(inc[a].begin(), inc[a].end(), 0);
      for (const auto& v : vals) {
        auto it = std::find(col.categories.begin(), col.categories.end(), v);
        if (it == col.categories.end())
          throw DataError("subgroup value '" + v + "' not found in column '" + name + "'");
        inc[a][std::size_t(it - col.categories.begin())] = 1;
      }
    }
    if (!found) throw DataError("subgroup attribute '" + name + "' is not categorical");
  }
  for (const auto& attr : inc) {
    std::size_t on = 0;
    for (auto v : attr) on += v;
    if (on == 0) throw DataError("subgroup restricts an attribute to no values");
  }
  return inc;
}

struct Evaluation {
  double score = 0.0;
  double q = 1.0;
  std::size_t n = 0;
};

Evaluation evaluate(const Workspace& ws, const std::vector<std::uint8_t>& y, const Included& inc,
                    ScanDirection dir, double penalty) {
  Agg a;
  a.reset(ws.levels.size(), ws.histogram);
  const std::size_t n = ws.p.size();
  for (std::size_t i = 0; i < n; ++i) {
    bool match = true;
    for (std::size_t at = 0; at < ws.codes.size() && match; ++at)
      match = inc[at][std::size_t((*ws.codes[at])[i])] != 0;
    if (match) ws.add_record(a, i, y);
  }
  auto [q, raw] = agg_optimal_q(a, ws.levels, dir);
  return {raw - penalty_of(inc, penalty), q, a.n};
}

}  // namespace

double bernoulli_score(const std::vector<double>& p, const std::vector<std::uint8_t>& y,
                       double q) {
  if (p.size() != y.size()) throw DataError("expectations and outcomes must align");
  if (!(q > 0.0)) throw ConfigError("odds multiplier q must be positive");
  double v = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double pc = clip(p[i]);
    v += double(y[i]) * std::log(q) - std::log(1.0 - pc + q * pc);
  }
  return v;
}

std::pair<double, double> optimal_q(const std::vector<double>& p,
                                    const std::vector<std::uint8_t>& y, ScanDirection dir) {
  if (p.size() != y.size()) throw DataError("expectations and outcomes must align");
  Agg a;
  std::vector<double> levels;  // raw path keeps this empty
  a.reset(0, false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    a.y_sum += y[i];
    a.e_sum += clip(p[i]);
    ++a.n;
    a.raw_p.push_back(clip(p[i]));
  }
  return agg_optimal_q(a, levels, dir);
}

std::size_t subgroup_count(const Dataset& ds, const Subgroup& subgroup) {
  std::vector<double> dummy(ds.n(), 0.5);
  Workspace ws(ds, dummy);
  Included inc = from_subgroup(ds, ws, subgroup);
  std::size_t count = 0;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    bool match = true;
    for (std::size_t at = 0; at < ws.codes.size() && match; ++at)
      match = inc[at][std::size_t((*ws.codes[at])[i])] != 0;
    count += match;
  }
  return count;
}

double subgroup_score(const Dataset& ds, const std::vector<double>& expectations,
                      const Subgroup& subgroup, ScanDirection direction, double penalty) {
  Workspace ws(ds, expectations);
  Included inc = from_subgroup(ds, ws, subgroup);
  std::vector<std::uint8_t> y = ds.y;
  return evaluate(ws, y, inc, direction, penalty).score;
}

ScanResult scan(const Dataset& ds, const std::vector<double>& expectations, ScanOptions opts) {
  Workspace ws(ds, expectations);
  if (opts.restarts == 0) throw ConfigError("scan needs at least one restart");
  const std::vector<std::uint8_t>& y = ds.y;
  const std::size_t n = ws.p.size();
  const std::size_t n_attr = ws.cat_cols.size();

  ScanResult best;
  best.direction = opts.direction;
  bool have_best = false;

  std::vector<std::size_t> attr_order(n_attr);
  std::iota(attr_order.begin(), attr_order.end(), 0);
  // mismatches[i]: number of attributes whose restriction excludes row i.
  std::vector<std::uint16_t> mismatches(n);
  std::vector<Agg> per_value;
  std::vector<std::size_t> order;

  for (std::size_t restart = 0; restart < opts.restarts; ++restart) {
    Rng rng(derive_seed(opts.seed, 0x5ca2, restart));
    Included inc(n_attr);
    for (std::size_t a = 0; a < n_attr; ++a) {
      inc[a].assign(ws.n_values[a], 1);
      if (restart > 0) {
        std::size_t on = 0;
        for (auto& v : inc[a]) {
          v = rng.next_double() < 0.5 ? 1 : 0;
          on += v;
        }
        if (on == 0) std::fill(inc[a].begin(), inc[a].end(), 1);
      }
    }

    std::fill(mismatches.begin(), mismatches.end(), 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < n_attr; ++a)
        if (!inc[a][std::size_t((*ws.codes[a])[i])]) ++mismatches[i];

    for (std::size_t pass = 0; pass < opts.max_passes; ++pass) {
      bool changed = false;
      rng.shuffle(attr_order);
      for (std::size_t a : attr_order) {
        // Aggregate rows that satisfy every other attribute, keyed by this
        // attribute's value.
        per_value.assign(ws.n_values[a], Agg{});
        for (auto& agg : per_value) agg.reset(ws.levels.size(), ws.histogram);
        for (std::size_t i = 0; i < n; ++i) {
          std::size_t code = std::size_t((*ws.codes[a])[i]);
          std::uint16_t others = mismatches[i];
          if (!inc[a][code]) --others;
          if (others == 0) ws.add_record(per_value[code], i, y);
        }

        // Other attributes' penalty stays constant while this one varies.
        double other_penalty = 0.0;
        for (std::size_t b = 0; b < n_attr; ++b) {
          if (b == a) continue;
          std::size_t on = 0;
          for (auto v : inc[b]) on += v;
          if (on < inc[b].size()) other_penalty += opts.penalty * double(on);
        }

        order.resize(ws.n_values[a]);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t u, std::size_t v) {
          bool eu = per_value[u].n == 0, ev = per_value[v].n == 0;
          if (eu != ev) return ev;  // empty values last
          double ru = per_value[u].y_sum / (per_value[u].e_sum + 1e-12);
          double rv = per_value[v].y_sum / (per_value[v].e_sum + 1e-12);
          return opts.direction == ScanDirection::over ? ru > rv : ru < rv;
        });

        Agg prefix;
        prefix.reset(ws.levels.size(), ws.histogram);
        double best_score = -1e300;
        std::size_t best_len = 0;
        for (std::size_t len = 1; len <= order.size(); ++len) {
          prefix.combine(per_value[order[len - 1]]);
          double pen = other_penalty +
                       (len == order.size() ? 0.0 : opts.penalty * double(len));
          double sc = agg_optimal_q(prefix, ws.levels, opts.direction).second - pen;
          if (sc > best_score + 1e-12) {
            best_score = sc;
            best_len = len;
          }
        }

        std::vector<std::uint8_t> chosen(ws.n_values[a], 0);
        for (std::size_t l = 0; l < best_len; ++l) chosen[order[l]] = 1;
        if (best_len == order.size()) std::fill(chosen.begin(), chosen.end(), 1);
        if (chosen != inc[a]) {
          for (std::size_t i = 0; i < n; ++i) {
            std::size_t code = std::size_t((*ws.codes[a])[i]);
            int delta = int(!chosen[code]) - int(!inc[a][code]);
            mismatches[i] = std::uint16_t(int(mismatches[i]) + delta);
          }
          inc[a] = std::move(chosen);
          changed = true;
        }
      }
      if (!changed) break;
    }

    Evaluation ev = evaluate(ws, y, inc, opts.direction, opts.penalty);
    if (!have_best || ev.score > best.score + 1e-12) {
      have_best = true;
      best.score = ev.score;
      best.q = ev.q;
      best.n = ev.n;
      best.subgroup = to_subgroup(ds, ws, inc);
    }
  }
  return best;
}

ScanResult exhaustive_scan(const Dataset& ds, const std::vector<double>& expectations,
                           ScanOptions opts) {
  Workspace ws(ds, expectations);
  const std::size_t n_attr = ws.cat_cols.size();
  double combos = 1.0;
  for (std::size_t a = 0; a < n_attr; ++a)
    combos *= double((std::size_t(1) << ws.n_values[a]) - 1);
  if (!(combos <= 2e6))
    throw ConfigError("exhaustive scan would enumerate too many combinations");

  ScanResult best;
  best.direction = opts.direction;
  bool have_best = false;

  std::vector<std::size_t> masks(n_attr, 1);
  Included inc(n_attr);
  const std::vector<std::uint8_t>& y = ds.y;
  while (true) {
    for (std::size_t a = 0; a < n_attr; ++a) {
      inc[a].assign(ws.n_values[a], 0);
      for (std::size_t v = 0; v < ws.n_values[a]; ++v)
        if (masks[a] & (std::size_t(1) << v)) inc[a][v] = 1;
    }
    Evaluation ev = evaluate(ws, y, inc, opts.direction, opts.penalty);
    if (!have_best || ev.score > best.score + 1e-12) {
      have_best = true;
      best.score = ev.score;
      best.q = ev.q;
      best.n = ev.n;
      best.subgroup = to_subgroup(ds, ws, inc);
    }
    std::size_t a = 0;
    while (a < n_attr) {
      ++masks[a];
      if (masks[a] < (std::size_t(1) << ws.n_values[a])) break;
      masks[a] = 1;
      ++a;
    }
    if (a == n_attr) break;
  }
  return best;
}

}  // namespace fairaudit

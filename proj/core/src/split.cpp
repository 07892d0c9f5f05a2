#include "fairaudit/split.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace fairaudit {

namespace {

// Shuffled per-class index lists; errors when a class has < 2 members.
std::array<std::vector<std::size_t>, 2> strata_of(const std::vector<std::uint8_t>& y,
                                                  std::uint64_t seed, bool enforce_min) {
  std::array<std::vector<std::size_t>, 2> strata;
  for (std::size_t i = 0; i < y.size(); ++i) strata[y[i] ? 1 : 0].push_back(i);
  for (int c = 0; c < 2; ++c) {
    if (enforce_min && strata[std::size_t(c)].size() < 2)
      throw DataError("label stratum " + std::to_string(c) + " has " +
                      std::to_string(strata[std::size_t(c)].size()) +
                      " records; need at least 2 per class");
    Rng rng(derive_seed(seed, 0x5712a7, std::uint64_t(c)));
    rng.shuffle(strata[std::size_t(c)]);
  }
  return strata;
}

}  // namespace

SplitPlan stratified_split(const std::vector<std::uint8_t>& y, double test_fraction,
                           std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ConfigError("test fraction must lie strictly between 0 and 1");
  auto strata = strata_of(y, seed, true);

  // Largest-remainder allocation of the global test count across strata.
  std::size_t total = y.size();
  std::size_t want = std::size_t(std::llround(test_fraction * double(total)));
  std::array<std::size_t, 2> alloc{};
  std::array<double, 2> frac{};
  std::size_t given = 0;
  for (int c = 0; c < 2; ++c) {
    double ideal = test_fraction * double(strata[std::size_t(c)].size());
    alloc[std::size_t(c)] = std::size_t(ideal);
    frac[std::size_t(c)] = ideal - double(alloc[std::size_t(c)]);
    given += alloc[std::size_t(c)];
  }
  while (given < want) {
    int pick = frac[0] >= frac[1] ? 0 : 1;
    ++alloc[std::size_t(pick)];
    frac[std::size_t(pick)] = -1.0;
    ++given;
  }
  SplitPlan plan;
  for (int c = 0; c < 2; ++c) {
    const auto& s = strata[std::size_t(c)];
    std::size_t take = std::clamp<std::size_t>(alloc[std::size_t(c)], 1, s.size() - 1);
    for (std::size_t i = 0; i < s.size(); ++i)
      (i < take ? plan.test : plan.train).push_back(s[i]);
  }
  std::sort(plan.train.begin(), plan.train.end());
  std::sort(plan.test.begin(), plan.test.end());
  return plan;
}

std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<std::uint8_t>& y,
                                                       std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("k-fold needs k >= 2");
  if (y.size() < k) throw DataError("k-fold needs at least k records");
  auto strata = strata_of(y, seed, true);

  std::vector<std::vector<std::size_t>> folds(k);
  // Equal base share per fold from each stratum, then leftovers one at a
  // time to the smallest fold so global sizes differ by at most 1.
  for (int c = 0; c < 2; ++c) {
    const auto& s = strata[std::size_t(c)];
    std::size_t base = s.size() / k, pos = 0;
    for (std::size_t f = 0; f < k; ++f)
      for (std::size_t j = 0; j < base; ++j) folds[f].push_back(s[pos++]);
    while (pos < s.size()) {
      std::size_t smallest = 0;
      for (std::size_t f = 1; f < k; ++f)
        if (folds[f].size() < folds[smallest].size()) smallest = f;
      folds[smallest].push_back(s[pos++]);
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::vector<std::vector<std::size_t>> stratified_kfold_multi(const std::vector<int>& labels,
                                                             std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("k-fold needs k >= 2");
  if (labels.size() < k) throw DataError("k-fold needs at least k records");
  std::map<int, std::vector<std::size_t>> strata;
  for (std::size_t i = 0; i < labels.size(); ++i) strata[labels[i]].push_back(i);

  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t stratum_ix = 0;
  for (auto& [value, members] : strata) {
    Rng rng(derive_seed(seed, 0x5712a7, std::uint64_t(stratum_ix++)));
    rng.shuffle(members);
    std::size_t base = members.size() / k, pos = 0;
    for (std::size_t f = 0; f < k; ++f)
      for (std::size_t j = 0; j < base; ++j) folds[f].push_back(members[pos++]);
    while (pos < members.size()) {
      std::size_t smallest = 0;
      for (std::size_t f = 1; f < k; ++f)
        if (folds[f].size() < folds[smallest].size()) smallest = f;
      folds[smallest].push_back(members[pos++]);
    }
  }
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

std::vector<std::size_t> stratified_sample(const std::vector<std::uint8_t>& y,
                                           std::size_t max_rows, std::uint64_t seed) {
  std::size_t n = y.size();
  if (max_rows >= n) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return all;
  }
  if (max_rows < 2) throw ConfigError("subsample size must be at least 2");
  auto strata = strata_of(y, derive_seed(seed, 0x5a3b), false);

  double fraction = double(max_rows) / double(n);
  std::array<std::size_t, 2> alloc{};
  std::array<double, 2> frac{};
  std::size_t given = 0;
  for (int c = 0; c < 2; ++c) {
    double ideal = fraction * double(strata[std::size_t(c)].size());
    alloc[std::size_t(c)] = std::size_t(ideal);
    frac[std::size_t(c)] = ideal - double(alloc[std::size_t(c)]);
    given += alloc[std::size_t(c)];
  }
  while (given < max_rows) {
    int pick = frac[0] >= frac[1] ? 0 : 1;
    ++alloc[std::size_t(pick)];
    frac[std::size_t(pick)] = -1.0;
    ++given;
  }
  std::vector<std::size_t> out;
  out.reserve(max_rows);
  for (int c = 0; c < 2; ++c) {
    const auto& s = strata[std::size_t(c)];
    std::size_t take = std::min(alloc[std::size_t(c)], s.size());
    out.insert(out.end(), s.begin(), s.begin() + std::ptrdiff_t(take));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fairaudit

#pragma once

#include <cstdint>
#include <vector>

#include "fairaudit/common.hpp"

namespace fairaudit {

struct SplitPlan {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Seeded train/test split stratified on the label. Per-stratum test counts
/// come from largest-remainder rounding of test_fraction, then are clamped so
/// both sides of every stratum stay nonempty. Errors when a stratum has
/// fewer than 2 records, since that can't be split.
SplitPlan stratified_split(const std::vector<std::uint8_t>& y, double test_fraction,
                           std::uint64_t seed);

/// Seeded k-fold partition stratified on the label. Returns the k disjoint
/// test index lists; their union is 0..n-1 and global fold sizes differ by
/// at most 1 (per-stratum leftovers go to the currently smallest fold).
std::vector<std::vector<std::size_t>> stratified_kfold(const std::vector<std::uint8_t>& y,
                                                       std::size_t k, std::uint64_t seed);

/// Seeded subsample of max_rows records preserving the label balance via
/// largest-remainder allocation. Returns sorted indices; identity when
/// max_rows >= n.
std::vector<std::size_t> stratified_sample(const std::vector<std::uint8_t>& y,
                                           std::size_t max_rows, std::uint64_t seed);

/// k-fold partition stratified on arbitrary integer labels. Classes with
/// fewer than k members are spread as far as they go; global fold sizes
/// still differ by at most 1.
std::vector<std::vector<std::size_t>> stratified_kfold_multi(const std::vector<int>& labels,
                                                             std::size_t k, std::uint64_t seed);

}  // namespace fairaudit

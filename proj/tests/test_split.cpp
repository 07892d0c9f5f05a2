#include <doctest.h>

#include <algorithm>
#include <set>

#include "fairaudit/split.hpp"

using namespace fairaudit;

namespace {

std::vector<std::uint8_t> labels_mixed(std::size_t n, std::size_t positives) {
  std::vector<std::uint8_t> y(n, 0);
  for (std::size_t i = 0; i < positives; ++i) y[i] = 1;
  return y;
}

}  // namespace

TEST_CASE("stratified_split keeps class shares and partitions exactly") {
  auto y = labels_mixed(100, 30);
  SplitPlan plan = stratified_split(y, 0.2, 7);
  CHECK(plan.train.size() + plan.test.size() == 100);

  std::set<std::size_t> seen;
  for (auto i : plan.train) seen.insert(i);
  for (auto i : plan.test) seen.insert(i);
  CHECK(seen.size() == 100);  // disjoint and complete

  std::size_t test_pos = 0;
  for (auto i : plan.test) test_pos += y[i];
  CHECK(plan.test.size() == 20);
  CHECK(test_pos == 6);  // 30% of 20

  SUBCASE("deterministic per seed") {
    SplitPlan again = stratified_split(y, 0.2, 7);
    CHECK(again.train == plan.train);
    SplitPlan other = stratified_split(y, 0.2, 8);
    CHECK(other.train != plan.train);
  }
  SUBCASE("fraction bounds") {
    CHECK_THROWS_AS(stratified_split(y, 0.0, 1), ConfigError);
    CHECK_THROWS_AS(stratified_split(y, 1.0, 1), ConfigError);
  }
  SUBCASE("a stratum with one record cannot be split") {
    auto tiny = labels_mixed(10, 1);
    CHECK_THROWS_AS(stratified_split(tiny, 0.2, 1), DataError);
  }
}

TEST_CASE("stratified_kfold covers every row once with balanced folds") {
  auto y = labels_mixed(103, 41);
  auto folds = stratified_kfold(y, 5, 3);
  REQUIRE(folds.size() == 5);

  std::set<std::size_t> seen;
  std::size_t smallest = 103, largest = 0;
  for (const auto& fold : folds) {
    CHECK(std::is_sorted(fold.begin(), fold.end()));
    smallest = std::min(smallest, fold.size());
    largest = std::max(largest, fold.size());
    for (auto i : fold) {
      CHECK(seen.insert(i).second);  // no row in two folds
    }
  }
  CHECK(seen.size() == 103);
  CHECK(largest - smallest <= 1);

  // class shares held within one record per fold
  for (const auto& fold : folds) {
    std::size_t pos = 0;
    for (auto i : fold) pos += y[i];
    double share = double(pos) / double(fold.size());
    CHECK(share == doctest::Approx(41.0 / 103.0).epsilon(0.15));
  }
}

TEST_CASE("stratified_sample is an identity when the cap is loose") {
  auto y = labels_mixed(50, 20);
  auto idx = stratified_sample(y, 100, 9);
  CHECK(idx.size() == 50);

  auto small = stratified_sample(y, 10, 9);
  CHECK(small.size() == 10);
  CHECK(std::is_sorted(small.begin(), small.end()));
  std::size_t pos = 0;
  for (auto i : small) pos += y[i];
  CHECK(pos == 4);  // 40% of 10

  auto again = stratified_sample(y, 10, 9);
  CHECK(again == small);
}

TEST_CASE("stratified_kfold_multi balances arbitrary integer classes") {
  std::vector<int> labels;
  for (int i = 0; i < 60; ++i) labels.push_back(-1);
  for (int i = 0; i < 25; ++i) labels.push_back(0);
  for (int i = 0; i < 15; ++i) labels.push_back(1);
  auto folds = stratified_kfold_multi(labels, 5, 4);
  REQUIRE(folds.size() == 5);

  std::set<std::size_t> seen;
  for (const auto& fold : folds)
    for (auto i : fold) CHECK(seen.insert(i).second);
  CHECK(seen.size() == 100);

  // the rare class lands in every fold
  for (const auto& fold : folds) {
    int rare = 0;
    for (auto i : fold) rare += labels[i] == 1;
    CHECK(rare == 3);
  }
}

#include <doctest.h>

#include <numeric>
#include <vector>

#include "fairaudit/common.hpp"
#include "fairaudit/dataset.hpp"
#include "fairaudit/encode.hpp"
#include "fairaudit/forest.hpp"
#include "fairaudit/mitigation.hpp"

using namespace fairaudit;

namespace {

// One fold's worth of shared state, built once for every method test.
struct Fixture {
  Dataset train, test;
  Matrix x_train, x_test;
  RandomForest biased;
  std::vector<double> fit_scores, test_scores;
  std::vector<std::uint8_t> train_mask, test_mask;
  MethodConfig config;

  Fixture() {
    Dataset full = synth_biased(600, 0.3, 11);
    std::vector<std::size_t> tr(450), te(150);
    std::iota(tr.begin(), tr.end(), 0);
    std::iota(te.begin(), te.end(), 450);
    train = full.subset(tr);
    test = full.subset(te);
    Encoder enc = Encoder::fit(train);
    x_train = enc.transform(train);
    x_test = enc.transform(test);

    config.forest_trees = 25;
    config.lfr_iters = 150;
    config.lfr_prototypes = 3;
    config.pr_iters = 150;

    ForestOptions fopts;
    fopts.n_trees = config.forest_trees;
    fopts.seed = 21;
    biased = RandomForest::fit(x_train, train.y, fopts);
    fit_scores = biased.oob_scores();
    test_scores = biased.score(x_test);
    train_mask = group_mask(train);
    test_mask = group_mask(test);
  }

  FoldContext ctx() const {
    return {train, test,       x_train,    x_test,    biased, fit_scores,
            test_scores, train_mask, test_mask, 77,     config};
  }
};

const Fixture& fixture() {
  static Fixture f;
  return f;
}

}  // namespace

TEST_CASE("the method registry is stable and complete") {
  const auto& names = mitigation_method_names();
  REQUIRE(names == std::vector<std::string>{"dir", "lfr", "pr", "roc", "eo", "ceo"});
  for (std::size_t i = 0; i < names.size(); ++i) {
    CHECK(is_mitigation_method(names[i]));
    CHECK(mitigation_method_index(names[i]) == i);
  }
  CHECK_FALSE(is_mitigation_method("rw"));
  CHECK_FALSE(is_mitigation_method(""));
  CHECK_THROWS_AS(mitigation_method_index("rw"), ConfigError);
  CHECK_THROWS_AS(run_method("rw", fixture().ctx()), ConfigError);
}

TEST_CASE("every method labels each test row and keeps scores in range") {
  const Fixture& f = fixture();
  for (const auto& name : mitigation_method_names()) {
    CAPTURE(name);
    MethodOutcome out = run_method(name, f.ctx());
    REQUIRE(out.labels.size() == f.test.n());
    for (auto l : out.labels) CHECK((l == 0 || l == 1));
    if (!out.scores.empty()) {
      REQUIRE(out.scores.size() == f.test.n());
      for (double s : out.scores) {
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
      }
    }
  }
}

TEST_CASE("score availability follows the method family") {
  const Fixture& f = fixture();
  CHECK_FALSE(run_method("dir", f.ctx()).scores.empty());
  CHECK_FALSE(run_method("pr", f.ctx()).scores.empty());
  CHECK_FALSE(run_method("ceo", f.ctx()).scores.empty());
  // label-only corrections carry no scores
  CHECK(run_method("roc", f.ctx()).scores.empty());
  CHECK(run_method("eo", f.ctx()).scores.empty());
}

TEST_CASE("methods are deterministic given the fold seed") {
  const Fixture& f = fixture();
  for (const auto& name : mitigation_method_names()) {
    CAPTURE(name);
    MethodOutcome a = run_method(name, f.ctx());
    MethodOutcome b = run_method(name, f.ctx());
    CHECK(a.labels == b.labels);
    CHECK(a.scores == b.scores);
    CHECK(a.flags == b.flags);
  }
}

TEST_CASE("the band rule actually overrides some base decisions") {
  const Fixture& f = fixture();
  std::vector<std::uint8_t> base = RandomForest::labels_from_scores(f.test_scores);
  MethodOutcome roc = run_method("roc", f.ctx());
  std::size_t changed = 0;
  for (std::size_t i = 0; i < base.size(); ++i) changed += roc.labels[i] != base[i];
  CHECK(changed > 0);
}

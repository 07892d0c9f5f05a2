#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "fairaudit/audit.hpp"
#include "fairaudit/common.hpp"

using namespace fairaudit;
using nlohmann::json;

namespace {

AuditConfig small_config() {
  AuditConfig cfg;
  cfg.dataset = "synth_biased";
  cfg.synth_rows = 400;
  cfg.synth_bias_gap = 0.3;
  cfg.seed = 42;
  cfg.folds = 2;
  cfg.methods = {"roc", "eo"};
  cfg.method.forest_trees = 15;
  cfg.scan_restarts = 5;
  cfg.scan_penalty = 2.0;
  return cfg;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("config parsing applies defaults and rejects bad input") {
  SUBCASE("minimal config gets every default") {
    AuditConfig cfg = parse_audit_config(json{{"dataset", "synth_biased"}});
    CHECK(cfg.dataset == "synth_biased");
    CHECK(cfg.methods == mitigation_method_names());
    CHECK(cfg.seed == 42);
    CHECK(cfg.folds == 5);
    CHECK(cfg.max_rows == 0);
    CHECK(cfg.synth_rows == 10000);
    CHECK(cfg.out_dir == "audit-out");
    CHECK(cfg.scan_enabled);
    CHECK(cfg.scan_penalty == doctest::Approx(1.0));
    CHECK(cfg.scan_restarts == 20);
    CHECK(cfg.meta_depth == 6);
    CHECK(cfg.meta_min_leaf == 20);
    CHECK(cfg.meta_cv == 5);
  }
  SUBCASE("sections override the defaults") {
    json j{{"dataset", "adult"},
           {"path", "/data/adult.csv"},
           {"label", "income"},
           {"favorable", ">50K"},
           {"protected", "sex"},
           {"privileged", json::array({"Male"})},
           {"methods", json::array({"roc"})},
           {"seed", 7},
           {"folds", 3},
           {"max_rows", 1000},
           {"out", "elsewhere"},
           {"forest", {{"trees", 9}, {"max_depth", 4}, {"min_samples_leaf", 2}}},
           {"repair", {{"lambda", 0.5}}},
           {"lfr", {{"prototypes", 4}, {"ax", 0.1}, {"ay", 2.0}, {"az", 10.0}, {"max_iters", 77}}},
           {"pr", {{"eta", 5.0}, {"l2", 0.1}, {"max_iters", 88}}},
           {"roc", {{"spd_tolerance", 0.02}}},
           {"scan", {{"enabled", false}, {"penalty", 0.25}, {"restarts", 3}}},
           {"meta", {{"max_depth", 3}, {"min_samples_leaf", 5}, {"cv_folds", 2}}}};
    AuditConfig cfg = parse_audit_config(j);
    CHECK(cfg.path == "/data/adult.csv");
    CHECK(cfg.overrides.label_column == "income");
    CHECK(cfg.overrides.favorable_value == ">50K");
    CHECK(cfg.overrides.protected_attribute == "sex");
    CHECK(cfg.overrides.privileged_values == std::vector<std::string>{"Male"});
    CHECK(cfg.methods == std::vector<std::string>{"roc"});
    CHECK(cfg.seed == 7);
    CHECK(cfg.folds == 3);
    CHECK(cfg.max_rows == 1000);
    CHECK(cfg.out_dir == "elsewhere");
    CHECK(cfg.method.forest_trees == 9);
    CHECK(cfg.method.forest_depth == 4);
    CHECK(cfg.method.forest_min_leaf == 2);
    CHECK(cfg.method.repair_lambda == doctest::Approx(0.5));
    CHECK(cfg.method.lfr_prototypes == 4);
    CHECK(cfg.method.lfr_ax == doctest::Approx(0.1));
    CHECK(cfg.method.lfr_iters == 77);
    CHECK(cfg.method.pr_eta == doctest::Approx(5.0));
    CHECK(cfg.method.pr_iters == 88);
    CHECK(cfg.method.roc_spd_tolerance == doctest::Approx(0.02));
    CHECK_FALSE(cfg.scan_enabled);
    CHECK(cfg.scan_penalty == doctest::Approx(0.25));
    CHECK(cfg.scan_restarts == 3);
    CHECK(cfg.meta_depth == 3);
    CHECK(cfg.meta_min_leaf == 5);
    CHECK(cfg.meta_cv == 2);
  }
  SUBCASE("a dataset name is mandatory") {
    CHECK_THROWS_AS(parse_audit_config(json::object()), ConfigError);
  }
  SUBCASE("unknown keys fail loudly") {
    CHECK_THROWS_AS(parse_audit_config(json{{"dataset", "adult"}, {"datset", "x"}}),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_audit_config(json{{"dataset", "adult"}, {"scan", {{"restart", 3}}}}),
        ConfigError);
  }
  SUBCASE("methods must be known and nonempty") {
    CHECK_THROWS_AS(parse_audit_config(json{{"dataset", "adult"}, {"methods", json::array()}}),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_audit_config(json{{"dataset", "adult"}, {"methods", json::array({"rw"})}}),
        ConfigError);
  }
  SUBCASE("type and range errors are config errors") {
    CHECK_THROWS_AS(parse_audit_config(json{{"dataset", "adult"}, {"folds", "five"}}),
                    ConfigError);
    CHECK_THROWS_AS(parse_audit_config(json{{"dataset", "adult"}, {"folds", 0}}), ConfigError);
    CHECK_THROWS_AS(parse_audit_config(json{{"dataset", "adult"}, {"privileged", 3}}),
                    ConfigError);
    CHECK_THROWS_AS(parse_audit_config(json::array({1, 2})), ConfigError);
  }
}

TEST_CASE("config files load with clear failure modes") {
  std::string good = "/tmp/fairaudit_test_cfg_good.json";
  {
    std::ofstream out(good);
    out << R"({"dataset": "synth_biased", "folds": 2, "synth": {"rows": 123}})";
  }
  AuditConfig cfg = load_audit_config(good);
  CHECK(cfg.dataset == "synth_biased");
  CHECK(cfg.folds == 2);
  CHECK(cfg.synth_rows == 123);

  std::string bad = "/tmp/fairaudit_test_cfg_bad.json";
  {
    std::ofstream out(bad);
    out << "{nope";
  }
  CHECK_THROWS_AS(load_audit_config(bad), ConfigError);
  CHECK_THROWS_AS(load_audit_config("/tmp/fairaudit_no_such_file.json"), ConfigError);
}

TEST_CASE("dataset routing distinguishes synthetic and registered names") {
  AuditConfig cfg;
  cfg.dataset = "synth_biased";
  cfg.synth_rows = 200;
  Dataset ds = load_configured_dataset(cfg);
  CHECK(ds.n() == 200);

  cfg.dataset = "synth_utrecht";
  CHECK(load_configured_dataset(cfg).n() == 200);

  cfg.dataset = "adult";  // registered names need a CSV path
  cfg.path.clear();
  CHECK_THROWS_AS(load_configured_dataset(cfg), ConfigError);

  cfg.dataset = "no_such_dataset";
  CHECK_THROWS_AS(load_configured_dataset(cfg), ConfigError);
}

TEST_CASE("the config echo and its hash ignore the output directory") {
  AuditConfig cfg = small_config();
  ordered_json echo = config_json(cfg);
  CHECK_FALSE(echo.contains("out"));
  CHECK(echo.at("dataset") == "synth_biased");

  std::string h = config_hash(cfg);
  CHECK(h.size() == 16);
  CHECK(config_hash(cfg) == h);

  AuditConfig moved = cfg;
  moved.out_dir = "/somewhere/else";
  CHECK(config_hash(moved) == h);

  AuditConfig reseeded = cfg;
  reseeded.seed = 43;
  CHECK(config_hash(reseeded) != h);
}

TEST_CASE("a small audit produces the full bundle shape") {
  AuditConfig cfg = small_config();
  ordered_json bundle = run_audit(cfg);

  const auto& run = bundle.at("run");
  CHECK(run.at("tool") == "fairaudit");
  CHECK(run.at("dataset") == "synth_biased");
  CHECK(run.at("records") == 400);
  CHECK(run.at("folds") == 2);
  CHECK(run.at("seed") == 42);
  CHECK(run.at("config_hash") == config_hash(cfg));
  CHECK(bundle.at("config") == config_json(cfg));

  const auto& biased = bundle.at("biased");
  REQUIRE(biased.at("per_fold").size() == 2);
  for (const char* key : {"accuracy", "disparate_impact", "average_odds", "equal_opportunity",
                          "statistical_parity"}) {
    CHECK(biased.at("per_fold").at(0).contains(key));
    const auto& agg = biased.at("aggregate").at(key);
    if (!agg.is_null()) {
      CHECK(agg.contains("mean"));
      CHECK(agg.contains("stddev"));
      CHECK(agg.contains("folds"));
    }
  }
  CHECK(biased.at("aggregate").at("accuracy").at("folds") == 2);

  const auto& methods = bundle.at("methods");
  REQUIRE(methods.size() == 2);
  CHECK(methods.contains("roc"));
  CHECK(methods.contains("eo"));
  CHECK_FALSE(methods.contains("dir"));
  // registry order, not config order
  CHECK(methods.items().begin().key() == "roc");

  for (const auto& [name, mj] : methods.items()) {
    CAPTURE(name);
    CHECK(mj.at("status") == "ok");
    CHECK(mj.at("per_fold").size() == 2);
    CHECK(mj.at("cohorts").at("per_fold").size() == 2);
    CHECK(mj.at("cohorts").at("aggregate").contains("disagree_neg_ratio"));
    CHECK(mj.at("rules").is_array());
    CHECK(mj.at("flags").is_array());
    for (const auto& fold : mj.at("cohorts").at("per_fold")) {
      double total = fold.at("agree_ratio").get<double>() +
                     fold.at("disagree_pos_ratio").get<double>() +
                     fold.at("disagree_neg_ratio").get<double>();
      CHECK(total == doctest::Approx(1.0));
    }
  }

  REQUIRE(bundle.contains("scan"));
  REQUIRE(bundle.at("scan").at("per_fold").size() == 2);
  for (const auto& fold : bundle.at("scan").at("per_fold")) {
    for (const char* dir : {"over", "under"}) {
      const auto& r = fold.at(dir);
      CHECK(r.contains("subgroup"));
      CHECK(r.contains("score"));
      CHECK(r.contains("q"));
      CHECK(r.at("direction") == dir);
      CHECK(r.contains("n"));
    }
  }
}

TEST_CASE("identical settings give byte-identical bundles") {
  AuditConfig cfg = small_config();
  std::string first = run_audit(cfg).dump(2);
  std::string second = run_audit(cfg).dump(2);
  CHECK(first == second);

  AuditConfig moved = cfg;
  moved.out_dir = "/tmp/fairaudit_some_other_dir";
  CHECK(run_audit(moved).dump(2) == first);
}

TEST_CASE("an audit with no viable method refuses to report") {
  AuditConfig cfg;
  cfg.dataset = "synth_biased";
  cfg.synth_rows = 300;
  cfg.folds = 1;
  cfg.methods = {"lfr"};
  cfg.method.forest_trees = 10;
  cfg.method.lfr_prototypes = 1;  // representation fit rejects this
  cfg.scan_enabled = false;
  CHECK_THROWS_AS(run_audit(cfg), AllMethodsFailed);
}

TEST_CASE("a failing method is isolated and reported in place") {
  AuditConfig cfg;
  cfg.dataset = "synth_biased";
  cfg.synth_rows = 300;
  cfg.folds = 1;
  cfg.methods = {"lfr", "roc"};
  cfg.method.forest_trees = 10;
  cfg.method.lfr_prototypes = 1;
  cfg.scan_enabled = false;
  ordered_json bundle = run_audit(cfg);
  CHECK(bundle.at("methods").at("lfr").at("status") == "failed");
  CHECK_FALSE(bundle.at("methods").at("lfr").at("error").get<std::string>().empty());
  CHECK(bundle.at("methods").at("roc").at("status") == "ok");
  CHECK_FALSE(bundle.contains("scan"));

  std::string md = render_markdown(bundle);
  CHECK(md.find("| LFR | failed |") != std::string::npos);
  std::string rules = render_rules(bundle);
  CHECK(rules.find("== LFR ==\n(method failed:") != std::string::npos);
}

TEST_CASE("the markdown report uses the agreed table layout") {
  AuditConfig cfg = small_config();
  ordered_json bundle = run_audit(cfg);
  std::string md = render_markdown(bundle);
  CHECK(md.find("| Model | Accuracy | Disparate Impact (1.0) | Average Odds (0.0) | "
                "Equal Opportunity (0.0) | Statistical Parity (0.0) |") != std::string::npos);
  CHECK(md.find("| Fairness Model | Agree Ratio | Disagree(+) Ratio | Disagree(-) Ratio | "
                "Meta Clf Accuracy | Agree Precision | Disagree(+) Precision | "
                "Disagree(-) Precision |") != std::string::npos);
  CHECK(md.find("| Biased | ") != std::string::npos);
  CHECK(md.find("| ROC | ") != std::string::npos);
  CHECK(md.find("## Deviating subgroups") != std::string::npos);
  CHECK(md.find("## Missed-favorable rules (first fold)") != std::string::npos);
}

TEST_CASE("null metric summaries render as placeholders") {
  // hand-built bundle exercising the undefined-metric cells directly
  ordered_json bundle;
  bundle["run"] = {{"tool", "fairaudit"}, {"version", "0.1.0"}, {"dataset", "tiny"},
                   {"records", 4},        {"folds", 1},         {"seed", 1},
                   {"config_hash", "0000000000000000"}};
  ordered_json agg;
  agg["accuracy"] = {{"mean", 0.5}, {"stddev", 0.0}, {"folds", 1}};
  agg["disparate_impact"] = nullptr;
  agg["average_odds"] = nullptr;
  agg["equal_opportunity"] = nullptr;
  agg["statistical_parity"] = nullptr;
  bundle["biased"] = {{"per_fold", ordered_json::array()}, {"aggregate", agg}};
  ordered_json cohorts_agg;
  cohorts_agg["agree_ratio"] = {{"mean", 1.0}, {"stddev", 0.0}, {"folds", 1}};
  cohorts_agg["disagree_pos_ratio"] = {{"mean", 0.0}, {"stddev", 0.0}, {"folds", 1}};
  cohorts_agg["disagree_neg_ratio"] = {{"mean", 0.0}, {"stddev", 0.0}, {"folds", 1}};
  cohorts_agg["meta_accuracy"] = {{"mean", 1.0}, {"stddev", 0.0}, {"folds", 1}};
  cohorts_agg["agree_precision"] = {{"mean", 1.0}, {"stddev", 0.0}, {"folds", 1}};
  cohorts_agg["disagree_pos_precision"] = nullptr;
  cohorts_agg["disagree_neg_precision"] = nullptr;
  ordered_json mj;
  mj["status"] = "ok";
  mj["per_fold"] = ordered_json::array();
  mj["aggregate"] = agg;
  mj["cohorts"] = {{"per_fold", ordered_json::array()}, {"aggregate", cohorts_agg}};
  mj["rules"] = ordered_json::array();
  mj["flags"] = ordered_json::array();
  bundle["methods"] = {{"eo", mj}};

  std::string md = render_markdown(bundle);
  CHECK(md.find("| EO | 50.0%/±0.0 | n/a | n/a | n/a | n/a |") != std::string::npos);
  // null precisions print as 0.0, not n/a
  CHECK(md.find("| 0.0 | 0.0 |") != std::string::npos);
  CHECK(md.find("(no such cohort found)") != std::string::npos);
}

TEST_CASE("bundles are written as three stable files") {
  AuditConfig cfg = small_config();
  cfg.scan_restarts = 3;
  ordered_json bundle = run_audit(cfg);
  std::string dir = "/tmp/fairaudit_test_bundle_out";
  std::filesystem::remove_all(dir);
  write_bundle(bundle, dir);
  REQUIRE(std::filesystem::exists(dir + "/bundle.json"));
  REQUIRE(std::filesystem::exists(dir + "/report.md"));
  REQUIRE(std::filesystem::exists(dir + "/rules.txt"));
  CHECK(slurp(dir + "/bundle.json") == bundle.dump(2) + "\n");
  CHECK(slurp(dir + "/report.md") == render_markdown(bundle));
  CHECK(slurp(dir + "/rules.txt") == render_rules(bundle));
}

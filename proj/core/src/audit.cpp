#include "fairaudit/audit.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "fairaudit/encode.hpp"
#include "fairaudit/meta.hpp"
#include "fairaudit/metrics.hpp"
#include "fairaudit/scan.hpp"
#include "fairaudit/split.hpp"

namespace fairaudit {

namespace {

using json = nlohmann::json;

void require_keys(const json& j, const std::string& where,
                  const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key))
      throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + key + "' has the wrong type");
  }
}

}  // namespace

AuditConfig parse_audit_config(const json& j) {
  require_keys(j, "config", {"dataset", "path", "label", "favorable", "protected", "privileged",
                             "methods", "seed", "folds", "max_rows", "out", "synth", "forest",
                             "repair", "lfr", "pr", "roc", "scan", "meta"});
  AuditConfig cfg;
  if (!j.contains("dataset")) throw ConfigError("config needs a 'dataset' key");
  cfg.dataset = get_or<std::string>(j, "dataset", "");
  cfg.path = get_or<std::string>(j, "path", "");
  cfg.overrides.label_column = get_or<std::string>(j, "label", "");
  cfg.overrides.favorable_value = get_or<std::string>(j, "favorable", "");
  cfg.overrides.protected_attribute = get_or<std::string>(j, "protected", "");
  cfg.overrides.privileged_values =
      get_or<std::vector<std::string>>(j, "privileged", {});
  if (j.contains("methods")) {
    cfg.methods = get_or<std::vector<std::string>>(j, "methods", cfg.methods);
    if (cfg.methods.empty()) throw ConfigError("'methods' must not be empty");
    for (const auto& m : cfg.methods)
      if (!is_mitigation_method(m)) throw ConfigError("unknown mitigation method '" + m + "'");
  }
  cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
  cfg.folds = get_or<std::size_t>(j, "folds", cfg.folds);
  if (cfg.folds == 0) throw ConfigError("'folds' must be at least 1");
  cfg.max_rows = get_or<std::size_t>(j, "max_rows", cfg.max_rows);
  cfg.out_dir = get_or<std::string>(j, "out", cfg.out_dir);

  if (j.contains("synth")) {
    const json& s = j.at("synth");
    require_keys(s, "'synth'", {"rows", "bias_gap"});
    cfg.synth_rows = get_or<std::size_t>(s, "rows", cfg.synth_rows);
    cfg.synth_bias_gap = get_or<double>(s, "bias_gap", cfg.synth_bias_gap);
  }
  if (j.contains("forest")) {
    const json& s = j.at("forest");
    require_keys(s, "'forest'", {"trees", "max_depth", "min_samples_leaf"});
    cfg.method.forest_trees = get_or<std::size_t>(s, "trees", cfg.method.forest_trees);
    cfg.method.forest_depth = get_or<std::size_t>(s, "max_depth", cfg.method.forest_depth);
    cfg.method.forest_min_leaf =
        get_or<std::size_t>(s, "min_samples_leaf", cfg.method.forest_min_leaf);
  }
  if (j.contains("repair")) {
    const json& s = j.at("repair");
    require_keys(s, "'repair'", {"lambda"});
    cfg.method.repair_lambda = get_or<double>(s, "lambda", cfg.method.repair_lambda);
  }
  if (j.contains("lfr")) {
    const json& s = j.at("lfr");
    require_keys(s, "'lfr'", {"prototypes", "ax", "ay", "az", "max_iters"});
    cfg.method.lfr_prototypes = get_or<std::size_t>(s, "prototypes", cfg.method.lfr_prototypes);
    cfg.method.lfr_ax = get_or<double>(s, "ax", cfg.method.lfr_ax);
    cfg.method.lfr_ay = get_or<double>(s, "ay", cfg.method.lfr_ay);
    cfg.method.lfr_az = get_or<double>(s, "az", cfg.method.lfr_az);
    cfg.method.lfr_iters = get_or<std::size_t>(s, "max_iters", cfg.method.lfr_iters);
  }
  if (j.contains("pr")) {
    const json& s = j.at("pr");
    require_keys(s, "'pr'", {"eta", "l2", "max_iters"});
    cfg.method.pr_eta = get_or<double>(s, "eta", cfg.method.pr_eta);
    cfg.method.pr_l2 = get_or<double>(s, "l2", cfg.method.pr_l2);
    cfg.method.pr_iters = get_or<std::size_t>(s, "max_iters", cfg.method.pr_iters);
  }
  if (j.contains("roc")) {
    const json& s = j.at("roc");
    require_keys(s, "'roc'", {"spd_tolerance"});
    cfg.method.roc_spd_tolerance =
        get_or<double>(s, "spd_tolerance", cfg.method.roc_spd_tolerance);
  }
  if (j.contains("scan")) {
    const json& s = j.at("scan");
    require_keys(s, "'scan'", {"enabled", "penalty", "restarts"});
    cfg.scan_enabled = get_or<bool>(s, "enabled", cfg.scan_enabled);
    cfg.scan_penalty = get_or<double>(s, "penalty", cfg.scan_penalty);
    cfg.scan_restarts = get_or<std::size_t>(s, "restarts", cfg.scan_restarts);
  }
  if (j.contains("meta")) {
    const json& s = j.at("meta");
    require_keys(s, "'meta'", {"max_depth", "min_samples_leaf", "cv_folds"});
    cfg.meta_depth = get_or<std::size_t>(s, "max_depth", cfg.meta_depth);
    cfg.meta_min_leaf = get_or<std::size_t>(s, "min_samples_leaf", cfg.meta_min_leaf);
    cfg.meta_cv = get_or<std::size_t>(s, "cv_folds", cfg.meta_cv);
  }
  return cfg;
}

AuditConfig load_audit_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_audit_config(j);
}

Dataset load_configured_dataset(const AuditConfig& cfg) {
  const std::string& name = cfg.dataset;
  if (name == "synth_biased") return synth_biased(cfg.synth_rows, cfg.synth_bias_gap, cfg.seed);
  if (name == "synth_adult_like") return synth_adult_like(cfg.synth_rows, cfg.seed);
  if (name == "synth_bank_like") return synth_bank_like(cfg.synth_rows, cfg.seed);
  if (name == "synth_utrecht") return synth_utrecht(cfg.synth_rows, cfg.seed);
  RegisteredName reg = registered_name_from(name);
  if (cfg.path.empty())
    throw ConfigError("dataset '" + name + "' needs a 'path' to its CSV file");
  return load_registered(reg, cfg.path, cfg.overrides);
}

ordered_json config_json(const AuditConfig& cfg) {
  ordered_json j;
  j["dataset"] = cfg.dataset;
  j["path"] = cfg.path;
  j["label"] = cfg.overrides.label_column;
  j["favorable"] = cfg.overrides.favorable_value;
  j["protected"] = cfg.overrides.protected_attribute;
  j["privileged"] = cfg.overrides.privileged_values;
  j["methods"] = cfg.methods;
  j["seed"] = cfg.seed;
  j["folds"] = cfg.folds;
  j["max_rows"] = cfg.max_rows;
  j["synth"] = {{"rows", cfg.synth_rows}, {"bias_gap", cfg.synth_bias_gap}};
  j["forest"] = {{"trees", cfg.method.forest_trees},
                 {"max_depth", cfg.method.forest_depth},
                 {"min_samples_leaf", cfg.method.forest_min_leaf}};
  j["repair"] = {{"lambda", cfg.method.repair_lambda}};
  j["lfr"] = {{"prototypes", cfg.method.lfr_prototypes},
              {"ax", cfg.method.lfr_ax},
              {"ay", cfg.method.lfr_ay},
              {"az", cfg.method.lfr_az},
              {"max_iters", cfg.method.lfr_iters}};
  j["pr"] = {{"eta", cfg.method.pr_eta},
             {"l2", cfg.method.pr_l2},
             {"max_iters", cfg.method.pr_iters}};
  j["roc"] = {{"spd_tolerance", cfg.method.roc_spd_tolerance}};
  j["scan"] = {{"enabled", cfg.scan_enabled},
               {"penalty", cfg.scan_penalty},
               {"restarts", cfg.scan_restarts}};
  j["meta"] = {{"max_depth", cfg.meta_depth},
               {"min_samples_leaf", cfg.meta_min_leaf},
               {"cv_folds", cfg.meta_cv}};
  return j;
}

std::string config_hash(const AuditConfig& cfg) {
  std::string text = config_json(cfg).dump();
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (unsigned char c : text) h = hash_mix(h ^ c);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

ordered_json metrics_json(const FairnessReport& r) {
  ordered_json j;
  j["accuracy"] = r.accuracy;
  j["disparate_impact"] = r.disparate_impact ? ordered_json(*r.disparate_impact)
                                             : ordered_json(nullptr);
  j["average_odds"] = r.average_odds ? ordered_json(*r.average_odds) : ordered_json(nullptr);
  j["equal_opportunity"] =
      r.equal_opportunity ? ordered_json(*r.equal_opportunity) : ordered_json(nullptr);
  j["statistical_parity"] =
      r.statistical_parity ? ordered_json(*r.statistical_parity) : ordered_json(nullptr);
  return j;
}

ordered_json summary_json(const MetricSummary& s) {
  if (s.count == 0) return nullptr;
  ordered_json j;
  j["mean"] = s.mean;
  j["stddev"] = s.stddev;
  j["folds"] = s.count;
  return j;
}

ordered_json aggregate_json(const AggregateReport& a) {
  ordered_json j;
  j["accuracy"] = summary_json(a.accuracy);
  j["disparate_impact"] = summary_json(a.disparate_impact);
  j["average_odds"] = summary_json(a.average_odds);
  j["equal_opportunity"] = summary_json(a.equal_opportunity);
  j["statistical_parity"] = summary_json(a.statistical_parity);
  return j;
}

ordered_json cohort_json(const CohortReport& c) {
  ordered_json j;
  j["n"] = c.n;
  j["agree_ratio"] = c.agree_ratio;
  j["disagree_pos_ratio"] = c.disagree_pos_ratio;
  j["disagree_neg_ratio"] = c.disagree_neg_ratio;
  j["meta_accuracy"] = c.meta_accuracy;
  j["agree_precision"] =
      c.agree_precision ? ordered_json(*c.agree_precision) : ordered_json(nullptr);
  j["disagree_pos_precision"] = c.disagree_pos_precision
                                    ? ordered_json(*c.disagree_pos_precision)
                                    : ordered_json(nullptr);
  j["disagree_neg_precision"] = c.disagree_neg_precision
                                    ? ordered_json(*c.disagree_neg_precision)
                                    : ordered_json(nullptr);
  return j;
}

MetricSummary summarize_values(const std::vector<double>& v) {
  MetricSummary s;
  s.count = v.size();
  if (v.empty()) return s;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / double(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / double(v.size() - 1));
  }
  return s;
}

ordered_json cohort_aggregate_json(const std::vector<CohortReport>& folds) {
  std::vector<double> agree, dpos, dneg, acc, p0, ppos, pneg;
  for (const auto& c : folds) {
    agree.push_back(c.agree_ratio);
    dpos.push_back(c.disagree_pos_ratio);
    dneg.push_back(c.disagree_neg_ratio);
    acc.push_back(c.meta_accuracy);
    if (c.agree_precision) p0.push_back(*c.agree_precision);
    if (c.disagree_pos_precision) ppos.push_back(*c.disagree_pos_precision);
    if (c.disagree_neg_precision) pneg.push_back(*c.disagree_neg_precision);
  }
  ordered_json j;
  j["agree_ratio"] = summary_json(summarize_values(agree));
  j["disagree_pos_ratio"] = summary_json(summarize_values(dpos));
  j["disagree_neg_ratio"] = summary_json(summarize_values(dneg));
  j["meta_accuracy"] = summary_json(summarize_values(acc));
  j["agree_precision"] = summary_json(summarize_values(p0));
  j["disagree_pos_precision"] = summary_json(summarize_values(ppos));
  j["disagree_neg_precision"] = summary_json(summarize_values(pneg));
  return j;
}

ordered_json scan_json(const ScanResult& r) {
  ordered_json sub = ordered_json::object();
  for (const auto& [attr, values] : r.subgroup.values) sub[attr] = values;
  ordered_json j;
  j["subgroup"] = sub;
  j["score"] = r.score;
  j["q"] = r.q;
  j["direction"] = r.direction == ScanDirection::over ? "over" : "under";
  j["n"] = r.n;
  return j;
}

ordered_json rule_json(const Rule& rule) {
  ordered_json j;
  j["text"] = rule.text;
  j["class"] = rule.klass;
  j["support"] = rule.support;
  j["confidence"] = rule.confidence;
  return j;
}

struct FoldData {
  Dataset train;
  Dataset test;
  Matrix x_train;
  Matrix x_test;
  std::vector<std::uint8_t> train_mask;
  std::vector<std::uint8_t> test_mask;
  std::vector<std::string> feature_names;
  RandomForest biased;
  std::vector<double> test_scores;
};

}  // namespace

ordered_json run_audit(const AuditConfig& cfg) {
  Dataset full = load_configured_dataset(cfg);
  if (cfg.max_rows > 0 && cfg.max_rows < full.n()) {
    auto idx = stratified_sample(full.y, cfg.max_rows, derive_seed(cfg.seed, 0x5a8));
    full = full.subset(idx);
  }

  std::vector<std::vector<std::size_t>> test_folds;
  if (cfg.folds >= 2) {
    test_folds = stratified_kfold(full.y, cfg.folds, cfg.seed);
  } else {
    SplitPlan plan = stratified_split(full.y, 0.33, cfg.seed);
    test_folds.push_back(plan.test);
  }

  // Methods run in registry order regardless of config order, so bundles
  // do not depend on how the list was typed.
  std::vector<std::string> methods;
  for (const auto& name : mitigation_method_names())
    if (std::find(cfg.methods.begin(), cfg.methods.end(), name) != cfg.methods.end())
      methods.push_back(name);

  std::vector<FairnessReport> biased_folds;
  std::map<std::string, std::vector<FairnessReport>> method_metrics;
  std::map<std::string, std::vector<CohortReport>> method_cohorts;
  std::map<std::string, std::vector<Rule>> method_rules;
  std::map<std::string, std::set<std::string>> method_flags;
  std::map<std::string, std::string> method_errors;
  ordered_json scan_folds = ordered_json::array();

  for (std::size_t f = 0; f < test_folds.size(); ++f) {
    FoldData fd{Dataset{}, Dataset{}, Matrix{}, Matrix{}, {}, {}, {}, RandomForest{}, {}};
    std::vector<std::uint8_t> in_test(full.n(), 0);
    for (std::size_t i : test_folds[f]) in_test[i] = 1;
    std::vector<std::size_t> train_idx;
    train_idx.reserve(full.n() - test_folds[f].size());
    for (std::size_t i = 0; i < full.n(); ++i)
      if (!in_test[i]) train_idx.push_back(i);
    fd.train = full.subset(train_idx);
    fd.test = full.subset(test_folds[f]);
    fd.train_mask = group_mask(fd.train);
    fd.test_mask = group_mask(fd.test);

    Encoder enc = Encoder::fit(fd.train);
    fd.x_train = enc.transform(fd.train);
    fd.x_test = enc.transform(fd.test);
    fd.feature_names = enc.feature_names();

    ForestOptions fopts;
    fopts.n_trees = cfg.method.forest_trees;
    fopts.max_depth = cfg.method.forest_depth;
    fopts.min_samples_leaf = cfg.method.forest_min_leaf;
    fopts.seed = derive_seed(cfg.seed, f, 0);
    fd.biased = RandomForest::fit(fd.x_train, fd.train.y, fopts);
    fd.test_scores = fd.biased.score(fd.x_test);
    std::vector<std::uint8_t> biased_labels = RandomForest::labels_from_scores(fd.test_scores);
    biased_folds.push_back(fairness_report(fd.test.y, biased_labels, fd.test_mask));

    for (const auto& name : methods) {
      if (method_errors.count(name)) continue;  // already failed on an earlier fold
      std::size_t ix = mitigation_method_index(name);
      try {
        FoldContext ctx{fd.train,      fd.test,       fd.x_train,
                        fd.x_test,     fd.biased,     fd.biased.oob_scores(),
                        fd.test_scores, fd.train_mask, fd.test_mask,
                        derive_seed(cfg.seed, f, 1 + ix), cfg.method};
        MethodOutcome out = run_method(name, ctx);
        if (out.labels.size() != fd.test.n())
          throw DataError("method produced the wrong number of labels");
        method_metrics[name].push_back(fairness_report(fd.test.y, out.labels, fd.test_mask));

        std::vector<int> treatment = treatment_labels(fd.test.y, out.labels);
        MetaOptions mopts;
        mopts.max_depth = cfg.meta_depth;
        mopts.min_samples_leaf = cfg.meta_min_leaf;
        mopts.cv_folds = cfg.meta_cv;
        mopts.seed = derive_seed(cfg.seed, f, 0x30 + ix);
        MetaResult meta = explain_treatment(fd.x_test, fd.feature_names, treatment, mopts);
        method_cohorts[name].push_back(meta.report);
        if (f == 0) method_rules[name] = std::move(meta.negative_rules);
        for (const auto& flag : out.flags) method_flags[name].insert(flag);
      } catch (const std::exception& e) {
        method_errors[name] = e.what();
        method_metrics.erase(name);
        method_cohorts.erase(name);
        method_rules.erase(name);
      }
    }

    if (cfg.scan_enabled) {
      ScanOptions sopts;
      sopts.penalty = cfg.scan_penalty;
      sopts.restarts = cfg.scan_restarts;
      sopts.direction = ScanDirection::over;
      sopts.seed = derive_seed(cfg.seed, f, 0x20);
      ScanResult over = scan(fd.test, fd.test_scores, sopts);
      sopts.direction = ScanDirection::under;
      sopts.seed = derive_seed(cfg.seed, f, 0x21);
      ScanResult under = scan(fd.test, fd.test_scores, sopts);
      ordered_json sj;
      sj["over"] = scan_json(over);
      sj["under"] = scan_json(under);
      scan_folds.push_back(std::move(sj));
    }
  }

  std::size_t ok_count = 0;
  for (const auto& name : methods)
    if (!method_errors.count(name)) ++ok_count;
  if (ok_count == 0) {
    std::string detail = "every requested method failed:";
    for (const auto& [name, err] : method_errors) detail += " [" + name + "] " + err;
    throw AllMethodsFailed(detail);
  }

  ordered_json bundle;
  bundle["run"] = {{"tool", "fairaudit"},
                   {"version", "0.1.0"},
                   {"dataset", cfg.dataset},
                   {"records", full.n()},
                   {"folds", test_folds.size()},
                   {"seed", cfg.seed},
                   {"config_hash", config_hash(cfg)}};
  bundle["config"] = config_json(cfg);

  ordered_json biased;
  ordered_json biased_per_fold = ordered_json::array();
  for (const auto& r : biased_folds) biased_per_fold.push_back(metrics_json(r));
  biased["per_fold"] = std::move(biased_per_fold);
  biased["aggregate"] = aggregate_json(aggregate(biased_folds));
  bundle["biased"] = std::move(biased);

  ordered_json methods_json = ordered_json::object();
  for (const auto& name : methods) {
    ordered_json mj;
    if (method_errors.count(name)) {
      mj["status"] = "failed";
      mj["error"] = method_errors[name];
    } else {
      mj["status"] = "ok";
      ordered_json per_fold = ordered_json::array();
      for (const auto& r : method_metrics[name]) per_fold.push_back(metrics_json(r));
      mj["per_fold"] = std::move(per_fold);
      mj["aggregate"] = aggregate_json(aggregate(method_metrics[name]));
      ordered_json cohorts;
      ordered_json cohort_folds = ordered_json::array();
      for (const auto& c : method_cohorts[name]) cohort_folds.push_back(cohort_json(c));
      cohorts["per_fold"] = std::move(cohort_folds);
      cohorts["aggregate"] = cohort_aggregate_json(method_cohorts[name]);
      mj["cohorts"] = std::move(cohorts);
      ordered_json rules = ordered_json::array();
      for (const auto& rule : method_rules[name]) rules.push_back(rule_json(rule));
      mj["rules"] = std::move(rules);
      ordered_json flags = ordered_json::array();
      for (const auto& flag : method_flags[name]) flags.push_back(flag);
      mj["flags"] = std::move(flags);
    }
    methods_json[name] = std::move(mj);
  }
  bundle["methods"] = std::move(methods_json);
  if (cfg.scan_enabled) bundle["scan"] = {{"per_fold", std::move(scan_folds)}};
  return bundle;
}

ordered_json scan_only(const AuditConfig& cfg) {
  Dataset full = load_configured_dataset(cfg);
  if (cfg.max_rows > 0 && cfg.max_rows < full.n()) {
    auto idx = stratified_sample(full.y, cfg.max_rows, derive_seed(cfg.seed, 0x5a8));
    full = full.subset(idx);
  }
  SplitPlan plan = stratified_split(full.y, 0.33, cfg.seed);
  Dataset train = full.subset(plan.train);
  Dataset test = full.subset(plan.test);
  Encoder enc = Encoder::fit(train);
  ForestOptions fopts;
  fopts.n_trees = cfg.method.forest_trees;
  fopts.max_depth = cfg.method.forest_depth;
  fopts.min_samples_leaf = cfg.method.forest_min_leaf;
  fopts.seed = derive_seed(cfg.seed, 0, 0);
  RandomForest forest = RandomForest::fit(enc.transform(train), train.y, fopts);
  std::vector<double> scores = forest.score(enc.transform(test));

  ScanOptions sopts;
  sopts.penalty = cfg.scan_penalty;
  sopts.restarts = cfg.scan_restarts;
  sopts.direction = ScanDirection::over;
  sopts.seed = derive_seed(cfg.seed, 0, 0x20);
  ScanResult over = scan(test, scores, sopts);
  sopts.direction = ScanDirection::under;
  sopts.seed = derive_seed(cfg.seed, 0, 0x21);
  ScanResult under = scan(test, scores, sopts);

  ordered_json j;
  j["dataset"] = cfg.dataset;
  j["records_scanned"] = test.n();
  j["over"] = scan_json(over);
  j["under"] = scan_json(under);
  return j;
}

namespace {

std::string method_label(const std::string& key) {
  std::string out = key;
  for (auto& c : out) c = char(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string pct_cell(const ordered_json& summary) {
  if (summary.is_null()) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f%%/±%.1f", summary.at("mean").get<double>() * 100.0,
                summary.at("stddev").get<double>() * 100.0);
  return buf;
}

std::string num_cell(const ordered_json& summary) {
  if (summary.is_null()) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f/±%.2f", summary.at("mean").get<double>(),
                summary.at("stddev").get<double>());
  return buf;
}

std::string precision_cell(const ordered_json& summary) {
  if (summary.is_null()) return "0.0";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f/±%.2f", summary.at("mean").get<double>(),
                summary.at("stddev").get<double>());
  return buf;
}

}  // namespace

std::string render_markdown(const ordered_json& bundle) {
  std::string out;
  const auto& run = bundle.at("run");
  out += "# Fairness audit: " + run.at("dataset").get<std::string>() + "\n\n";
  char line[160];
  std::snprintf(line, sizeof(line),
                "%zu records, %zu folds, seed %llu, config %s\n\n",
                run.at("records").get<std::size_t>(), run.at("folds").get<std::size_t>(),
                static_cast<unsigned long long>(run.at("seed").get<std::uint64_t>()),
                run.at("config_hash").get<std::string>().c_str());
  out += line;

  out += "## Group fairness\n\n";
  out += "| Model | Accuracy | Disparate Impact (1.0) | Average Odds (0.0) | "
         "Equal Opportunity (0.0) | Statistical Parity (0.0) |\n";
  out += "| --- | --- | --- | --- | --- | --- |\n";
  auto metrics_row = [&](const std::string& label, const ordered_json& agg) {
    out += "| " + label + " | " + pct_cell(agg.at("accuracy")) + " | " +
           num_cell(agg.at("disparate_impact")) + " | " + num_cell(agg.at("average_odds")) +
           " | " + num_cell(agg.at("equal_opportunity")) + " | " +
           num_cell(agg.at("statistical_parity")) + " |\n";
  };
  metrics_row("Biased", bundle.at("biased").at("aggregate"));
  for (const auto& [name, mj] : bundle.at("methods").items()) {
    if (mj.at("status") != "ok") {
      out += "| " + method_label(name) + " | failed | | | | |\n";
      continue;
    }
    metrics_row(method_label(name), mj.at("aggregate"));
  }

  out += "\n## Decision cohorts\n\n";
  out += "| Fairness Model | Agree Ratio | Disagree(+) Ratio | Disagree(-) Ratio | "
         "Meta Clf Accuracy | Agree Precision | Disagree(+) Precision | "
         "Disagree(-) Precision |\n";
  out += "| --- | --- | --- | --- | --- | --- | --- | --- |\n";
  for (const auto& [name, mj] : bundle.at("methods").items()) {
    if (mj.at("status") != "ok") {
      out += "| " + method_label(name) + " | failed | | | | | | |\n";
      continue;
    }
    const auto& agg = mj.at("cohorts").at("aggregate");
    out += "| " + method_label(name) + " | " + pct_cell(agg.at("agree_ratio")) + " | " +
           pct_cell(agg.at("disagree_pos_ratio")) + " | " +
           pct_cell(agg.at("disagree_neg_ratio")) + " | " + pct_cell(agg.at("meta_accuracy")) +
           " | " + precision_cell(agg.at("agree_precision")) + " | " +
           precision_cell(agg.at("disagree_pos_precision")) + " | " +
           precision_cell(agg.at("disagree_neg_precision")) + " |\n";
  }

  if (bundle.contains("scan")) {
    out += "\n## Deviating subgroups\n\n";
    const auto& folds = bundle.at("scan").at("per_fold");
    for (std::size_t f = 0; f < folds.size(); ++f) {
      for (const char* dir : {"over", "under"}) {
        const auto& r = folds[f].at(dir);
        std::snprintf(line, sizeof(line), "- fold %zu %s: score %.3f, q %.3f, n %zu, ", f, dir,
                      r.at("score").get<double>(), r.at("q").get<double>(),
                      r.at("n").get<std::size_t>());
        out += line;
        out += r.at("subgroup").dump();
        out += "\n";
      }
    }
  }

  out += "\n## Missed-favorable rules (first fold)\n\n";
  for (const auto& [name, mj] : bundle.at("methods").items()) {
    if (mj.at("status") != "ok") continue;
    out += "### " + method_label(name) + "\n\n";
    const auto& rules = mj.at("rules");
    if (rules.empty()) {
      out += "(no such cohort found)\n\n";
      continue;
    }
    std::size_t shown = 0;
    for (const auto& rule : rules) {
      std::snprintf(line, sizeof(line), "- support %zu: ", rule.at("support").get<std::size_t>());
      out += line;
      out += "`" + rule.at("text").get<std::string>() + "`\n";
      if (++shown == 10) break;
    }
    out += "\n";
  }
  return out;
}

std::string render_rules(const ordered_json& bundle) {
  std::string out;
  for (const auto& [name, mj] : bundle.at("methods").items()) {
    out += "== " + method_label(name) + " ==\n";
    if (mj.at("status") != "ok") {
      out += "(method failed: " + mj.at("error").get<std::string>() + ")\n\n";
      continue;
    }
    for (const auto& rule : mj.at("rules")) out += rule.at("text").get<std::string>() + "\n";
    out += "\n";
  }
  return out;
}

void write_bundle(const ordered_json& bundle, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream f(out_dir + "/" + name, std::ios::binary);
    if (!f) throw DataError("cannot write '" + out_dir + "/" + name + "'");
    f << text;
  };
  write("bundle.json", bundle.dump(2) + "\n");
  write("report.md", render_markdown(bundle));
  write("rules.txt", render_rules(bundle));
}

}  // namespace fairaudit

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fairaudit/dataset.hpp"
#include "fairaudit/mitigation.hpp"

namespace fairaudit {

using ordered_json = nlohmann::ordered_json;

/// Effective audit settings: a config file parsed with defaults applied.
/// Unknown keys are rejected so typos fail loudly.
struct AuditConfig {
  std::string dataset;                  // registered or synthetic name
  std::string path;                     // CSV path for registered datasets
  LoadOverrides overrides;
  std::vector<std::string> methods = {"dir", "lfr", "pr", "roc", "eo", "ceo"};
  std::uint64_t seed = 42;
  std::size_t folds = 5;                // 1 means a single 67/33 split
  std::size_t max_rows = 0;             // 0 keeps every record
  std::size_t synth_rows = 10000;
  double synth_bias_gap = 0.3;
  std::string out_dir = "audit-out";

  MethodConfig method;

  bool scan_enabled = true;
  double scan_penalty = 1.0;
  std::size_t scan_restarts = 20;

  std::size_t meta_depth = 6;
  std::size_t meta_min_leaf = 20;
  std::size_t meta_cv = 5;
};

AuditConfig parse_audit_config(const nlohmann::json& j);
AuditConfig load_audit_config(const std::string& path);

/// The dataset the config names: a registered CSV load or a seeded
/// synthetic draw.
Dataset load_configured_dataset(const AuditConfig& cfg);

/// Canonical JSON echo of the effective settings; its text is what the
/// bundle's config_hash commits to.
ordered_json config_json(const AuditConfig& cfg);
std::string config_hash(const AuditConfig& cfg);

/// Full two-pipeline audit: per fold, a biased reference model, each
/// requested mitigation method, the per-method decision cohorts with their
/// explaining trees, and over/under subgroup scans. Method failures are
/// isolated per method; if every requested method fails the audit throws
/// AllMethodsFailed. Same config and seed give a byte-identical bundle.
ordered_json run_audit(const AuditConfig& cfg);

/// Just the dataset load, baseline model and subgroup scan on one split.
ordered_json scan_only(const AuditConfig& cfg);

std::string render_markdown(const ordered_json& bundle);
std::string render_rules(const ordered_json& bundle);

/// Writes bundle.json, report.md and rules.txt under out_dir.
void write_bundle(const ordered_json& bundle, const std::string& out_dir);

}  // namespace fairaudit

// Command line front end for the fairness audit library.
//
// Exit codes: 0 success, 1 bad configuration or usage, 2 bad or missing
// data, 3 every requested mitigation method failed.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairaudit/audit.hpp"
#include "fairaudit/dataset.hpp"

namespace {

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const fairaudit::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const fairaudit::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const fairaudit::AllMethodsFailed& e) {
    std::cerr << "audit failed: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fairaudit::DataError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairness audit toolkit"};
  app.require_subcommand(1);

  // --- run ---
  auto* run = app.add_subcommand("run", "run the full audit and write a result bundle");
  std::string run_config;
  std::string run_dataset, run_out;
  std::vector<std::string> run_methods;
  std::uint64_t run_seed = 0;
  bool run_seed_set = false;
  run->add_option("--config", run_config, "audit config JSON")->required();
  run->add_option("--dataset", run_dataset, "override the configured dataset name");
  run->add_option("--methods", run_methods, "override the mitigation method list")
      ->delimiter(',');
  run->add_option("--seed", run_seed, "override the run seed")
      ->each([&](const std::string&) { run_seed_set = true; });
  run->add_option("--out", run_out, "override the output directory");

  // --- scan ---
  auto* scan_cmd = app.add_subcommand("scan", "scan for the most deviating subgroups");
  std::string scan_config;
  scan_cmd->add_option("--config", scan_config, "audit config JSON")->required();

  // --- report ---
  auto* report = app.add_subcommand("report", "re-render a result bundle");
  std::string report_bundle, report_format = "md";
  report->add_option("--bundle", report_bundle, "bundle.json from a previous run")->required();
  report->add_option("--format", report_format, "md, json, or rules")
      ->check(CLI::IsMember({"md", "json", "rules"}));

  // --- data describe ---
  auto* data = app.add_subcommand("data", "dataset utilities");
  data->require_subcommand(1);
  auto* describe = data->add_subcommand("describe", "summarize a dataset");
  std::string desc_name, desc_path;
  describe->add_option("--dataset", desc_name, "registered or synthetic dataset name")
      ->required();
  describe->add_option("--path", desc_path, "CSV file for registered datasets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (run->parsed()) {
    return guarded([&] {
      fairaudit::AuditConfig cfg = fairaudit::load_audit_config(run_config);
      if (!run_dataset.empty()) cfg.dataset = run_dataset;
      if (!run_methods.empty()) {
        for (const auto& m : run_methods)
          if (!fairaudit::is_mitigation_method(m))
            throw fairaudit::ConfigError("unknown mitigation method '" + m + "'");
        cfg.methods = run_methods;
      }
      if (run_seed_set) cfg.seed = run_seed;
      if (!run_out.empty()) cfg.out_dir = run_out;

      fairaudit::ordered_json bundle = fairaudit::run_audit(cfg);
      fairaudit::write_bundle(bundle, cfg.out_dir);
      std::cout << "wrote " << cfg.out_dir << "/bundle.json, report.md, rules.txt\n";
      for (const auto& [name, mj] : bundle.at("methods").items())
        std::cout << "  " << name << ": " << mj.at("status").get<std::string>() << "\n";
      return 0;
    });
  }

  if (scan_cmd->parsed()) {
    return guarded([&] {
      fairaudit::AuditConfig cfg = fairaudit::load_audit_config(scan_config);
      std::cout << fairaudit::scan_only(cfg).dump(2) << "\n";
      return 0;
    });
  }

  if (report->parsed()) {
    return guarded([&] {
      fairaudit::ordered_json bundle;
      try {
        bundle = fairaudit::ordered_json::parse(read_file(report_bundle));
      } catch (const nlohmann::json::exception& e) {
        throw fairaudit::DataError("'" + report_bundle + "' is not a valid bundle: " + e.what());
      }
      if (report_format == "json")
        std::cout << bundle.dump(2) << "\n";
      else if (report_format == "rules")
        std::cout << fairaudit::render_rules(bundle);
      else
        std::cout << fairaudit::render_markdown(bundle);
      return 0;
    });
  }

  // data describe
  return guarded([&] {
    fairaudit::AuditConfig cfg;
    cfg.dataset = desc_name;
    cfg.path = desc_path;
    fairaudit::Dataset ds = fairaudit::load_configured_dataset(cfg);
    std::cout << fairaudit::describe(ds);
    return 0;
  });
}

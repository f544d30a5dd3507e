#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "asim/config.hpp"
#include "asim/experiments.hpp"
#include "asim/verify.hpp"

namespace {

std::pair<std::string, std::string> split_override(const std::string& token) {
  auto pos = token.find('=');
  if (pos == std::string::npos || pos == 0)
    throw asim::ConfigError("override must look like key.path=value, got '" + token + "'");
  return {token.substr(0, pos), token.substr(pos + 1)};
}

int cmd_run(const std::string& config_path, const std::vector<std::string>& override_tokens) {
  std::vector<std::pair<std::string, std::string>> overrides;
  overrides.reserve(override_tokens.size());
  for (const std::string& t : override_tokens) overrides.push_back(split_override(t));
  asim::ExperimentConfig cfg = asim::load_config(config_path, overrides);
  asim::run_experiment(cfg);
  std::cout << "wrote " << cfg.output_dir << "\n";
  return 0;
}

int cmd_summarize(const std::string& dir, std::string out) {
  if (out.empty()) out = dir + "/summary.csv";
  asim::summarize_dir(dir, out);
  std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_verify() {
  std::vector<asim::CheckResult> results = asim::run_acceptance_checks();
  for (const asim::CheckResult& r : results) {
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name
              << (r.expected_fail ? " [expected to fail]" : "") << "  " << r.detail << "\n";
  }
  return asim::all_as_expected(results) ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analog in-memory training simulator"};
  app.set_version_flag("--version", std::string(asim::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> override_tokens;
  CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment from a JSON config");
  run_cmd->add_option("config", config_path, "JSON config file")->required();
  run_cmd->add_option("overrides", override_tokens,
                      "dotted-path overrides, e.g. optim.alpha=0.05");

  std::string trace_dir;
  std::string summary_out;
  CLI::App* sum_cmd = app.add_subcommand("summarize", "Aggregate trace CSVs in a directory");
  sum_cmd->add_option("dir", trace_dir, "directory of per-seed trace CSVs")->required();
  sum_cmd->add_option("-o,--output", summary_out, "output CSV (default <dir>/summary.csv)");

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Run the built-in acceptance checks and report PASS/FAIL");

  try {
    app.parse(argc, argv);
    if (run_cmd->parsed()) return cmd_run(config_path, override_tokens);
    if (sum_cmd->parsed()) return cmd_summarize(trace_dir, summary_out);
    if (verify_cmd->parsed()) return cmd_verify();
    return 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const asim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

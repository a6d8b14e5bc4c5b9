#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nads/sweep.hpp"

namespace {

// Exit codes: 0 success, 1 configuration or usage error, 2 validation found
// a statistically significant analytic/empirical mismatch, 3 the design
// problem is infeasible within the scan bound.
constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kValidationFailed = 2;
constexpr int kInfeasible = 3;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw nads::sweep::ConfigError("cannot open output file '" + out_path +
                                   "'");
  }
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-tier nano-abnormality detection analysis"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::optional<std::int64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> m_max;

  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Evaluate the closed forms over a grid");
  sweep_cmd->add_option("--config", config_path, "Configuration file")
      ->required();
  sweep_cmd->add_option("--out", out_path, "Output CSV path (default stdout)");

  CLI::App* optimize_cmd = app.add_subcommand(
      "optimize", "Find the smallest sensor count meeting the constraints");
  optimize_cmd->add_option("--config", config_path, "Configuration file")
      ->required();
  optimize_cmd->add_option("--out", out_path,
                           "Output report path (default stdout)");
  optimize_cmd->add_option("--m-max", m_max, "Override the scan bound");

  CLI::App* validate_cmd = app.add_subcommand(
      "validate", "Cross-check the closed forms against simulation");
  validate_cmd->add_option("--config", config_path, "Configuration file")
      ->required();
  validate_cmd->add_option("--out", out_path,
                           "Output CSV path (default stdout)");
  validate_cmd->add_option("--trials", trials, "Override the trial count");
  validate_cmd->add_option("--seed", seed, "Override the master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    nads::sweep::SweepConfig config =
        nads::sweep::parse_config_file(config_path);

    if (sweep_cmd->parsed()) {
      write_output(nads::sweep::run_sweep(config), out_path);
      return kOk;
    }

    if (optimize_cmd->parsed()) {
      if (m_max) {
        config.m_max = *m_max;
      }
      const nads::sweep::OptimizeReport report =
          nads::sweep::run_optimize(config);
      write_output(report.text, out_path);
      if (!report.feasible) {
        std::cerr << "no sensor count within the bound meets both"
                     " constraints\n";
        return kInfeasible;
      }
      return kOk;
    }

    // validate
    if (trials) {
      config.trials = *trials;
    }
    if (seed) {
      config.seed = *seed;
    }
    const nads::sweep::ValidateReport report =
        nads::sweep::run_validate(config);
    write_output(report.csv, out_path);
    if (!report.within_tolerance) {
      std::cerr << "validation failed: max |z| = " << report.max_abs_z
                << " exceeds 4\n";
      return kValidationFailed;
    }
    return kOk;
  } catch (const nads::sweep::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
}

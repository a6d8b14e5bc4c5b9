#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nads/ncc_model.hpp"

namespace nads::sweep {

/// Raised on malformed or inconsistent configuration, naming the offending
/// key. The CLI maps it to exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { analytic, validate, optimize };

/// One swept parameter: its name, the values it takes, and the original
/// range or list text (serialized back verbatim).
struct SweptParameter {
  std::string name;
  std::vector<double> values;
  std::string text;

  friend bool operator==(const SweptParameter&,
                         const SweptParameter&) = default;
};

/// Declarative description of one experiment: fixed parameter values, swept
/// parameter ranges (declaration order = loop nesting, sensor count
/// innermost), the sensor-count range, and the requested output columns.
struct SweepConfig {
  Mode mode = Mode::analytic;
  std::map<std::string, double> fixed;
  std::vector<SweptParameter> swept;
  int m_start = 1;
  int m_stop = 1;
  std::vector<std::string> outputs;  // empty = every probability column
  bool np_h_computed = false;        // healthy rate from the channel model
  std::optional<ncc::NccParameters> channel;
  std::optional<std::int64_t> trials;
  std::optional<std::uint64_t> seed;
  std::string fidelity = "analytic";  // or "poisson"
  std::optional<int> m_max;           // optimize scan bound

  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

[[nodiscard]] SweepConfig parse_config(std::istream& in);
[[nodiscard]] SweepConfig parse_config_file(const std::string& path);

/// Canonical text form; parse(serialize(parse(x))) == parse(x).
[[nodiscard]] std::string serialize_config(const SweepConfig& config);

/// Analytic sweep over the parameter grid; returns the CSV document.
[[nodiscard]] std::string run_sweep(const SweepConfig& config);

struct OptimizeReport {
  bool feasible = false;
  int sensor_count = 0;
  std::string text;  // deterministic key = value report
};

/// Minimum-sensor-count design problem at a single parameter point.
[[nodiscard]] OptimizeReport run_optimize(const SweepConfig& config);

struct ValidateReport {
  std::string csv;
  bool within_tolerance = false;  // every |z| <= 4
  double max_abs_z = 0.0;
};

/// Monte Carlo cross-check of the closed forms over the grid.
/// analytic_bias shifts every analytic value before comparison; it exists
/// for negative-control tests of the harness itself and is never set by
/// the CLI.
[[nodiscard]] ValidateReport run_validate(const SweepConfig& config,
                                          double analytic_bias = 0.0);

}  // namespace nads::sweep

#include "nads/sweep.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string_view>

#include "nads/mc_oracle.hpp"
#include "nads/nads_system.hpp"
#include "nads/snm_detector.hpp"
#include "nads/stat_math.hpp"

namespace nads::sweep {
namespace {

// ================= text utilities =================

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(trim(std::string_view(s).substr(start)));
      return parts;
    }
    parts.push_back(trim(std::string_view(s).substr(start, pos - start)));
    start = pos + 1;
  }
}

double parse_double(const std::string& text, const std::string& key) {
  double out = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ConfigError("value of '" + key + "' is not a number: '" + text +
                      "'");
  }
  return out;
}

std::int64_t parse_integer(const std::string& text, const std::string& key) {
  std::int64_t out = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ConfigError("value of '" + key + "' is not an integer: '" + text +
                      "'");
  }
  return out;
}

std::string format_double(double v) {
  std::array<char, 64> buf;
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

// ================= parameter vocabulary =================

constexpr std::array<const char*, 9> kParamOrder = {
    "G", "V", "NP_H", "sigma_MCC", "eta1", "n", "k", "xi", "gamma"};

constexpr std::array<const char*, 7> kSweepable = {
    "G", "V", "NP_H", "sigma_MCC", "eta1", "n", "k"};

constexpr std::array<const char*, 7> kProbabilityColumns = {
    "P_M_NCC", "P_F_NCC", "P_M_MCC", "P_F_MCC", "P_D", "P_F", "P_M"};

bool is_param(const std::string& key) {
  for (const char* p : kParamOrder) {
    if (key == p) return true;
  }
  return false;
}

bool is_sweepable(const std::string& key) {
  for (const char* p : kSweepable) {
    if (key == p) return true;
  }
  return false;
}

bool is_output_column(const std::string& key) {
  for (const char* p : kProbabilityColumns) {
    if (key == p) return true;
  }
  return key == "P_F_NCC_achieved";
}

void check_param_value(const std::string& key, double v) {
  const auto fail = [&](const char* what) {
    throw ConfigError("parameter '" + key + "' " + what + ", got " +
                      format_double(v));
  };
  if (!std::isfinite(v)) fail("must be finite");
  if (key == "eta1") {
    if (!(v > 0.0 && v < 1.0)) fail("must lie in (0, 1)");
  } else if (key == "n") {
    if (!(v >= 1.0 && v == std::floor(v))) fail("must be an integer >= 1");
  } else if (key == "xi") {
    if (!(v >= 0.0 && v < 1.0)) fail("must lie in [0, 1)");
  } else if (key == "gamma") {
    if (!(v > 0.0 && v <= 1.0)) fail("must lie in (0, 1]");
  } else {
    if (!(v > 0.0)) fail("must be positive");
  }
}

// [ncc] section key -> NccParameters field
struct ChannelKey {
  const char* key;
  double ncc::NccParameters::*field;
  bool required;
};

constexpr std::array<ChannelKey, 10> kChannelKeys = {{
    {"T", &ncc::NccParameters::temperature, false},
    {"alpha", &ncc::NccParameters::distance, false},
    {"N", &ncc::NccParameters::receptor_count, true},
    {"t_H", &ncc::NccParameters::pulse_duration, true},
    {"L_ex", &ncc::NccParameters::concentration, true},
    {"kappa1", &ncc::NccParameters::binding_rate, true},
    {"kappa_m1", &ncc::NccParameters::release_rate, true},
    {"k_B", &ncc::NccParameters::boltzmann, false},
    {"S", &ncc::NccParameters::threshold, true},
    {"P_A", &ncc::NccParameters::prob_transmit_pulse, true},
}};

// ================= config parsing =================

std::vector<double> parse_swept_values(const std::string& key,
                                       const std::string& text) {
  std::vector<double> values;
  if (text.find(':') != std::string::npos) {
    const std::vector<std::string> parts = split(text, ':');
    if (parts.size() != 3) {
      throw ConfigError("range of '" + key +
                        "' must be start:step:stop, got '" + text + "'");
    }
    const double start = parse_double(parts[0], key);
    const double step = parse_double(parts[1], key);
    const double stop = parse_double(parts[2], key);
    if (!(step > 0.0)) {
      throw ConfigError("range of '" + key + "' has step <= 0");
    }
    if (start > stop) {
      throw ConfigError("range of '" + key + "' has start > stop");
    }
    const auto count =
        static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    values.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
      values.push_back(start + static_cast<double>(i) * step);
    }
  } else {
    for (const std::string& token : split(text, ',')) {
      values.push_back(parse_double(token, key));
    }
  }
  for (const double v : values) {
    check_param_value(key, v);
  }
  return values;
}

void parse_m_range(const std::string& text, SweepConfig& config) {
  const std::vector<std::string> parts = split(text, ':');
  if (parts.size() > 2) {
    throw ConfigError("'m' must be a count or start:stop, got '" + text + "'");
  }
  const std::int64_t start = parse_integer(parts.front(), "m");
  const std::int64_t stop =
      parts.size() == 2 ? parse_integer(parts.back(), "m") : start;
  if (start < 1 || stop < start) {
    throw ConfigError("'m' range must satisfy 1 <= start <= stop");
  }
  config.m_start = static_cast<int>(start);
  config.m_stop = static_cast<int>(stop);
}

}  // namespace

SweepConfig parse_config(std::istream& in) {
  SweepConfig config;
  std::string section;
  std::set<std::string> seen_sections;
  std::set<std::string> seen_keys;  // per current scope, "scope/key"
  std::set<std::string> channel_keys_seen;
  ncc::NccParameters channel;
  bool has_channel = false;
  bool has_mode = false;

  std::string raw;
  while (std::getline(in, raw)) {
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) {
      raw.erase(hash);
    }
    const std::string line = trim(raw);
    if (line.empty()) {
      continue;
    }

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("malformed section header: '" + line + "'");
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section != "fixed" && section != "swept" && section != "outputs" &&
          section != "ncc") {
        throw ConfigError("unknown section '[" + section + "]'");
      }
      if (!seen_sections.insert(section).second) {
        throw ConfigError("duplicate section '[" + section + "]'");
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("expected 'key = value', got '" + line + "'");
    }
    if (!seen_keys.insert(section + "/" + key).second) {
      throw ConfigError("duplicate key '" + key + "'");
    }

    if (section.empty()) {
      if (key == "mode") {
        if (value == "analytic") {
          config.mode = Mode::analytic;
        } else if (value == "validate") {
          config.mode = Mode::validate;
        } else if (value == "optimize") {
          config.mode = Mode::optimize;
        } else {
          throw ConfigError("unknown mode '" + value + "'");
        }
        has_mode = true;
      } else if (key == "m") {
        parse_m_range(value, config);
      } else if (key == "trials") {
        const std::int64_t t = parse_integer(value, key);
        if (t < 1) throw ConfigError("'trials' must be >= 1");
        config.trials = t;
      } else if (key == "seed") {
        config.seed = static_cast<std::uint64_t>(parse_integer(value, key));
      } else if (key == "fidelity") {
        if (value != "analytic" && value != "poisson") {
          throw ConfigError("'fidelity' must be analytic or poisson");
        }
        config.fidelity = value;
      } else if (key == "m_max") {
        const std::int64_t m = parse_integer(value, key);
        if (m < 1) throw ConfigError("'m_max' must be >= 1");
        config.m_max = static_cast<int>(m);
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
      continue;
    }

    if (section == "fixed") {
      if (!is_param(key)) {
        throw ConfigError("unknown parameter '" + key + "'");
      }
      if (key == "NP_H" && value == "computed") {
        config.np_h_computed = true;
        continue;
      }
      const double v = parse_double(value, key);
      check_param_value(key, v);
      config.fixed[key] = v;
      continue;
    }

    if (section == "swept") {
      if (!is_sweepable(key)) {
        throw ConfigError(is_param(key)
                              ? "parameter '" + key + "' is not sweepable"
                              : "unknown parameter '" + key + "'");
      }
      config.swept.push_back(SweptParameter{
          key, parse_swept_values(key, value), value});
      continue;
    }

    if (section == "outputs") {
      if (key != "columns") {
        throw ConfigError("unknown key '" + key + "' in [outputs]");
      }
      for (const std::string& column : split(value, ',')) {
        if (!is_output_column(column)) {
          throw ConfigError("unknown output column '" + column + "'");
        }
        config.outputs.push_back(column);
      }
      continue;
    }

    // section == "ncc"
    bool known = false;
    for (const ChannelKey& ck : kChannelKeys) {
      if (key == ck.key) {
        channel.*(ck.field) = parse_double(value, key);
        channel_keys_seen.insert(key);
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown key '" + key + "' in [ncc]");
    }
    has_channel = true;
  }

  (void)has_mode;

  // cross-checks
  for (const SweptParameter& sp : config.swept) {
    if (config.fixed.count(sp.name) != 0) {
      throw ConfigError("parameter '" + sp.name + "' is both fixed and swept");
    }
    if (sp.name == "NP_H" && config.np_h_computed) {
      throw ConfigError("NP_H cannot be both computed and swept");
    }
  }
  if (config.np_h_computed && config.fixed.count("NP_H") != 0) {
    throw ConfigError("NP_H cannot be both computed and given");
  }
  if (has_channel && !config.np_h_computed) {
    throw ConfigError("[ncc] section requires NP_H = computed");
  }
  if (config.np_h_computed) {
    if (!has_channel) {
      throw ConfigError("NP_H = computed requires an [ncc] section");
    }
    for (const ChannelKey& ck : kChannelKeys) {
      if (ck.required && channel_keys_seen.count(ck.key) == 0) {
        throw ConfigError(std::string("missing [ncc] key '") + ck.key + "'");
      }
    }
    config.channel = channel;
  }
  return config;
}

SweepConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  return parse_config(in);
}

std::string serialize_config(const SweepConfig& config) {
  std::ostringstream out;
  switch (config.mode) {
    case Mode::analytic:
      out << "mode = analytic\n";
      break;
    case Mode::validate:
      out << "mode = validate\n";
      break;
    case Mode::optimize:
      out << "mode = optimize\n";
      break;
  }
  if (config.m_start == config.m_stop) {
    out << "m = " << config.m_start << "\n";
  } else {
    out << "m = " << config.m_start << ":" << config.m_stop << "\n";
  }
  if (config.trials) {
    out << "trials = " << *config.trials << "\n";
  }
  if (config.seed) {
    out << "seed = " << *config.seed << "\n";
  }
  if (config.fidelity != "analytic") {
    out << "fidelity = " << config.fidelity << "\n";
  }
  if (config.m_max) {
    out << "m_max = " << *config.m_max << "\n";
  }

  out << "\n[fixed]\n";
  for (const char* name : kParamOrder) {
    if (std::string(name) == "NP_H" && config.np_h_computed) {
      out << "NP_H = computed\n";
      continue;
    }
    const auto it = config.fixed.find(name);
    if (it != config.fixed.end()) {
      out << name << " = " << format_double(it->second) << "\n";
    }
  }

  if (!config.swept.empty()) {
    out << "\n[swept]\n";
    for (const SweptParameter& sp : config.swept) {
      out << sp.name << " = " << sp.text << "\n";
    }
  }

  if (!config.outputs.empty()) {
    out << "\n[outputs]\n";
    out << "columns = ";
    for (std::size_t i = 0; i < config.outputs.size(); ++i) {
      out << (i == 0 ? "" : ",") << config.outputs[i];
    }
    out << "\n";
  }

  if (config.channel) {
    out << "\n[ncc]\n";
    const ncc::NccParameters& ch = *config.channel;
    for (const ChannelKey& ck : kChannelKeys) {
      out << ck.key << " = " << format_double(ch.*(ck.field)) << "\n";
    }
  }
  return out.str();
}

// ================= grid evaluation =================

namespace {

struct GridContext {
  std::vector<std::string> param_columns;  // canonical order, present only
  std::vector<std::string> outputs;        // requested probability columns
};

// Every run needs these resolved at each grid point.
constexpr std::array<const char*, 5> kRequired = {"G", "sigma_MCC", "eta1",
                                                  "n", "k"};

void check_runnable(const SweepConfig& config) {
  std::set<std::string> available;
  for (const auto& [name, value] : config.fixed) {
    available.insert(name);
  }
  for (const SweptParameter& sp : config.swept) {
    available.insert(sp.name);
  }
  if (config.np_h_computed) {
    available.insert("NP_H");
  }
  for (const char* name : kRequired) {
    if (available.count(name) == 0) {
      throw ConfigError(std::string("missing parameter '") + name + "'");
    }
  }
  if (available.count("NP_H") == 0) {
    throw ConfigError("missing parameter 'NP_H' (give a value or 'computed')");
  }
  if (config.np_h_computed && available.count("V") == 0) {
    throw ConfigError("NP_H = computed requires parameter 'V'");
  }
}

GridContext make_context(const SweepConfig& config) {
  GridContext ctx;
  std::set<std::string> present;
  for (const auto& [name, value] : config.fixed) {
    present.insert(name);
  }
  for (const SweptParameter& sp : config.swept) {
    present.insert(sp.name);
  }
  if (config.np_h_computed) {
    present.insert("NP_H");
  }
  for (const char* name : kParamOrder) {
    if (present.count(name) != 0) {
      ctx.param_columns.push_back(name);
    }
  }
  ctx.outputs = config.outputs;
  if (ctx.outputs.empty()) {
    ctx.outputs.assign(kProbabilityColumns.begin(), kProbabilityColumns.end());
  }
  return ctx;
}

// One resolved parameter point, before the sensor-count loop.
struct PointEvaluation {
  std::map<std::string, double> params;  // includes effective NP_H
  bool np_h_computed = false;
  snm::DetectorSpec detector;
  double misdetection_ncc = 0.0;
  double budget_ncc = 0.0;
  double achieved_ncc = 0.0;
  mcc::ErrorProbabilities fusion;
  double rate_factor = 1.0;
};

PointEvaluation evaluate_point(const SweepConfig& config,
                               std::map<std::string, double> params) {
  PointEvaluation pe;
  pe.np_h_computed = config.np_h_computed;
  if (config.np_h_computed) {
    ncc::NccParameters channel = *config.channel;
    channel.sample_volume = params.at("V");
    params["NP_H"] = ncc::healthy_bit_rate(channel);
  }
  pe.params = std::move(params);

  const double np_h = pe.params.at("NP_H");
  const int n = static_cast<int>(pe.params.at("n"));
  const double eta1 = pe.params.at("eta1");
  pe.detector = snm::make_detector(np_h, n, eta1);
  pe.rate_factor = pe.params.at("k");
  pe.misdetection_ncc =
      snm::misdetection_probability(pe.detector,
                                    snm::AbnormalityModel{pe.rate_factor});
  pe.budget_ncc = eta1;
  pe.achieved_ncc = snm::achieved_false_alarm(pe.detector);

  mcc::MccParameters link;
  link.message_amplitude = pe.params.at("G");
  link.noise_sigma = pe.params.at("sigma_MCC");
  link.sensor_count = 1;
  pe.fusion = mcc::mcc_error_probabilities(link);
  return pe;
}

// Walk the cartesian grid in declaration order (first declared swept
// parameter outermost) and call fn once per parameter point.
template <typename Fn>
void for_each_point(const SweepConfig& config, Fn&& fn) {
  const std::size_t dims = config.swept.size();
  std::vector<std::size_t> index(dims, 0);
  while (true) {
    std::map<std::string, double> params = config.fixed;
    for (std::size_t d = 0; d < dims; ++d) {
      params[config.swept[d].name] = config.swept[d].values[index[d]];
    }
    fn(evaluate_point(config, std::move(params)));
    // odometer: last declared dimension spins fastest
    std::size_t d = dims;
    while (d > 0) {
      --d;
      if (++index[d] < config.swept[d].values.size()) {
        break;
      }
      index[d] = 0;
      if (d == 0) {
        return;
      }
    }
    if (dims == 0) {
      return;
    }
  }
}

std::string format_probability(double v, const std::string& column,
                               std::vector<std::string>& underflowed) {
  if (v > 0.0 && v < 1e-30) {
    underflowed.push_back(column);
    return "0";
  }
  return format_double(v);
}

void append_param_cells(std::ostringstream& row, const GridContext& ctx,
                        const PointEvaluation& pe) {
  for (const std::string& name : ctx.param_columns) {
    row << format_double(pe.params.at(name)) << ",";
  }
  row << (pe.np_h_computed ? "computed" : "given") << ",";
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::string run_sweep(const SweepConfig& config) {
  if (config.mode != Mode::analytic) {
    throw ConfigError("run_sweep requires mode = analytic");
  }
  check_runnable(config);
  const GridContext ctx = make_context(config);

  std::ostringstream csv;
  for (const std::string& name : ctx.param_columns) {
    csv << name << ",";
  }
  csv << "NP_H_source,M";
  for (const std::string& column : ctx.outputs) {
    csv << "," << column;
  }
  csv << ",underflow\n";

  for_each_point(config, [&](const PointEvaluation& pe) {
    for (int m = config.m_start; m <= config.m_stop; ++m) {
      const sys::SystemPerformance perf = sys::system_performance(
          sys::PerSensorRates{pe.misdetection_ncc, pe.budget_ncc}, pe.fusion,
          static_cast<double>(m));
      std::ostringstream row;
      append_param_cells(row, ctx, pe);
      row << m;
      std::vector<std::string> underflowed;
      for (const std::string& column : ctx.outputs) {
        double value = 0.0;
        if (column == "P_M_NCC") {
          value = pe.misdetection_ncc;
        } else if (column == "P_F_NCC") {
          value = pe.budget_ncc;
        } else if (column == "P_F_NCC_achieved") {
          value = pe.achieved_ncc;
        } else if (column == "P_M_MCC") {
          value = pe.fusion.misdetection.value();
        } else if (column == "P_F_MCC") {
          value = pe.fusion.false_alarm.value();
        } else if (column == "P_D") {
          value = perf.p_d.value();
        } else if (column == "P_F") {
          value = perf.p_f.value();
        } else {  // P_M
          value = perf.p_m.value();
        }
        row << "," << format_probability(value, column, underflowed);
      }
      row << ",";
      for (std::size_t i = 0; i < underflowed.size(); ++i) {
        row << (i == 0 ? "" : ";") << underflowed[i];
      }
      csv << row.str() << "\n";
    }
  });
  return csv.str();
}

OptimizeReport run_optimize(const SweepConfig& config) {
  if (config.mode != Mode::optimize) {
    throw ConfigError("run_optimize requires mode = optimize");
  }
  if (!config.swept.empty()) {
    throw ConfigError("optimize expects a single parameter point, not a sweep");
  }
  if (config.fixed.count("xi") == 0 || config.fixed.count("gamma") == 0) {
    throw ConfigError("optimize requires constraints 'xi' and 'gamma'");
  }
  check_runnable(config);

  const PointEvaluation pe = evaluate_point(config, config.fixed);
  mcc::MccParameters link;
  link.message_amplitude = pe.params.at("G");
  link.noise_sigma = pe.params.at("sigma_MCC");
  link.sensor_count = 1;

  sys::DesignConstraints constraints;
  constraints.detection_floor = pe.params.at("xi");
  constraints.false_alarm_ceiling = pe.params.at("gamma");
  constraints.max_sensor_count = config.m_max.value_or(1000);

  const sys::DesignOutcome outcome = sys::optimize_concentration(
      sys::PerSensorRates{pe.misdetection_ncc, pe.budget_ncc}, link,
      constraints);

  std::ostringstream out;
  out << "xi = " << format_double(constraints.detection_floor) << "\n";
  out << "gamma = " << format_double(constraints.false_alarm_ceiling) << "\n";
  out << "m_max = " << constraints.max_sensor_count << "\n";
  out << "feasible = " << (outcome.feasible ? "true" : "false") << "\n";
  if (outcome.feasible) {
    out << "M_star = " << outcome.sensor_count << "\n";
    out << "P_D = " << format_double(outcome.performance.p_d.value()) << "\n";
    out << "P_F = " << format_double(outcome.performance.p_f.value()) << "\n";
    out << "P_M = " << format_double(outcome.performance.p_m.value()) << "\n";
    if (outcome.one_below) {
      out << "P_D_at_M_star_minus_1 = "
          << format_double(outcome.one_below->p_d.value()) << "\n";
      out << "P_F_at_M_star_minus_1 = "
          << format_double(outcome.one_below->p_f.value()) << "\n";
    }
  } else {
    out << "diagnosis = " << outcome.diagnosis << "\n";
    out << "detection_attainable = "
        << (outcome.detection_attainable ? "true" : "false") << "\n";
    out << "false_alarm_attainable = "
        << (outcome.false_alarm_attainable ? "true" : "false") << "\n";
  }

  OptimizeReport report;
  report.feasible = outcome.feasible;
  report.sensor_count = outcome.sensor_count;
  report.text = out.str();
  return report;
}

ValidateReport run_validate(const SweepConfig& config, double analytic_bias) {
  if (config.mode != Mode::validate) {
    throw ConfigError("run_validate requires mode = validate");
  }
  if (!config.trials || !config.seed) {
    throw ConfigError("validate requires 'trials' and 'seed'");
  }
  check_runnable(config);
  const GridContext ctx = make_context(config);
  const std::int64_t trials = *config.trials;
  const std::uint64_t master_seed = *config.seed;
  const mc::SensorFidelity fidelity = config.fidelity == "poisson"
                                          ? mc::SensorFidelity::poisson_counts
                                          : mc::SensorFidelity::analytic_rate;

  std::ostringstream csv;
  for (const std::string& name : ctx.param_columns) {
    csv << name << ",";
  }
  csv << "NP_H_source,M,quantity,analytic,empirical,std_err,z\n";

  double max_abs_z = 0.0;
  std::uint64_t point_index = 0;

  for_each_point(config, [&](const PointEvaluation& pe) {
    for (int m = config.m_start; m <= config.m_stop; ++m) {
      mcc::MccParameters link;
      link.message_amplitude = pe.params.at("G");
      link.noise_sigma = pe.params.at("sigma_MCC");
      link.sensor_count = m;

      const sys::SystemPerformance perf = sys::system_performance(
          sys::PerSensorRates{pe.misdetection_ncc, pe.achieved_ncc},
          pe.fusion, static_cast<double>(m));

      mc::TrialConfig trial;
      trial.trials = trials;
      trial.detector = pe.detector;
      trial.mcc = link;
      trial.fidelity = fidelity;

      struct Quantity {
        const char* name;
        double analytic;
        bool abnormal;
        bool end_to_end;
      };
      const std::array<Quantity, 4> quantities = {{
          {"P_D_NCC", 1.0 - pe.misdetection_ncc, true, false},
          {"P_F_NCC", pe.achieved_ncc, false, false},
          {"P_D", perf.p_d.value(), true, true},
          {"P_F", perf.p_f.value(), false, true},
      }};

      std::uint64_t quantity_index = 0;
      for (const Quantity& q : quantities) {
        trial.scenario =
            mc::Scenario{q.abnormal, q.abnormal ? pe.rate_factor : 1.0};
        trial.seed = mix_seed(master_seed, point_index * 8 + quantity_index);
        const mc::EmpiricalRates rates = q.end_to_end
                                             ? mc::simulate_end_to_end(trial)
                                             : mc::simulate_snm_tier(trial);
        const double empirical = q.abnormal ? rates.p_d_hat : rates.p_f_hat;
        double claimed = q.analytic + analytic_bias;
        claimed = claimed < 0.0 ? 0.0 : (claimed > 1.0 ? 1.0 : claimed);
        const double se =
            std::sqrt(claimed * (1.0 - claimed) / static_cast<double>(trials));
        double z = 0.0;
        if (se > 0.0) {
          z = (empirical - claimed) / se;
        } else if (empirical != claimed) {
          z = std::numeric_limits<double>::infinity();
        }
        max_abs_z = std::max(max_abs_z, std::abs(z));

        std::ostringstream row;
        append_param_cells(row, ctx, pe);
        row << m << "," << q.name << "," << format_double(claimed) << ","
            << format_double(empirical) << "," << format_double(se) << ","
            << format_double(z);
        csv << row.str() << "\n";
        ++quantity_index;
      }
      ++point_index;
    }
  });

  ValidateReport report;
  report.csv = csv.str();
  report.max_abs_z = max_abs_z;
  report.within_tolerance = max_abs_z <= 4.0;
  return report;
}

}  // namespace nads::sweep

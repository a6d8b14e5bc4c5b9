#include "nads/nads_system.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nads::sys {
namespace {

void check_rate(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw std::domain_error(std::string("system_performance: ") + name +
                            " must lie in [0, 1]");
  }
}

}  // namespace

SystemPerformance system_performance(const PerSensorRates& per_sensor,
                                     const mcc::ErrorProbabilities& fusion,
                                     double sensor_count) {
  check_rate(per_sensor.misdetection, "per-sensor misdetection");
  check_rate(per_sensor.false_alarm, "per-sensor false alarm");
  if (!std::isfinite(sensor_count) || sensor_count < 1.0) {
    throw std::domain_error("system_performance: sensor_count must be >= 1");
  }
  const double q_m = fusion.misdetection.value();
  const double q_f = fusion.false_alarm.value();
  // P(no sensor alarms) under each hypothesis, with the complements formed
  // through expm1 so a count's worth of tiny per-sensor rates keeps its
  // digits instead of cancelling against 1
  const double log_all_miss = sensor_count * std::log(per_sensor.misdetection);
  const double log_all_quiet =
      sensor_count * std::log1p(-per_sensor.false_alarm);
  const double all_miss = std::exp(log_all_miss);
  const double all_quiet = std::exp(log_all_quiet);

  const double p_d = -std::expm1(log_all_miss) * (1.0 - q_m) + all_miss * q_f;
  const double p_f =
      -std::expm1(log_all_quiet) * (1.0 - q_m) + all_quiet * q_f;

  SystemPerformance out;
  out.p_d = Probability(p_d);
  out.p_f = Probability(p_f);
  out.p_m = Probability(1.0 - p_d);
  return out;
}

Probability error_floor(Probability misdetection_mcc,
                        Probability /*false_alarm_mcc*/) {
  return misdetection_mcc;
}

DesignOutcome optimize_concentration(const PerSensorRates& per_sensor,
                                     const mcc::MccParameters& mcc,
                                     const DesignConstraints& constraints) {
  if (!(constraints.detection_floor >= 0.0 &&
        constraints.detection_floor < 1.0)) {
    throw std::domain_error(
        "optimize_concentration: detection_floor must lie in [0, 1)");
  }
  if (!(constraints.false_alarm_ceiling > 0.0 &&
        constraints.false_alarm_ceiling <= 1.0)) {
    throw std::domain_error(
        "optimize_concentration: false_alarm_ceiling must lie in (0, 1]");
  }
  if (constraints.max_sensor_count < 1) {
    throw std::domain_error(
        "optimize_concentration: max_sensor_count must be >= 1");
  }
  const mcc::ErrorProbabilities fusion = mcc_error_probabilities(mcc);

  DesignOutcome out;
  int first_detecting = 0;   // smallest count meeting the detection floor
  int last_quiet = 0;        // largest count meeting the false-alarm ceiling
  for (int m = 1; m <= constraints.max_sensor_count; ++m) {
    const SystemPerformance perf =
        system_performance(per_sensor, fusion, static_cast<double>(m));
    const bool detects = perf.p_d.value() > constraints.detection_floor;
    const bool quiet = perf.p_f.value() < constraints.false_alarm_ceiling;
    if (detects && first_detecting == 0) {
      first_detecting = m;
      out.detection_attainable = true;
    }
    if (quiet) {
      last_quiet = m;
      out.false_alarm_attainable = true;
    }
    if (detects && quiet) {
      out.feasible = true;
      out.sensor_count = m;
      out.performance = perf;
      if (m > 1) {
        out.one_below = system_performance(per_sensor, fusion,
                                           static_cast<double>(m - 1));
      }
      return out;
    }
  }

  if (!out.detection_attainable && !out.false_alarm_attainable) {
    out.diagnosis = "neither constraint is met by any count up to " +
                    std::to_string(constraints.max_sensor_count);
  } else if (!out.detection_attainable) {
    out.diagnosis =
        "detection floor unmet by every count up to " +
        std::to_string(constraints.max_sensor_count) +
        "; false-alarm ceiling holds through " + std::to_string(last_quiet);
  } else {
    out.diagnosis = "false-alarm ceiling holds only through " +
                    std::to_string(last_quiet) +
                    ", detection floor is first met at " +
                    std::to_string(first_detecting);
  }
  return out;
}

}  // namespace nads::sys

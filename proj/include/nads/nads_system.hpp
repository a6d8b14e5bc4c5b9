#pragma once

#include <optional>
#include <string>

#include "nads/mcc_fusion.hpp"
#include "nads/probability.hpp"

namespace nads::sys {

/// End-to-end detection performance triple. p_m is the exact complement of
/// p_d by construction.
struct SystemPerformance {
  Probability p_d;
  Probability p_f;
  Probability p_m;
};

/// Per-sensor tier-1 rates feeding the fused cascade.
struct PerSensorRates {
  double misdetection = 0.0;
  double false_alarm = 0.0;
};

/// OR-fused performance of sensor_count independent sensors whose alarms
/// traverse the noisy fusion link: the sink misses only if every sensor
/// missed (then a fusion false alarm can still fire) or if at least one
/// alarm got through but the fusion stage missed. sensor_count >= 1 and
/// may be fractional for smooth curves.
[[nodiscard]] SystemPerformance system_performance(
    const PerSensorRates& per_sensor, const mcc::ErrorProbabilities& fusion,
    double sensor_count);

/// Large-count limit of the system misdetection: the fusion stage alone.
/// The second argument does not influence the limit; it is accepted so the
/// call reads as the performance pair it is the limit of.
[[nodiscard]] Probability error_floor(Probability misdetection_mcc,
                                      Probability false_alarm_mcc);

struct DesignConstraints {
  double detection_floor = 0.0;      // require p_d >  this
  double false_alarm_ceiling = 1.0;  // require p_f <  this
  int max_sensor_count = 1000;
};

struct DesignOutcome {
  bool feasible = false;
  int sensor_count = 0;  // smallest feasible count, when feasible
  SystemPerformance performance;              // at sensor_count
  std::optional<SystemPerformance> one_below; // at sensor_count - 1
  bool detection_attainable = false;          // floor met somewhere in range
  bool false_alarm_attainable = false;        // ceiling met somewhere in range
  std::string diagnosis;                      // empty when feasible
};

/// Smallest integer sensor count meeting both constraints. p_d and p_f both
/// rise with the count, so the false-alarm ceiling holds on a prefix of the
/// range and the detection floor on a suffix; the scan reports which side
/// failed when the two never overlap.
[[nodiscard]] DesignOutcome optimize_concentration(
    const PerSensorRates& per_sensor, const mcc::MccParameters& mcc,
    const DesignConstraints& constraints);

}  // namespace nads::sys

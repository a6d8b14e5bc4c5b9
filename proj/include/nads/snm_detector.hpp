#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nads/probability.hpp"

namespace nads::snm {

/// Tier-1 sensor detector: a calibrated acceptance window around the
/// healthy rate, plus an optional likelihood-ratio threshold for the exact
/// GLRT decision path.
struct DetectorSpec {
  double healthy_rate = 0.0;        // baseline feature value under h0
  int observation_count = 0;        // observations per decision
  double false_alarm_budget = 0.0;  // bound on P(alarm | h0), in (0, 1)
  double window_half_width = 0.0;   // solved on the {j / n} grid
  std::optional<double> glrt_threshold;
};

/// Abnormality strength: the observed rate is rate_factor * healthy_rate;
/// rate_factor = 1 means healthy.
struct AbnormalityModel {
  double rate_factor = 1.0;
};

using ObservationBatch = std::vector<std::int64_t>;

/// Integer acceptance region for the summed count: h0 iff
/// lower <= sum <= upper. lower_cdf_index() is the index the closed forms
/// feed to the Poisson cdf; it is -1 when the window starts at zero, which
/// makes that cdf term an empty sum.
struct CountWindow {
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  [[nodiscard]] std::int64_t lower_cdf_index() const { return lower - 1; }
};

/// Acceptance window implied by a half-width tau:
/// [max{floor(n (rate - tau)), 0}, floor(n (rate + tau))]. Products within
/// 1e-9 relative of an integer are treated as that integer, so grid
/// half-widths j/n reproduce their exact windows.
[[nodiscard]] CountWindow count_window(double healthy_rate, int n, double tau);

/// Smallest half-width on the grid {j / n : j = 0, 1, ...} whose window
/// keeps at least 1 - budget of the healthy Poisson mass.
[[nodiscard]] double solve_window_half_width(double healthy_rate, int n,
                                             double false_alarm_budget);

/// Solves the window and fills a spec (no GLRT threshold).
[[nodiscard]] DetectorSpec make_detector(double healthy_rate, int n,
                                         double false_alarm_budget);

/// Maximum-likelihood estimate of the observation rate: the sample mean.
[[nodiscard]] double mle_rate(const ObservationBatch& batch);

/// Exact generalized-likelihood-ratio decision. Requires glrt_threshold;
/// the zero-mean batch contributes 0 for the x ln x term; ties go to h0.
[[nodiscard]] Hypothesis decide_glrt(const ObservationBatch& batch,
                                     const DetectorSpec& spec);

/// Window decision: h0 iff the summed count lies inside count_window.
[[nodiscard]] Hypothesis decide_window(const ObservationBatch& batch,
                                       const DetectorSpec& spec);

/// P(alarm | abnormality of the given strength): exact Poisson mass of the
/// rejection region at the shifted rate.
[[nodiscard]] Probability detection_probability(const DetectorSpec& spec,
                                                const AbnormalityModel& model);

/// Complement of detection_probability.
[[nodiscard]] Probability misdetection_probability(
    const DetectorSpec& spec, const AbnormalityModel& model);

/// Exact P(alarm | h0) of the calibrated window: at most the budget, and
/// usually below it because counts are discrete.
[[nodiscard]] Probability achieved_false_alarm(const DetectorSpec& spec);

}  // namespace nads::snm

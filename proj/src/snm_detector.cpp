#include "nads/snm_detector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "nads/stat_math.hpp"

namespace nads::snm {
namespace {

void require_rate(double rate, const char* who) {
  if (!std::isfinite(rate) || rate <= 0.0) {
    throw std::domain_error(std::string(who) +
                            ": rate must be finite and positive");
  }
}

void require_count(int n, const char* who) {
  if (n < 1) {
    throw std::domain_error(std::string(who) +
                            ": observation count must be >= 1");
  }
}

void check_spec(const DetectorSpec& spec, const char* who) {
  require_rate(spec.healthy_rate, who);
  require_count(spec.observation_count, who);
  if (!std::isfinite(spec.window_half_width) || spec.window_half_width < 0.0) {
    throw std::domain_error(std::string(who) +
                            ": window_half_width must be >= 0");
  }
}

// floor(x), treating values within 1e-9 relative of an integer as that
// integer. Window boundaries are products n * (rate +- j/n); the snap keeps
// them exact where the underlying real value is a whole number.
std::int64_t snapped_floor(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(nearest))) {
    return static_cast<std::int64_t>(nearest);
  }
  return static_cast<std::int64_t>(std::floor(x));
}

std::int64_t checked_sum(const ObservationBatch& batch,
                         const DetectorSpec& spec, const char* who) {
  if (static_cast<int>(batch.size()) != spec.observation_count) {
    throw std::domain_error(std::string(who) + ": batch holds " +
                            std::to_string(batch.size()) + " observations, " +
                            "spec expects " +
                            std::to_string(spec.observation_count));
  }
  std::int64_t sum = 0;
  for (const std::int64_t y : batch) {
    if (y < 0) {
      throw std::domain_error(std::string(who) + ": negative count");
    }
    sum += y;
  }
  return sum;
}

// Healthy-hypothesis mass kept by the window.
double window_mass(const CountWindow& w, double summed_rate) {
  return stat::poisson_cdf(w.upper, summed_rate).value() -
         stat::poisson_cdf(w.lower_cdf_index(), summed_rate).value();
}

}  // namespace

CountWindow count_window(double healthy_rate, int n, double tau) {
  require_rate(healthy_rate, "count_window");
  require_count(n, "count_window");
  if (!std::isfinite(tau) || tau < 0.0) {
    throw std::domain_error("count_window: tau must be >= 0");
  }
  const double center = static_cast<double>(n) * healthy_rate;
  const double spread = static_cast<double>(n) * tau;
  CountWindow w;
  w.upper = snapped_floor(center + spread);
  w.lower = std::max<std::int64_t>(snapped_floor(center - spread), 0);
  return w;
}

double solve_window_half_width(double healthy_rate, int n,
                               double false_alarm_budget) {
  require_rate(healthy_rate, "solve_window_half_width");
  require_count(n, "solve_window_half_width");
  if (!(false_alarm_budget > 0.0 && false_alarm_budget < 1.0)) {
    throw std::domain_error(
        "solve_window_half_width: false_alarm_budget must lie in (0, 1)");
  }
  const double summed_rate = static_cast<double>(n) * healthy_rate;
  const double target = 1.0 - false_alarm_budget;
  // Past this point the window holds everything double precision can see
  // of the distribution; if the target is still unmet it never will be.
  const double exhausted =
      summed_rate + std::max(60.0 * std::sqrt(summed_rate), 200.0);
  for (std::int64_t j = 0;; ++j) {
    const double tau = static_cast<double>(j) / static_cast<double>(n);
    const CountWindow w = count_window(healthy_rate, n, tau);
    if (window_mass(w, summed_rate) >= target) {
      return tau;
    }
    if (w.lower == 0 && static_cast<double>(w.upper) > exhausted) {
      throw std::domain_error(
          "solve_window_half_width: budget unattainable in double precision");
    }
  }
}

DetectorSpec make_detector(double healthy_rate, int n,
                           double false_alarm_budget) {
  DetectorSpec spec;
  spec.healthy_rate = healthy_rate;
  spec.observation_count = n;
  spec.false_alarm_budget = false_alarm_budget;
  spec.window_half_width =
      solve_window_half_width(healthy_rate, n, false_alarm_budget);
  return spec;
}

double mle_rate(const ObservationBatch& batch) {
  if (batch.empty()) {
    throw std::domain_error("mle_rate: empty batch");
  }
  std::int64_t sum = 0;
  for (const std::int64_t y : batch) {
    if (y < 0) {
      throw std::domain_error("mle_rate: negative count");
    }
    sum += y;
  }
  return static_cast<double>(sum) / static_cast<double>(batch.size());
}

Hypothesis decide_glrt(const ObservationBatch& batch,
                       const DetectorSpec& spec) {
  check_spec(spec, "decide_glrt");
  if (!spec.glrt_threshold.has_value()) {
    throw std::domain_error("decide_glrt: spec carries no glrt_threshold");
  }
  const double tau = *spec.glrt_threshold;
  if (!std::isfinite(tau) || tau <= 0.0) {
    throw std::domain_error("decide_glrt: glrt_threshold must be positive");
  }
  const std::int64_t sum = checked_sum(batch, spec, "decide_glrt");
  const double estimate =
      static_cast<double>(sum) / static_cast<double>(spec.observation_count);
  const double lhs =
      estimate == 0.0
          ? 0.0
          : estimate * (std::log(estimate / spec.healthy_rate) - 1.0);
  const double rhs = std::log(tau) / static_cast<double>(spec.observation_count) -
                     spec.healthy_rate;
  return lhs > rhs ? Hypothesis::h1 : Hypothesis::h0;
}

Hypothesis decide_window(const ObservationBatch& batch,
                         const DetectorSpec& spec) {
  check_spec(spec, "decide_window");
  const std::int64_t sum = checked_sum(batch, spec, "decide_window");
  const CountWindow w = count_window(
      spec.healthy_rate, spec.observation_count, spec.window_half_width);
  return (sum >= w.lower && sum <= w.upper) ? Hypothesis::h0 : Hypothesis::h1;
}

Probability detection_probability(const DetectorSpec& spec,
                                  const AbnormalityModel& model) {
  check_spec(spec, "detection_probability");
  if (!std::isfinite(model.rate_factor) || model.rate_factor <= 0.0) {
    throw std::domain_error(
        "detection_probability: rate_factor must be positive");
  }
  const CountWindow w = count_window(
      spec.healthy_rate, spec.observation_count, spec.window_half_width);
  const double shifted_rate = static_cast<double>(spec.observation_count) *
                              model.rate_factor * spec.healthy_rate;
  return Probability::clamped(1.0 - window_mass(w, shifted_rate));
}

Probability misdetection_probability(const DetectorSpec& spec,
                                     const AbnormalityModel& model) {
  return complement(detection_probability(spec, model));
}

Probability achieved_false_alarm(const DetectorSpec& spec) {
  return detection_probability(spec, AbnormalityModel{1.0});
}

}  // namespace nads::snm

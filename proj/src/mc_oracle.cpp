#include "nads/mc_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace nads::mc {
namespace {

void check_config(const TrialConfig& config, const char* who) {
  if (config.trials < 1) {
    throw std::domain_error(std::string(who) + ": trials must be >= 1");
  }
  if (!std::isfinite(config.scenario.rate_factor) ||
      config.scenario.rate_factor <= 0.0) {
    throw std::domain_error(std::string(who) +
                            ": rate_factor must be positive");
  }
}

double observed_rate_factor(const Scenario& s) {
  return s.abnormal ? s.rate_factor : 1.0;
}

EmpiricalRates tally(const Scenario& s, std::int64_t alarms,
                     std::int64_t trials) {
  EmpiricalRates out;
  out.trials = trials;
  const double rate =
      static_cast<double>(alarms) / static_cast<double>(trials);
  (s.abnormal ? out.p_d_hat : out.p_f_hat) = rate;
  out.std_err =
      std::sqrt(rate * (1.0 - rate) / static_cast<double>(trials));
  return out;
}

Hypothesis decide(const snm::ObservationBatch& batch,
                  const snm::DetectorSpec& spec) {
  return spec.glrt_threshold.has_value() ? snm::decide_glrt(batch, spec)
                                         : snm::decide_window(batch, spec);
}

}  // namespace

std::mt19937_64 trial_stream(std::uint64_t seed, std::int64_t trial) {
  // splitmix64 over the golden-ratio sequence starting at `seed`
  std::uint64_t z =
      seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(trial) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

EmpiricalRates simulate_snm_tier(const TrialConfig& config) {
  check_config(config, "simulate_snm_tier");
  const snm::DetectorSpec& spec = config.detector;
  const double rate =
      spec.healthy_rate * observed_rate_factor(config.scenario);
  const int n = spec.observation_count;

  std::int64_t alarms = 0;
  snm::ObservationBatch batch(static_cast<std::size_t>(n));
  for (std::int64_t t = 0; t < config.trials; ++t) {
    std::mt19937_64 rng = trial_stream(config.seed, t);
    std::poisson_distribution<std::int64_t> draw(rate);
    for (int i = 0; i < n; ++i) {
      batch[static_cast<std::size_t>(i)] = draw(rng);
    }
    if (decide(batch, spec) == Hypothesis::h1) {
      ++alarms;
    }
  }
  return tally(config.scenario, alarms, config.trials);
}

EmpiricalRates simulate_end_to_end(const TrialConfig& config) {
  check_config(config, "simulate_end_to_end");
  config.mcc.validate();
  const snm::DetectorSpec& spec = config.detector;
  const int sensors = config.mcc.sensor_count;
  const double amplitude = config.mcc.message_amplitude;

  // Exact tier-1 alarm probability for the Bernoulli fidelity path.
  const double alarm_probability =
      config.scenario.abnormal
          ? snm::detection_probability(
                spec, snm::AbnormalityModel{config.scenario.rate_factor})
          : snm::achieved_false_alarm(spec);
  const double rate =
      spec.healthy_rate * observed_rate_factor(config.scenario);
  const int n = spec.observation_count;

  std::int64_t alarms = 0;
  snm::ObservationBatch batch(static_cast<std::size_t>(n));
  for (std::int64_t t = 0; t < config.trials; ++t) {
    std::mt19937_64 rng = trial_stream(config.seed, t);
    int emitting = 0;
    if (config.fidelity == SensorFidelity::analytic_rate) {
      std::bernoulli_distribution alarm(alarm_probability);
      for (int s = 0; s < sensors; ++s) {
        emitting += alarm(rng) ? 1 : 0;
      }
    } else {
      std::poisson_distribution<std::int64_t> draw(rate);
      for (int s = 0; s < sensors; ++s) {
        for (int i = 0; i < n; ++i) {
          batch[static_cast<std::size_t>(i)] = draw(rng);
        }
        emitting += decide(batch, spec) == Hypothesis::h1 ? 1 : 0;
      }
    }
    std::normal_distribution<double> noise(0.0, config.mcc.noise_sigma);
    const double fused =
        static_cast<double>(emitting) * amplitude + noise(rng);
    if (dgn_decide(fused, config.mcc) == Hypothesis::h1) {
      ++alarms;
    }
  }
  return tally(config.scenario, alarms, config.trials);
}

}  // namespace nads::mc

#pragma once

#include <cstdint>
#include <random>

#include "nads/mcc_fusion.hpp"
#include "nads/snm_detector.hpp"

namespace nads::mc {

/// Ground truth a batch of trials is generated under.
struct Scenario {
  bool abnormal = false;
  double rate_factor = 1.0;  // applied only when abnormal
};

/// analytic_rate: each sensor alarms as a Bernoulli draw at its exact
/// tier-1 alarm probability. poisson_counts: each sensor draws its full
/// observation batch and runs the actual decision rule.
enum class SensorFidelity { analytic_rate, poisson_counts };

struct TrialConfig {
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  Scenario scenario;
  snm::DetectorSpec detector;
  mcc::MccParameters mcc;
  SensorFidelity fidelity = SensorFidelity::analytic_rate;
};

/// Empirical alarm rates. Exactly one of p_d_hat / p_f_hat is populated,
/// matching the scenario; std_err is the binomial standard error at the
/// observed rate.
struct EmpiricalRates {
  double p_d_hat = 0.0;
  double p_f_hat = 0.0;
  std::int64_t trials = 0;
  double std_err = 0.0;
};

/// Independent, replayable stream for one trial: a splitmix64 hop from
/// (seed, index) seeds the engine, so results never depend on trial order.
[[nodiscard]] std::mt19937_64 trial_stream(std::uint64_t seed,
                                           std::int64_t trial);

/// Simulate the tier-1 detector alone: per trial one batch of Poisson
/// counts and one decision (the window rule, or the GLRT when the spec
/// carries a threshold).
[[nodiscard]] EmpiricalRates simulate_snm_tier(const TrialConfig& config);

/// Simulate the full cascade: sensor alarms, amplitude emissions, additive
/// Gaussian noise on the fused signal, and the half-amplitude sink rule.
[[nodiscard]] EmpiricalRates simulate_end_to_end(const TrialConfig& config);

}  // namespace nads::mc

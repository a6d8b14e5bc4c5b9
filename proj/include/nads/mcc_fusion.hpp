#pragma once

#include <Eigen/Dense>
#include <random>

#include "nads/probability.hpp"

namespace nads::mcc {

/// The sensor-to-sink link: alarming sensors emit an amplitude-G message,
/// the sink sees the superposition plus white Gaussian noise.
struct MccParameters {
  double message_amplitude = 0.0;  // per-sensor emission amplitude
  double noise_sigma = 0.0;        // noise on the fused signal
  int sensor_count = 0;

  /// Throws std::domain_error on invalid fields.
  void validate() const;
};

/// Per-sensor emission law under each hypothesis.
struct MsmProbabilities {
  Probability emit_given_abnormal;
  Probability emit_given_healthy;
};

struct ErrorProbabilities {
  Probability misdetection;
  Probability false_alarm;
};

/// Sink threshold decision: alarm iff the fused signal reaches half an
/// amplitude. The boundary itself alarms.
[[nodiscard]] Hypothesis dgn_decide(double fused_signal,
                                    const MccParameters& p);

/// Gaussian tail error probabilities of the half-amplitude threshold; both
/// equal Q(amplitude / (2 sigma)).
[[nodiscard]] ErrorProbabilities mcc_error_probabilities(
    const MccParameters& p);

/// Equal-prior average of the two error probabilities.
[[nodiscard]] double average_error_probability(const ErrorProbabilities& e);

/// Exact law of the fused signal: a binomial mixture of Gaussians with
/// means {0, G, ..., M G} and common sigma. Exposed for the Monte Carlo
/// oracle and for exact-fusion studies.
class FusionSignalDistribution {
 public:
  FusionSignalDistribution(Probability emit_probability,
                           const MccParameters& p);

  [[nodiscard]] double cdf(double u) const;
  [[nodiscard]] double pdf(double u) const;
  [[nodiscard]] double sample(std::mt19937_64& rng) const;

  [[nodiscard]] const Eigen::VectorXd& weights() const { return weights_; }
  [[nodiscard]] const Eigen::VectorXd& means() const { return means_; }
  [[nodiscard]] double sigma() const { return sigma_; }

 private:
  Eigen::VectorXd weights_;
  Eigen::VectorXd means_;
  double sigma_ = 0.0;
  double emit_probability_ = 0.0;
  int sensor_count_ = 0;
};

/// The fused-signal law under the given hypothesis.
[[nodiscard]] FusionSignalDistribution fusion_signal_distribution(
    const MsmProbabilities& msm, const MccParameters& p, Hypothesis h);

}  // namespace nads::mcc

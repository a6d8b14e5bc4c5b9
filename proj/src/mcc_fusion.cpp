#include "nads/mcc_fusion.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "nads/stat_math.hpp"

namespace nads::mcc {

void MccParameters::validate() const {
  if (!std::isfinite(message_amplitude) || message_amplitude <= 0.0) {
    throw std::domain_error(
        "MccParameters: message_amplitude must be finite and positive");
  }
  if (!std::isfinite(noise_sigma) || noise_sigma <= 0.0) {
    throw std::domain_error(
        "MccParameters: noise_sigma must be finite and positive");
  }
  if (sensor_count < 1) {
    throw std::domain_error("MccParameters: sensor_count must be >= 1");
  }
}

Hypothesis dgn_decide(double fused_signal, const MccParameters& p) {
  p.validate();
  if (!std::isfinite(fused_signal)) {
    throw std::domain_error("dgn_decide: non-finite fused signal");
  }
  return fused_signal >= p.message_amplitude / 2.0 ? Hypothesis::h1
                                                   : Hypothesis::h0;
}

ErrorProbabilities mcc_error_probabilities(const MccParameters& p) {
  p.validate();
  const Probability q =
      stat::gaussian_q(p.message_amplitude / (2.0 * p.noise_sigma));
  return ErrorProbabilities{q, q};
}

double average_error_probability(const ErrorProbabilities& e) {
  return 0.5 * (e.misdetection.value() + e.false_alarm.value());
}

FusionSignalDistribution::FusionSignalDistribution(Probability emit_probability,
                                                   const MccParameters& p)
    : sigma_(p.noise_sigma),
      emit_probability_(emit_probability.value()),
      sensor_count_(p.sensor_count) {
  p.validate();
  const int m = p.sensor_count;
  weights_.resize(m + 1);
  means_.resize(m + 1);
  const double prob = emit_probability_;
  for (int j = 0; j <= m; ++j) {
    means_[j] = static_cast<double>(j) * p.message_amplitude;
    if (prob == 0.0) {
      weights_[j] = (j == 0) ? 1.0 : 0.0;
    } else if (prob == 1.0) {
      weights_[j] = (j == m) ? 1.0 : 0.0;
    } else {
      const double log_choose = stat::log_factorial(m) -
                                stat::log_factorial(j) -
                                stat::log_factorial(m - j);
      weights_[j] = std::exp(log_choose + j * std::log(prob) +
                             (m - j) * std::log1p(-prob));
    }
  }
}

double FusionSignalDistribution::cdf(double u) const {
  if (!std::isfinite(u)) {
    throw std::domain_error("FusionSignalDistribution::cdf: non-finite input");
  }
  double total = 0.0;
  for (int j = 0; j < weights_.size(); ++j) {
    // P(N(mean, sigma) <= u) = Q((mean - u) / sigma)
    total += weights_[j] * stat::gaussian_q((means_[j] - u) / sigma_).value();
  }
  return total < 1.0 ? total : 1.0;
}

double FusionSignalDistribution::pdf(double u) const {
  if (!std::isfinite(u)) {
    throw std::domain_error("FusionSignalDistribution::pdf: non-finite input");
  }
  const double norm = 1.0 / (sigma_ * std::sqrt(2.0 * std::numbers::pi));
  double total = 0.0;
  for (int j = 0; j < weights_.size(); ++j) {
    const double z = (u - means_[j]) / sigma_;
    total += weights_[j] * norm * std::exp(-0.5 * z * z);
  }
  return total;
}

double FusionSignalDistribution::sample(std::mt19937_64& rng) const {
  std::binomial_distribution<int> emitters(sensor_count_, emit_probability_);
  std::normal_distribution<double> noise(0.0, sigma_);
  const int j = emitters(rng);
  return means_[j] + noise(rng);
}

FusionSignalDistribution fusion_signal_distribution(const MsmProbabilities& msm,
                                                    const MccParameters& p,
                                                    Hypothesis h) {
  const Probability emit = (h == Hypothesis::h1) ? msm.emit_given_abnormal
                                                 : msm.emit_given_healthy;
  return FusionSignalDistribution(emit, p);
}

}  // namespace nads::mcc

#include "nads/ncc_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nads::ncc {
namespace {

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) {
    throw std::domain_error(std::string("NccParameters: ") + name +
                            " must be finite and positive, got " +
                            std::to_string(v));
  }
}

// Combined rate at which the bound count approaches its plateau.
double approach_rate(const NccParameters& p) {
  return p.release_rate + p.binding_rate * p.concentration;
}

// Probability that a pulse is received in the current interval, given the
// transition matrix of the current state, under P(pulse) = pa.
double received_pulse_rate(const Eigen::Matrix2d& m, double pa) {
  return m(kPulse, kPulse) * pa + m(kSilence, kPulse) * (1.0 - pa);
}

// Clamp a conditional expected count / threshold quotient into a row of a
// stochastic matrix, then renormalize. A zero row degenerates to certain
// silence.
Eigen::Matrix2d stochastic_rows(double expected_pulse_count,
                                double expected_silence_count,
                                double threshold) {
  Eigen::Matrix2d m;
  m(kPulse, kPulse) = expected_pulse_count / threshold;
  m(kSilence, kPulse) = expected_silence_count / threshold;
  m(kPulse, kSilence) = 1.0 - m(kPulse, kPulse);
  m(kSilence, kSilence) = 1.0 - m(kSilence, kPulse);
  m = m.cwiseMax(0.0).cwiseMin(1.0);
  for (int row = 0; row < 2; ++row) {
    const double sum = m.row(row).sum();
    if (sum > 0.0) {
      m.row(row) /= sum;
    } else {
      m(row, kPulse) = 0.0;
      m(row, kSilence) = 1.0;
    }
  }
  return m;
}

}  // namespace

void NccParameters::validate() const {
  require_positive(temperature, "temperature");
  require_positive(distance, "distance");
  require_positive(receptor_count, "receptor_count");
  require_positive(pulse_duration, "pulse_duration");
  require_positive(concentration, "concentration");
  require_positive(binding_rate, "binding_rate");
  require_positive(release_rate, "release_rate");
  require_positive(boltzmann, "boltzmann");
  require_positive(threshold, "threshold");
  require_positive(sample_volume, "sample_volume");
  if (!(prob_transmit_pulse >= 0.0 && prob_transmit_pulse <= 1.0)) {
    throw std::domain_error(
        "NccParameters: prob_transmit_pulse must lie in [0, 1], got " +
        std::to_string(prob_transmit_pulse));
  }
}

double bound_receptor_concentration(const NccParameters& p, double t) {
  p.validate();
  if (!std::isfinite(t) || t < 0.0) {
    throw std::domain_error(
        "bound_receptor_concentration: t must be finite and >= 0");
  }
  const double rate = approach_rate(p);
  const double plateau =
      p.binding_rate * p.concentration * p.receptor_count / rate;
  return plateau * (-std::expm1(-t * rate));
}

double decayed_concentration(double c_at_t0, const NccParameters& p, double t,
                             double t0) {
  p.validate();
  if (!std::isfinite(c_at_t0) || c_at_t0 < 0.0) {
    throw std::domain_error("decayed_concentration: invalid initial count");
  }
  if (!std::isfinite(t) || !std::isfinite(t0) || t < t0) {
    throw std::domain_error("decayed_concentration: requires t >= t0");
  }
  return c_at_t0 * std::exp(-p.release_rate * (t - t0));
}

PulseResponse pulse_response(const NccParameters& p) {
  p.validate();
  const double rate = approach_rate(p);
  const double plateau =
      p.binding_rate * p.concentration * p.receptor_count / rate;
  PulseResponse r;
  r.steady_state_concentration = plateau;
  // integral of plateau * (1 - exp(-rate t)) over one interval, written as
  // plateau * t_H * f(u) with u = rate * t_H and f(u) = 1 - (1 - e^-u)/u.
  // The direct difference cancels badly for small u, so that regime takes
  // the series of f instead.
  const double u = rate * p.pulse_duration;
  const double fraction =
      u < 1e-3
          ? u * (0.5 + u * (-1.0 / 6.0 + u * (1.0 / 24.0 - u / 120.0)))
          : 1.0 - (-std::expm1(-u)) / u;
  r.received_during_pulse = plateau * p.pulse_duration * fraction;
  // integral of the release decay applied to that count
  r.carryover_after_pulse =
      r.received_during_pulse *
      (-std::expm1(-p.release_rate * p.pulse_duration)) / p.release_rate;
  r.received_during_silence = 0.0;
  r.carryover_after_silence = 0.0;
  return r;
}

TransitionMatrices transition_matrices(const NccParameters& p) {
  const PulseResponse r = pulse_response(p);
  TransitionMatrices tm;
  // Conditional expected counts: a pulse contributes its per-interval
  // count, the previous interval contributes its carryover.
  tm.after_pulse = stochastic_rows(
      r.received_during_pulse + r.carryover_after_pulse,
      r.received_during_silence + r.carryover_after_pulse, p.threshold);
  tm.after_silence = stochastic_rows(
      r.received_during_pulse + r.carryover_after_silence,
      r.received_during_silence + r.carryover_after_silence, p.threshold);
  return tm;
}

ReceptionProbabilities steady_state_reception(const TransitionMatrices& tm,
                                              Probability prob_transmit_pulse) {
  const double pa = prob_transmit_pulse.value();
  const double pulse_after_pulse = received_pulse_rate(tm.after_pulse, pa);
  const double pulse_after_silence = received_pulse_rate(tm.after_silence, pa);
  const double pulse_den = 1.0 - pulse_after_pulse + pulse_after_silence;
  if (pulse_den == 0.0) {
    throw SingularChannelError(
        "steady_state_reception: pulse fixed point has zero denominator");
  }
  const double silence_after_pulse = 1.0 - pulse_after_pulse;
  const double silence_after_silence = 1.0 - pulse_after_silence;
  const double silence_den = 1.0 - silence_after_pulse + silence_after_silence;
  if (silence_den == 0.0) {
    throw SingularChannelError(
        "steady_state_reception: silence fixed point has zero denominator");
  }
  ReceptionProbabilities out;
  out.pulse = Probability(pulse_after_silence / pulse_den);
  out.silence = Probability(silence_after_silence / silence_den);
  return out;
}

double healthy_bit_rate(const NccParameters& p) {
  const PulseResponse r = pulse_response(p);
  const TransitionMatrices tm = transition_matrices(p);
  const ReceptionProbabilities stationary =
      steady_state_reception(tm, Probability(p.prob_transmit_pulse));

  const double molecules_per_time = p.concentration * p.sample_volume;
  const auto capacity = [&](double carryover) {
    const double margin = p.threshold - carryover;
    if (margin <= 0.0) {
      return p.receptor_count;  // carryover alone meets the threshold
    }
    return std::min(molecules_per_time / margin, p.receptor_count);
  };

  const double pa = p.prob_transmit_pulse;
  const double pulse_after_pulse = received_pulse_rate(tm.after_pulse, pa);
  const double pulse_after_silence = received_pulse_rate(tm.after_silence, pa);

  return capacity(r.carryover_after_pulse) * stationary.pulse.value() *
             pulse_after_pulse +
         capacity(r.carryover_after_silence) * stationary.silence.value() *
             pulse_after_silence;
}

}  // namespace nads::ncc

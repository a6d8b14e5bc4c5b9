#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "nads/probability.hpp"

namespace nads::ncc {

/// Raised when the stationary fixed point of the received-symbol chain
/// degenerates (zero denominator): the channel has no reachable mix.
class SingularChannelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Physical description of one molecular broadcast channel: a transmitter
/// releasing ligand pulses of duration pulse_duration at concentration
/// `concentration`, SNM receptors binding/releasing at the given rates, and
/// a reception threshold of `threshold` bound receptors deciding that a
/// pulse symbol arrived.
///
/// temperature, distance and boltzmann are carried for interface
/// completeness; the closed forms consume the kinetic rates directly.
struct NccParameters {
  double temperature = 310.0;
  double distance = 1e-6;
  double receptor_count = 0.0;      // receptors per sensor
  double pulse_duration = 0.0;      // symbol interval length
  double concentration = 0.0;       // released-ligand concentration
  double binding_rate = 0.0;
  double release_rate = 0.0;
  double boltzmann = 1.380649e-23;
  double threshold = 0.0;           // bound count that signals a pulse
  double prob_transmit_pulse = 0.0; // source law of the binary symbol stream
  double sample_volume = 0.0;       // tissue volume the sensors monitor

  /// Throws std::domain_error when a consumed field is outside its domain.
  void validate() const;

  friend bool operator==(const NccParameters&, const NccParameters&) = default;
};

/// Index convention for the 2x2 channel matrices.
inline constexpr int kPulse = 0;
inline constexpr int kSilence = 1;

/// Expected per-interval bound-receptor counts induced by one transmitted
/// symbol: time averages of the binding build-up during a pulse and of the
/// release decay that leaks into the following interval.
struct PulseResponse {
  double received_during_pulse = 0.0;
  double carryover_after_pulse = 0.0;
  double received_during_silence = 0.0;  // identically zero: ideal silence
  double carryover_after_silence = 0.0;  // identically zero
  double steady_state_concentration = 0.0;
};

/// Conditional transition matrices of the induced binary channel.
/// Row: transmitted symbol; column: received symbol (kPulse/kSilence).
/// One matrix per previously received symbol, because molecules still
/// bound from the previous interval bias the next threshold decision.
struct TransitionMatrices {
  Eigen::Matrix2d after_pulse;
  Eigen::Matrix2d after_silence;
};

/// Stationary reception law of the received-symbol chain. The two
/// components come from their own closed forms and are reported as-is,
/// not forced to sum to one.
struct ReceptionProbabilities {
  Probability pulse;
  Probability silence;
};

/// Expected bound-receptor count at time t >= 0 into a pulse, rising
/// exponentially toward its plateau.
[[nodiscard]] double bound_receptor_concentration(const NccParameters& p,
                                                  double t);

/// Release-only decay of a bound count c_at_t0 after the pulse ends at t0;
/// valid for t >= t0.
[[nodiscard]] double decayed_concentration(double c_at_t0,
                                           const NccParameters& p, double t,
                                           double t0);

/// Closed-form per-interval expected counts (exact time integrals of the
/// two curves above).
[[nodiscard]] PulseResponse pulse_response(const NccParameters& p);

/// Transition matrices from the pulse response: conditional expected counts
/// scaled by the reception threshold, entrywise clamped to [0, 1], then
/// row-renormalized so each row is a distribution (a zero row renormalizes
/// to [0, 1], i.e. certain silence).
[[nodiscard]] TransitionMatrices transition_matrices(const NccParameters& p);

/// Stationary law of the received-symbol chain under i.i.d. transmission
/// with P(pulse) = prob_transmit_pulse. Throws SingularChannelError when a
/// fixed-point denominator vanishes.
[[nodiscard]] ReceptionProbabilities steady_state_reception(
    const TransitionMatrices& tm, Probability prob_transmit_pulse);

/// Average number of pulse symbols received per unit time in the healthy
/// baseline: the feature the sensor tier thresholds against. Per-symbol
/// reception capacity is min(concentration * volume / (threshold -
/// carryover), receptor_count), where the quotient counts as unbounded
/// when the carryover already meets the threshold.
[[nodiscard]] double healthy_bit_rate(const NccParameters& p);

}  // namespace nads::ncc

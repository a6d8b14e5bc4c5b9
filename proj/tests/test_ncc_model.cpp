#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>

#include "nads/ncc_model.hpp"

using namespace nads;

namespace {

ncc::NccParameters reference_channel() {
  ncc::NccParameters p;
  p.receptor_count = 1.0;
  p.pulse_duration = 1.0;
  p.concentration = 1.0;
  p.binding_rate = 1.0;
  p.release_rate = 1.0;
  p.threshold = 1.0;
  p.prob_transmit_pulse = 0.5;
  p.sample_volume = 1000.0;
  return p;
}

void check_relative(double got, double want, double tol) {
  CAPTURE(got);
  CAPTURE(want);
  CHECK(std::abs(got - want) <= tol * std::abs(want));
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm,
                        double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double eps_rel) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double eps = std::max(eps_rel * std::abs(whole), 1e-300);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, eps, 52);
}

// Integrate a curve with an initial boundary layer of width ~1/rate by
// splitting at the layer edge, so the adaptive rule cannot skip over it.
template <typename F>
double integrate_layered(const F& f, double t_end, double rate,
                         double eps_rel) {
  const double split = std::min(t_end, 8.0 / rate);
  if (split >= t_end) {
    return integrate(f, 0.0, t_end, eps_rel);
  }
  return integrate(f, 0.0, split, eps_rel) +
         integrate(f, split, t_end, eps_rel);
}

// The per-interval expected counts, recomputed by quadrature of the two
// underlying curves.
double quadrature_received(const ncc::NccParameters& p) {
  const auto curve = [&](double t) {
    return ncc::bound_receptor_concentration(p, t);
  };
  const double rate = p.release_rate + p.binding_rate * p.concentration;
  return integrate_layered(curve, p.pulse_duration, rate, 1e-13);
}

double quadrature_carryover(const ncc::NccParameters& p, double received) {
  const auto decay = [&](double t) {
    return ncc::decayed_concentration(received, p, t, 0.0);
  };
  return integrate_layered(decay, p.pulse_duration, p.release_rate, 1e-13);
}

// Received-pulse probability of one matrix under P(pulse) = pa.
double pulse_rate(const Eigen::Matrix2d& m, double pa) {
  return m(ncc::kPulse, ncc::kPulse) * pa +
         m(ncc::kSilence, ncc::kPulse) * (1.0 - pa);
}

/// Fully expanded form of the healthy rate: previous received symbol, then
// transmitted symbol, eight terms in all. An independent regrouping of
// what healthy_bit_rate computes.
double expanded_healthy_rate(const ncc::NccParameters& p) {
  const ncc::PulseResponse r = ncc::pulse_response(p);
  const ncc::TransitionMatrices tm = ncc::transition_matrices(p);
  const ncc::ReceptionProbabilities st =
      ncc::steady_state_reception(tm, Probability(p.prob_transmit_pulse));
  const auto capacity = [&](double carryover) {
    const double margin = p.threshold - carryover;
    if (margin <= 0.0) {
      return p.receptor_count;
    }
    return std::min(p.concentration * p.sample_volume / margin,
                    p.receptor_count);
  };
  const double pa = p.prob_transmit_pulse;
  double total = 0.0;
  const struct {
    double weight;
    double carry;
    const Eigen::Matrix2d* matrix;
  } previous[2] = {
      {st.pulse.value(), r.carryover_after_pulse, &tm.after_pulse},
      {st.silence.value(), r.carryover_after_silence, &tm.after_silence},
  };
  for (const auto& prev : previous) {
    for (const int tx : {ncc::kPulse, ncc::kSilence}) {
      const double tx_weight = tx == ncc::kPulse ? pa : 1.0 - pa;
      total += capacity(prev.carry) * prev.weight * tx_weight *
               (*prev.matrix)(tx, ncc::kPulse);
    }
  }
  return total;
}

ncc::NccParameters random_channel(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> exponent(-3.0, 3.0);
  std::uniform_real_distribution<double> duration_exponent(-3.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ncc::NccParameters p;
  p.binding_rate = std::pow(10.0, exponent(rng));
  p.release_rate = std::pow(10.0, exponent(rng));
  p.concentration = std::pow(10.0, exponent(rng));
  p.receptor_count = std::pow(10.0, exponent(rng));
  p.pulse_duration = std::pow(10.0, duration_exponent(rng));
  p.threshold = std::pow(10.0, exponent(rng));
  p.prob_transmit_pulse = 0.01 + 0.98 * unit(rng);
  p.sample_volume = std::pow(10.0, exponent(rng));
  return p;
}

}  // namespace

TEST_CASE("bound receptor concentration reference point") {
  const ncc::NccParameters p = reference_channel();
  CHECK(ncc::bound_receptor_concentration(p, 0.0) == 0.0);
  check_relative(ncc::bound_receptor_concentration(p, 1.0),
                 0.43233235838169365, 1e-13);
  // plateau: half the receptors, for symmetric rates at unit concentration
  check_relative(ncc::bound_receptor_concentration(p, 1e6), 0.5, 1e-12);
  CHECK_THROWS_AS((void)ncc::bound_receptor_concentration(p, -0.5),
                  std::domain_error);
}

TEST_CASE("decayed concentration") {
  const ncc::NccParameters p = reference_channel();
  check_relative(ncc::decayed_concentration(1.0, p, 2.0, 1.0),
                 std::exp(-1.0), 1e-14);
  CHECK(ncc::decayed_concentration(0.0, p, 5.0, 0.0) == 0.0);
  CHECK_THROWS_AS((void)ncc::decayed_concentration(1.0, p, 0.5, 1.0),
                  std::domain_error);
  CHECK_THROWS_AS((void)ncc::decayed_concentration(-1.0, p, 2.0, 1.0),
                  std::domain_error);
}

TEST_CASE("pulse response reference point") {
  const ncc::PulseResponse r = ncc::pulse_response(reference_channel());
  check_relative(r.received_during_pulse, 0.28383382080915317, 1e-13);
  check_relative(r.carryover_after_pulse, 0.17941719342432661, 1e-13);
  CHECK(r.received_during_silence == 0.0);
  CHECK(r.carryover_after_silence == 0.0);
  check_relative(r.steady_state_concentration, 0.5, 1e-14);
}

TEST_CASE("pulse response matches quadrature on the reference point") {
  const ncc::NccParameters p = reference_channel();
  const ncc::PulseResponse r = ncc::pulse_response(p);
  check_relative(r.received_during_pulse, quadrature_received(p), 1e-10);
  check_relative(r.carryover_after_pulse,
                 quadrature_carryover(p, r.received_during_pulse), 1e-10);
}

TEST_CASE("pulse response matches quadrature over random channels") {
  std::mt19937_64 rng(20240818);
  for (int i = 0; i < 1000; ++i) {
    const ncc::NccParameters p = random_channel(rng);
    CAPTURE(i);
    CAPTURE(p.binding_rate);
    CAPTURE(p.release_rate);
    CAPTURE(p.concentration);
    CAPTURE(p.pulse_duration);
    const ncc::PulseResponse r = ncc::pulse_response(p);
    check_relative(r.received_during_pulse, quadrature_received(p), 1e-9);
    check_relative(r.carryover_after_pulse,
                   quadrature_carryover(p, r.received_during_pulse), 1e-9);
  }
}

TEST_CASE("transition matrices are row-stochastic") {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 400; ++i) {
    const ncc::NccParameters p = random_channel(rng);
    const ncc::TransitionMatrices tm = ncc::transition_matrices(p);
    for (const Eigen::Matrix2d* m : {&tm.after_pulse, &tm.after_silence}) {
      for (int row = 0; row < 2; ++row) {
        CHECK((*m)(row, 0) >= 0.0);
        CHECK((*m)(row, 1) >= 0.0);
        CHECK(std::abs((*m).row(row).sum() - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("steady state reception reference point") {
  const ncc::TransitionMatrices tm =
      ncc::transition_matrices(reference_channel());
  const ncc::ReceptionProbabilities st =
      ncc::steady_state_reception(tm, Probability(0.5));
  check_relative(st.pulse.value(), 0.17294648299639841, 1e-13);
  check_relative(st.silence.value(), 0.72754839795412858, 1e-13);
}

TEST_CASE("steady state components satisfy their fixed points") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 400; ++i) {
    const ncc::NccParameters p = random_channel(rng);
    const ncc::TransitionMatrices tm = ncc::transition_matrices(p);
    const double pa = p.prob_transmit_pulse;
    const ncc::ReceptionProbabilities st =
        ncc::steady_state_reception(tm, Probability(pa));
    const double x_a = pulse_rate(tm.after_pulse, pa);
    const double x_b = pulse_rate(tm.after_silence, pa);
    const double y_a = 1.0 - x_a;
    const double y_b = 1.0 - x_b;
    const double pulse = st.pulse.value();
    const double silence = st.silence.value();
    CAPTURE(i);
    CHECK(std::abs(pulse - (x_a * pulse + x_b * (1.0 - pulse))) <= 1e-10);
    CHECK(std::abs(silence - (y_a * silence + y_b * (1.0 - silence))) <=
          1e-10);
  }
}

TEST_CASE("stationary pulse rate matches a long chain simulation") {
  const ncc::NccParameters p = reference_channel();
  const ncc::TransitionMatrices tm = ncc::transition_matrices(p);
  const ncc::ReceptionProbabilities st =
      ncc::steady_state_reception(tm, Probability(p.prob_transmit_pulse));

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int state = ncc::kSilence;
  const long steps = 2000000;
  long pulses = 0;
  for (long i = 0; i < steps; ++i) {
    const int tx =
        unit(rng) < p.prob_transmit_pulse ? ncc::kPulse : ncc::kSilence;
    const Eigen::Matrix2d& m =
        state == ncc::kPulse ? tm.after_pulse : tm.after_silence;
    state = unit(rng) < m(tx, ncc::kPulse) ? ncc::kPulse : ncc::kSilence;
    pulses += state == ncc::kPulse ? 1 : 0;
  }
  const double observed =
      static_cast<double>(pulses) / static_cast<double>(steps);
  CHECK(std::abs(observed - st.pulse.value()) <= 1.5e-3);
}

TEST_CASE("healthy bit rate reference point") {
  check_relative(ncc::healthy_bit_rate(reference_channel()),
                 0.15882502393145763, 1e-13);
}

TEST_CASE("healthy bit rate equals its expanded form") {
  check_relative(ncc::healthy_bit_rate(reference_channel()),
                 expanded_healthy_rate(reference_channel()), 1e-12);
  std::mt19937_64 rng(512);
  for (int i = 0; i < 400; ++i) {
    const ncc::NccParameters p = random_channel(rng);
    CAPTURE(i);
    check_relative(ncc::healthy_bit_rate(p), expanded_healthy_rate(p), 1e-12);
  }
}

TEST_CASE("saturated carryover pins the pulse capacity at the receptors") {
  // Carryover far above the threshold: the pulse-side capacity is the
  // receptor count; the silence side stays volume-limited and tiny.
  ncc::NccParameters p;
  p.binding_rate = 10.0;
  p.release_rate = 0.1;
  p.concentration = 10.0;
  p.receptor_count = 100.0;
  p.pulse_duration = 5.0;
  p.threshold = 0.5;
  p.prob_transmit_pulse = 0.5;
  p.sample_volume = 1e-6;

  const ncc::PulseResponse r = ncc::pulse_response(p);
  CHECK(r.carryover_after_pulse > p.threshold);
  const ncc::TransitionMatrices tm = ncc::transition_matrices(p);
  CHECK(tm.after_pulse(ncc::kPulse, ncc::kPulse) == 1.0);
  CHECK(tm.after_pulse(ncc::kSilence, ncc::kPulse) == 1.0);
  CHECK(tm.after_silence(ncc::kSilence, ncc::kPulse) == 0.0);
  // N * P'_pulse * x_a + (L V / S) * P'_silence * x_b with the values the
  // clamped matrices force: P'_pulse = 1, x_a = 1, P'_silence = 1/3,
  // x_b = 1/2.
  check_relative(ncc::healthy_bit_rate(p), 100.0 + 1e-5 / 3.0, 1e-12);
}

TEST_CASE("degenerate chain throws") {
  ncc::NccParameters p;
  p.binding_rate = 10.0;
  p.release_rate = 0.1;
  p.concentration = 10.0;
  p.receptor_count = 100.0;
  p.pulse_duration = 5.0;
  p.threshold = 0.5;
  p.prob_transmit_pulse = 0.0;  // silence-only source
  p.sample_volume = 1.0;
  const ncc::TransitionMatrices tm = ncc::transition_matrices(p);
  CHECK_THROWS_AS((void)ncc::steady_state_reception(tm, Probability(0.0)),
                  ncc::SingularChannelError);
}

TEST_CASE("parameter validation") {
  ncc::NccParameters p = reference_channel();
  p.receptor_count = 0.0;
  CHECK_THROWS_AS(p.validate(), std::domain_error);
  p = reference_channel();
  p.release_rate = -1.0;
  CHECK_THROWS_AS(p.validate(), std::domain_error);
  p = reference_channel();
  p.prob_transmit_pulse = 1.5;
  CHECK_THROWS_AS(p.validate(), std::domain_error);
  CHECK_NOTHROW(reference_channel().validate());
}

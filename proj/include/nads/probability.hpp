#pragma once

#include <stdexcept>
#include <string>

namespace nads {

/// Binary hypothesis label. h0 = healthy baseline, h1 = abnormality present.
enum class Hypothesis { h0, h1 };

/// A probability value, guaranteed to lie in [0, 1].
///
/// The checked constructor throws std::domain_error on non-finite or
/// out-of-range input. clamped() is the lenient path for quantities that
/// are probabilities by construction but may drift an ulp past a boundary.
class Probability {
 public:
  constexpr Probability() = default;

  explicit Probability(double v) : value_(checked(v)) {}

  [[nodiscard]] static Probability clamped(double v) noexcept {
    Probability p;
    p.value_ = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    return p;
  }

  [[nodiscard]] constexpr double value() const noexcept { return value_; }
  constexpr operator double() const noexcept { return value_; }

 private:
  static double checked(double v) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::domain_error("probability outside [0, 1]: " +
                              std::to_string(v));
    }
    return v;
  }

  double value_ = 0.0;
};

/// 1 - p, exact in floating point for p in [0, 1].
[[nodiscard]] inline Probability complement(Probability p) {
  return Probability(1.0 - p.value());
}

}  // namespace nads

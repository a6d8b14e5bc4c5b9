#pragma once

#include <cstdint>

#include "nads/probability.hpp"

namespace nads::stat {

/// ln(n!) for n >= 0.
[[nodiscard]] double log_factorial(std::int64_t n);

/// P(Y = count) for Y ~ Poisson(mean), evaluated in the log domain so large
/// means and counts neither overflow nor lose the exponent. mean must be
/// finite and positive; count must be non-negative.
[[nodiscard]] Probability poisson_pmf(std::int64_t count, double mean);

/// P(Y <= count) for Y ~ Poisson(mean). A negative count yields exactly 0
/// (the empty sum). Absolute error stays well under 1e-12 for mean <= 100
/// and count <= 200; very large means fall back to log-domain summation.
[[nodiscard]] Probability poisson_cdf(std::int64_t count, double mean);

/// Upper tail Q(x) = P(Z >= x) of the standard normal, via erfc. Accurate
/// to the quality of libm erfc, comfortably inside 1e-12 relative for
/// |x| <= 8 and usable far into the deep tail (Q(11) ~ 2e-28).
[[nodiscard]] Probability gaussian_q(double x);

}  // namespace nads::stat

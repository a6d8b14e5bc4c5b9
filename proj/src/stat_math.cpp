#include "nads/stat_math.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nads::stat {
namespace {

// exp(-mean) is representable down to mean ~ 745; switch to log-domain
// summation with margin before that.
constexpr double kDirectSumMeanLimit = 700.0;

void require_rate(double mean, const char* who) {
  if (!std::isfinite(mean) || mean <= 0.0) {
    throw std::domain_error(std::string(who) +
                            ": mean must be finite and positive, got " +
                            std::to_string(mean));
  }
}

}  // namespace

double log_factorial(std::int64_t n) {
  if (n < 0) {
    throw std::domain_error("log_factorial: negative argument " +
                            std::to_string(n));
  }
  return std::lgamma(static_cast<double>(n) + 1.0);
}

Probability poisson_pmf(std::int64_t count, double mean) {
  require_rate(mean, "poisson_pmf");
  if (count < 0) {
    throw std::domain_error("poisson_pmf: negative count " +
                            std::to_string(count));
  }
  const double q = static_cast<double>(count);
  const double log_p = -mean + q * std::log(mean) - log_factorial(count);
  return Probability::clamped(std::exp(log_p));
}

Probability poisson_cdf(std::int64_t count, double mean) {
  require_rate(mean, "poisson_cdf");
  if (count < 0) {
    return Probability(0.0);
  }

  if (mean <= kDirectSumMeanLimit) {
    // Forward term recurrence t_i = t_{i-1} * mean / i. Terms are positive
    // and the sum is bounded by 1, so the accumulated rounding error is a
    // few hundred ulp at worst over the contracted domain.
    double term = std::exp(-mean);
    double sum = term;
    for (std::int64_t i = 1; i <= count; ++i) {
      term *= mean / static_cast<double>(i);
      sum += term;
      if (static_cast<double>(i) >= 2.0 * mean && term < 1e-18) {
        break;  // remaining tail is below 1e-18 and shrinking geometrically
      }
    }
    return Probability(sum < 1.0 ? sum : 1.0);
  }

  // Log-domain fallback: running logsumexp over the same terms.
  double log_sum = -std::numeric_limits<double>::infinity();
  const double log_mean = std::log(mean);
  for (std::int64_t i = 0; i <= count; ++i) {
    const double log_term =
        -mean + static_cast<double>(i) * log_mean - log_factorial(i);
    if (log_term > log_sum) {
      log_sum = log_term + std::log1p(std::exp(log_sum - log_term));
    } else {
      log_sum = log_sum + std::log1p(std::exp(log_term - log_sum));
    }
    if (static_cast<double>(i) >= 2.0 * mean && log_term < log_sum - 45.0) {
      break;
    }
  }
  return Probability::clamped(std::exp(log_sum));
}

Probability gaussian_q(double x) {
  if (!std::isfinite(x)) {
    throw std::domain_error("gaussian_q: non-finite argument");
  }
  return Probability::clamped(0.5 * std::erfc(x / std::numbers::sqrt2));
}

}  // namespace nads::stat

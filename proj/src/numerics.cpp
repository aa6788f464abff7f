#include "modslope/numerics.hpp"

#include <cmath>
#include <string>

#include "modslope/error.hpp"

namespace modslope::numerics {

double log_ball_volume(int n) {
  if (n < 1) throw DomainError("log_ball_volume: n must be >= 1, got " + std::to_string(n));
  return log_ball_volume(static_cast<double>(n));
}

double log_ball_volume(double x) {
  if (!(x > 0.0)) throw DomainError("log_ball_volume: dimension must be positive");
  return 0.5 * x * std::log(kPi) - log_gamma(1.0 + 0.5 * x);
}

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("digamma: x must be positive and finite");
  double shift = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  // Bernoulli tail B_{2k}/(2k x^{2k}) for k = 1..7; truncation error < 1e-17 at x >= 10.
  const double inv2 = 1.0 / (x * x);
  double tail = inv2 * (1.0 / 12 -
                inv2 * (1.0 / 120 -
                inv2 * (1.0 / 252 -
                inv2 * (1.0 / 240 -
                inv2 * (1.0 / 132 -
                inv2 * (691.0 / 32760 -
                inv2 * (1.0 / 12)))))));
  return shift + std::log(x) - 0.5 / x - tail;
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_gamma: x must be positive and finite");
  // lgamma_r leaves the global signgam untouched; x > 0 so the sign is always +1.
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

}  // namespace modslope::numerics

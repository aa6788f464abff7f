#pragma once

// Special functions used by the slope formulas. All logarithms are natural.

namespace modslope::numerics {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// ln vol(B_n) of the n-dimensional Euclidean unit ball.
double log_ball_volume(int n);

/// Real-argument extension (n/2) ln(pi) - lnGamma(1 + n/2), for x > 0.
double log_ball_volume(double x);

/// Digamma psi(x) for x > 0, via upward recurrence and the asymptotic series.
double digamma(double x);

/// lnGamma(x) for x > 0.
double log_gamma(double x);

}  // namespace modslope::numerics

#include "modslope/predictor.hpp"

#include <cmath>
#include <string>

#include "modslope/error.hpp"
#include "modslope/numerics.hpp"

namespace modslope::predict {

using cyclo::CyclotomicField;
using numerics::digamma;

double lgh_q(int n) {
  if (n < 2) throw DomainError("lgh_q: n must be >= 2, got " + std::to_string(n));
  return (std::log(2.0) - numerics::kEulerGamma - numerics::log_ball_volume(n)) / n;
}

double lgh_q(double x) {
  if (!(x >= 2.0)) throw DomainError("lgh_q: argument must be >= 2");
  return (std::log(2.0) - numerics::kEulerGamma - numerics::log_ball_volume(x)) / x;
}

double lgh_k(const CyclotomicField& K, int r) {
  if (r < 1 || r * K.degree < 2) throw DomainError("lgh_k: r*d must be >= 2");
  const int n = r * K.degree;
  return lgh_q(n) + std::log(K.mu / 2.0) / n;
}

double lgh_k(const CyclotomicField& K, double r) {
  const double n = r * K.degree;
  if (!(n >= 2.0)) throw DomainError("lgh_k: r*d must be >= 2");
  return lgh_q(n) + std::log(K.mu / 2.0) / n;
}

double lgh_k_minkowski_bound(int d, int r) {
  if (d < 1 || r < 1 || r * d < 2) throw DomainError("lgh_k_minkowski_bound: r*d must be >= 2");
  return std::log(2.0) + lgh_q(r * d);
}

double skewness_model(int d, int d_R, int d_C, double betaK) {
  if (d < 1 || d_R < 0 || d_C < 0 || d != d_R + 2 * d_C)
    throw DomainError("skewness_model: invalid signature (d must equal d_R + 2 d_C)");
  if (!(betaK >= 2.0)) throw DomainError("skewness_model: betaK must be >= 2");
  double inner = 0.0;
  if (d_R > 0) inner += d_R * digamma(betaK / 2.0);
  if (d_C > 0) inner += 2.0 * d_C * (digamma(betaK) - std::log(2.0));
  return 0.5 * std::log(static_cast<double>(d)) + inner / (2.0 * d) - 0.5 * digamma(betaK * d / 2.0);
}

double index_model(const CyclotomicField& K, double betaK) {
  if (!(betaK >= 2.0)) throw DomainError("index_model: betaK must be >= 2");
  return cyclo::zeta_log_derivative(K, betaK, 1e-10) / K.degree;
}

GapTerms gap_terms(const CyclotomicField& K, double betaK) {
  GapTerms t;
  t.t1 = lgh_k(K, betaK);
  t.t2 = cyclo::discriminant_gap(K);
  t.t3_model = skewness_model(K.degree, K.num_real, K.num_complex_pairs, betaK);
  t.t4_model = index_model(K, betaK);
  return t;
}

double predict_bkz_slope(int beta) {
  if (beta < 2) throw DomainError("predict_bkz_slope: beta must be >= 2");
  return -2.0 * lgh_q(beta) / (beta - 1);
}

double predict_bkz_slope(double beta) {
  if (!(beta >= 2.0)) throw DomainError("predict_bkz_slope: beta must be >= 2");
  return -2.0 * lgh_q(beta) / (beta - 1.0);
}

SlopePrediction predict_mbkz_slope(const CyclotomicField& K, double betaK) {
  if (!(betaK >= 2.0)) throw DomainError("predict_mbkz_slope: betaK must be >= 2");
  SlopePrediction p;
  p.conductor = K.conductor;
  p.d = K.degree;
  p.betaK = betaK;
  p.beta = betaK * K.degree;
  p.terms = gap_terms(K, betaK);
  const double scale = -2.0 / (p.beta - K.degree);
  p.slope_lower = scale * (p.terms.t1 + p.terms.t2);
  p.slope_upper = scale * (p.terms.t1 + p.terms.t2 + p.terms.t3_model + p.terms.t4_model);
  const double d2 = static_cast<double>(K.degree) * K.degree;
  p.log_alpha_K_lower = -d2 * p.slope_upper;
  p.log_alpha_K_upper = -d2 * p.slope_lower;
  p.out_of_model = p.beta < kGsaRegimeStart;
  return p;
}

SlopePrediction predict_mbkz_slope(const CyclotomicField& K, int betaK) {
  if (betaK < 2) throw DomainError("predict_mbkz_slope: betaK must be >= 2, got " + std::to_string(betaK));
  return predict_mbkz_slope(K, static_cast<double>(betaK));
}

namespace {

template <class F>
double bisect(F f, double lo, double hi, double tol) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0) == (fhi < 0)) throw SolverError("solve_beta_eq: no sign change in bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Location of the minimum of an end of the slope curve over [a, b]: the curve
// rises from below the GSA regime to its minimum, then increases toward 0.
template <class F>
double argmin(F f, double a, double b) {
  constexpr int kGrid = 400;
  double best_x = a, best = f(a);
  const double la = std::log(a), lb = std::log(b);
  double step = (lb - la) / kGrid;
  for (int i = 1; i <= kGrid; ++i) {
    const double x = std::exp(la + i * step);
    const double v = f(x);
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  double lo = std::max(a, best_x * std::exp(-step)), hi = std::min(b, best_x * std::exp(step));
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < 100 && hi - lo > 1e-9 * hi; ++it) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

BetaEq solve_beta_eq(const CyclotomicField& K, int beta, double tol) {
  if (beta < kGsaRegimeStart) throw DomainError("solve_beta_eq: beta must be >= 50 (GSA regime)");
  const double target = predict_bkz_slope(beta);
  const double d = K.degree;
  const double a = 2.0 * d, b = 10.0 * beta;
  auto end0 = [&](double x) { return predict_mbkz_slope(K, x / d).slope_lower; };
  auto end1 = [&](double x) { return predict_mbkz_slope(K, x / d).slope_upper; };
  auto solve = [&](auto slope) {
    const double lo = argmin(slope, a, b);
    return bisect([&](double x) { return slope(x) - target; }, lo, b, tol);
  };
  const double x0 = solve(end0), x1 = solve(end1);
  return BetaEq{std::min(x0, x1), std::max(x0, x1)};
}

double asymptotic_beta_eq(const CyclotomicField& K, int beta) {
  if (beta < kGsaRegimeStart) throw DomainError("asymptotic_beta_eq: beta must be >= 50 (GSA regime)");
  const double d = K.degree;
  const double lb = std::log(static_cast<double>(beta));
  const double log_disc_ratio = 2.0 * d * cyclo::discriminant_gap(K);
  const double two_pi_e2 = std::log(2.0 * numerics::kPi) + 2.0;
  return beta + log_disc_ratio * (beta / (d * lb)) * (1.0 + two_pi_e2 / lb) + d - 1.0;
}

}  // namespace modslope::predict

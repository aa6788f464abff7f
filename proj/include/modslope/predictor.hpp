#pragma once

// Slope predictions for BKZ and module-BKZ, the four gap terms, and the
// equivalent-blocksize solvers. All quantities are in nats.

#include "modslope/cyclofield.hpp"

namespace modslope::predict {

// Blocksizes below this are outside the GSA regime; predictions are tagged.
inline constexpr double kGsaRegimeStart = 50.0;

/// (1/n)(ln 2 - gamma - ln vol(B_n)), n >= 2.
double lgh_q(int n);
/// Real-argument extension of lgh_q, x >= 2.
double lgh_q(double x);

/// lgh_q(r d) + ln(mu_K/2)/(r d).
double lgh_k(const cyclo::CyclotomicField& K, int r);
double lgh_k(const cyclo::CyclotomicField& K, double r);

/// Upper bound ln 2 + lgh_q(r d), valid for any number field of degree d.
double lgh_k_minkowski_bound(int d, int r);

/// Modeled skewness gap for signature (d, d_R, d_C) at module blocksize betaK.
double skewness_model(int d, int d_R, int d_C, double betaK);

/// Modeled index gap (1/d) zeta_K'/zeta_K(betaK).
double index_model(const cyclo::CyclotomicField& K, double betaK);

struct GapTerms {
  double t1 = 0;
  double t2 = 0;
  double t3_model = 0;
  double t4_model = 0;
};

GapTerms gap_terms(const cyclo::CyclotomicField& K, double betaK);

struct SlopePrediction {
  long conductor = 1;
  int d = 1;
  double beta = 0;   // betaK * d
  double betaK = 0;
  GapTerms terms;
  // slope_lower uses t3 = t4 = 0; slope_upper includes the modeled t3, t4
  // (both are <= 0, so that end is the flatter one).
  double slope_lower = 0;
  double slope_upper = 0;
  double log_alpha_K_lower = 0;  // -d^2 * slope_upper
  double log_alpha_K_upper = 0;  // -d^2 * slope_lower
  bool out_of_model = false;
};

/// -2 lgh_q(beta)/(beta - 1).
double predict_bkz_slope(int beta);
double predict_bkz_slope(double beta);

SlopePrediction predict_mbkz_slope(const cyclo::CyclotomicField& K, int betaK);
/// Real-valued betaK, used by the solver and continuous curves.
SlopePrediction predict_mbkz_slope(const cyclo::CyclotomicField& K, double betaK);

struct BetaEq {
  double lower = 0;
  double upper = 0;
  double midpoint() const { return 0.5 * (lower + upper); }
};

/// Embedded blocksizes at which the two ends of the mBKZ slope interval match
/// slope_Q(BKZ^beta). Continuous in beta_eq; throws SolverError on failure.
BetaEq solve_beta_eq(const cyclo::CyclotomicField& K, int beta, double tol = 1e-6);

double asymptotic_beta_eq(const cyclo::CyclotomicField& K, int beta);

}  // namespace modslope::predict

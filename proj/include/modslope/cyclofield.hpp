#pragma once

// Cyclotomic fields K = Q(w_c): invariants, prime splitting, the Dedekind zeta
// logarithmic derivative, and exact arithmetic in Z[w_c] = Z[X]/Phi_c(X).
//
// Conductors c = 2 (mod 4) are taken literally. Q(w_c) = Q(w_{c/2}) in that case,
// so every invariant agrees with conductor c/2 except mu_K, which is computed from c
// as the formula prescribes (it is the same value, 2*(c/2) = c).

#include <cstdint>
#include <vector>

#include "modslope/intmat.hpp"

namespace modslope::cyclo {

long euler_phi(long n);
bool is_prime(long n);
std::vector<long> prime_factors(long n);   // distinct, ascending
long multiplicative_order(long a, long m);  // requires gcd(a, m) = 1, m >= 1
int moebius(long n);
std::vector<long> primes_up_to(long n);

struct CyclotomicField {
  long conductor = 1;
  int degree = 1;
  int num_real = 1;
  int num_complex_pairs = 0;
  Int abs_discriminant = 1;
  long mu = 2;  // number of roots of unity in K
  std::vector<long> prime_factors;
  std::vector<Int> cyclotomic_poly;  // Phi_c, ascending coefficients, monic, length d+1
};

CyclotomicField make_field(long conductor);

// Closed form c^phi(c) / prod_p p^(phi(c)/(p-1)), exact.
Int discriminant_formula(long conductor);

/// Discriminant gap t2 via the per-prime closed form (depends only on the primes dividing c).
double discriminant_gap(const CyclotomicField& K);
/// (1/(2d)) ln(|Delta_K| / d^d), evaluated from the exact discriminant.
double discriminant_gap_from_discriminant(const CyclotomicField& K);

struct PrimeSplit {
  long p = 0;
  int f = 1;  // residue degree
  int g = 1;  // number of primes above p
  int e = 1;  // ramification index
};

PrimeSplit split_prime(const CyclotomicField& K, long p);

/// zeta_K'(s)/zeta_K(s) for real s > 1 with absolute error <= tol.
double zeta_log_derivative(const CyclotomicField& K, double s, double tol = 1e-10);

/// Truncated Euler-product sum over rational primes p <= bound (no tail correction).
double zeta_log_derivative_prime_sum(const CyclotomicField& K, double s, long bound);

/// Upper bound on the magnitude of the prime-sum tail beyond `bound`.
double prime_sum_tail_bound(const CyclotomicField& K, double s, long bound);

// Element of Z[w_c] in power-basis coordinates (length d).
struct RingElement {
  IntVector coeffs;
  bool operator==(const RingElement&) const = default;
};

RingElement ring_zero(const CyclotomicField& K);
RingElement ring_from_int(const CyclotomicField& K, const Int& v);
/// w_c^j reduced to the power basis (j may be any integer).
RingElement ring_omega_power(const CyclotomicField& K, long j);
RingElement ring_add(const RingElement& a, const RingElement& b);
RingElement ring_sub(const RingElement& a, const RingElement& b);
RingElement ring_mul(const CyclotomicField& K, const RingElement& a, const RingElement& b);
/// Complex conjugation w -> w^{-1}.
RingElement ring_conj(const CyclotomicField& K, const RingElement& a);
bool ring_is_zero(const RingElement& a);

/// Column j holds the coordinates of a * w^j.
IntMatrix multiplication_matrix(const CyclotomicField& K, const RingElement& a);
Int ring_norm(const CyclotomicField& K, const RingElement& a);
Int ring_trace(const CyclotomicField& K, const RingElement& a);

/// Tr(w_c^n) as an exact integer (Ramanujan's sum).
Int trace_of_root_power(long c, long n);
/// G_{jk} = Tr(w^j conj(w^k)), the trace-form Gram matrix of the power basis.
IntMatrix trace_gram(const CyclotomicField& K);

struct IdealZBasis {
  IntMatrix basis;  // d x d, columns are a Z-basis in power-basis coordinates, HNF
  Int norm;         // [O_K : ideal]
};

/// HNF Z-basis of the ideal sum x_1 O_K + ... + x_k O_K.
IdealZBasis ideal_sum_and_norm(const CyclotomicField& K, const std::vector<RingElement>& generators);
bool ideal_contains(const IdealZBasis& I, const RingElement& x);

}  // namespace modslope::cyclo

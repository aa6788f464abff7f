#include "modslope/cyclofield.hpp"

#include <cmath>
#include <complex>
#include <numeric>
#include <string>

#include "modslope/error.hpp"

namespace modslope::cyclo {

long euler_phi(long n) {
  if (n < 1) throw DomainError("euler_phi: n must be >= 1");
  long result = n;
  for (long p : prime_factors(n)) result -= result / p;
  return result;
}

bool is_prime(long n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (long q = 3; q * q <= n; q += 2)
    if (n % q == 0) return false;
  return true;
}

std::vector<long> prime_factors(long n) {
  std::vector<long> out;
  for (long q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    out.push_back(q);
    while (n % q == 0) n /= q;
  }
  if (n > 1) out.push_back(n);
  return out;
}

long multiplicative_order(long a, long m) {
  if (m < 1) throw DomainError("multiplicative_order: modulus must be >= 1");
  if (m == 1) return 1;
  a %= m;
  if (a < 0) a += m;
  if (std::gcd(a, m) != 1) throw DomainError("multiplicative_order: arguments not coprime");
  long x = a % m, k = 1;
  while (x != 1 % m) {
    x = static_cast<long>((static_cast<__int128>(x) * a) % m);
    ++k;
  }
  return k;
}

int moebius(long n) {
  int mu = 1;
  for (long q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    n /= q;
    if (n % q == 0) return 0;
    mu = -mu;
  }
  if (n > 1) mu = -mu;
  return mu;
}

std::vector<long> primes_up_to(long n) {
  std::vector<long> out;
  if (n < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
  for (long i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (long j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

namespace {

using Poly = std::vector<Int>;

void trim(Poly& p) {
  while (p.size() > 1 && p.back() == 0) p.pop_back();
}

Poly cyclotomic_polynomial(long c) {
  // Phi_c = prod_{m | c} (X^m - 1)^{mu(c/m)}: multiply the positive factors, then divide.
  std::vector<long> divisors;
  for (long m = 1; m <= c; ++m)
    if (c % m == 0) divisors.push_back(m);
  Poly p{Int(1)};
  for (long m : divisors) {
    if (moebius(c / m) != 1) continue;
    Poly q(p.size() + m);
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i + m] += p[i];
      q[i] -= p[i];
    }
    p = std::move(q);
  }
  for (long m : divisors) {
    if (moebius(c / m) != -1) continue;
    // p = q * (X^m - 1)  =>  q_i = q_{i-m} - p_i
    const std::size_t deg_q = p.size() - 1 - m;
    Poly q(deg_q + 1);
    for (std::size_t i = 0; i <= deg_q; ++i) {
      q[i] = -p[i];
      if (i >= static_cast<std::size_t>(m)) q[i] += q[i - m];
    }
    p = std::move(q);
  }
  trim(p);
  return p;
}

// Reduces a polynomial of any degree modulo the monic Phi_c.
IntVector reduce(const CyclotomicField& K, Poly p) {
  const std::size_t d = K.degree;
  const Poly& phi = K.cyclotomic_poly;
  for (std::size_t k = p.size(); k-- > d;) {
    if (p[k] == 0) continue;
    const Int t = p[k];
    for (std::size_t i = 0; i <= d; ++i) mpz_submul(p[k - d + i].get_mpz_t(), t.get_mpz_t(), phi[i].get_mpz_t());
  }
  p.resize(d);
  return p;
}

void check_same_field(const CyclotomicField& K, const RingElement& a) {
  if (a.coeffs.size() != static_cast<std::size_t>(K.degree))
    throw DomainError("ring element has " + std::to_string(a.coeffs.size()) + " coordinates, field degree is " +
                      std::to_string(K.degree));
}

}  // namespace

Int discriminant_formula(long c) {
  if (c < 1) throw DomainError("discriminant_formula: conductor must be >= 1");
  const long phi = euler_phi(c);
  Int num;
  mpz_ui_pow_ui(num.get_mpz_t(), static_cast<unsigned long>(c), static_cast<unsigned long>(phi));
  Int den = 1;
  for (long p : prime_factors(c)) {
    Int t;
    mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(phi / (p - 1)));
    den *= t;
  }
  Int q, r;
  mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (r != 0) throw InternalError("discriminant formula produced a non-integer");
  return q;
}

CyclotomicField make_field(long c) {
  if (c < 1) throw DomainError("make_field: conductor must be >= 1, got " + std::to_string(c));
  CyclotomicField K;
  K.conductor = c;
  K.degree = static_cast<int>(euler_phi(c));
  if (c <= 2) {
    K.num_real = K.degree;
    K.num_complex_pairs = 0;
  } else {
    K.num_real = 0;
    K.num_complex_pairs = K.degree / 2;
  }
  K.mu = (c % 2 == 0) ? c : 2 * c;
  K.prime_factors = prime_factors(c);
  K.abs_discriminant = discriminant_formula(c);
  K.cyclotomic_poly = cyclotomic_polynomial(c);
  if (K.cyclotomic_poly.size() != static_cast<std::size_t>(K.degree) + 1)
    throw InternalError("cyclotomic polynomial has unexpected degree");
  return K;
}

double discriminant_gap(const CyclotomicField& K) {
  double t = 0.0;
  for (long p : K.prime_factors) {
    const double pd = static_cast<double>(p);
    t += (pd - 2.0) / (pd - 1.0) * std::log(pd) - std::log(pd - 1.0);
  }
  return 0.5 * t;
}

double discriminant_gap_from_discriminant(const CyclotomicField& K) {
  // ln|Delta| via mantissa/exponent split: |Delta| can have thousands of digits.
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, K.abs_discriminant.get_mpz_t());
  const double ln_disc = std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
  const double d = K.degree;
  return (ln_disc - d * std::log(d)) / (2.0 * d);
}

PrimeSplit split_prime(const CyclotomicField& K, long p) {
  if (!is_prime(p)) throw DomainError("split_prime: " + std::to_string(p) + " is not prime");
  const long c = K.conductor;
  PrimeSplit s;
  s.p = p;
  long m = c, pa = 1;
  while (m % p == 0) {
    m /= p;
    pa *= p;
  }
  s.e = static_cast<int>(euler_phi(pa));
  s.f = static_cast<int>(m <= 2 ? 1 : multiplicative_order(p, m));
  s.g = static_cast<int>(euler_phi(m) / s.f);
  if (static_cast<long>(s.e) * s.f * s.g != K.degree) throw InternalError("split_prime: e*f*g != d");
  return s;
}

// ---------------------------------------------------------------------------
// Dedekind zeta logarithmic derivative.
//
// For s below kPrimeSumFrom the Euler product converges too slowly to be summed
// to 1e-10, so we use zeta_K = prod_chi L(s, chi*) over the Dirichlet characters
// mod c (chi* the primitive character inducing chi), with each L-series split into
// residue classes mod c and the class sums evaluated by Euler-Maclaurin.

namespace {

constexpr double kPrimeSumFrom = 6.0;

// sum_{k>=0} (b + k c)^{-s} and its s-derivative.
struct ClassSum {
  double value;
  double deriv;
};

ClassSum class_sum(double b, double c, double s) {
  constexpr int kTerms = 20;
  // B_{2j} / (2j)! for j = 1..8
  static constexpr double kBern[] = {1.0 / 12,          -1.0 / 720,          1.0 / 30240,
                                     -1.0 / 1209600,    1.0 / 47900160,      -691.0 / 1307674368000,
                                     1.0 / 74724249600, -3617.0 / 10670622842880000};
  double v = 0.0, dv = 0.0;
  for (int k = 0; k < kTerms; ++k) {
    const double x = b + k * c;
    const double lx = std::log(x);
    const double t = std::exp(-s * lx);
    v += t;
    dv -= lx * t;
  }
  const double x = b + kTerms * c;
  const double lx = std::log(x);
  const double xs = std::exp(-s * lx);  // x^{-s}
  // Integral term x^{1-s} / (c (s-1)) and half endpoint term.
  v += x * xs / (c * (s - 1.0)) + 0.5 * xs;
  dv += -lx * x * xs / (c * (s - 1.0)) - x * xs / (c * (s - 1.0) * (s - 1.0)) - 0.5 * lx * xs;
  // Bernoulli corrections: B_{2j}/(2j)! (s)_{2j-1} c^{2j-1} x^{-s-2j+1}.
  double rising = s;            // (s)_{2j-1}
  double rising_dlog = 1.0 / s;  // d/ds ln (s)_{2j-1}
  double ratio = c / x;          // c^{2j-1} x^{-2j+1}
  for (int j = 1; j <= 8; ++j) {
    const double term = kBern[j - 1] * rising * ratio * xs;
    v += term;
    dv += term * (rising_dlog - lx);
    const double a1 = s + 2 * j - 1, a2 = s + 2 * j;
    rising *= a1 * a2;
    rising_dlog += 1.0 / a1 + 1.0 / a2;
    ratio *= (c / x) * (c / x);
  }
  return {v, dv};
}

long power_of(long p, int a) {
  long q = 1;
  while (a-- > 0) q *= p;
  return q;
}

// One cyclic factor of (Z/c)^*, attached to the prime power it lives on.
struct CyclicFactor {
  std::size_t prime_power;  // index into PrimePowerPart list
  long order;
};

struct PrimePowerPart {
  long p;
  int a;
  long modulus;
  std::vector<std::size_t> factors;                 // indices into factor list
  std::vector<std::vector<long>> index_of;          // residue -> exponents per factor
};

long primitive_root_mod_prime_power(long p, int a) {
  const long pm1 = p - 1;
  const auto fac = prime_factors(pm1);
  long g = 2;
  for (;; ++g) {
    bool ok = true;
    for (long q : fac) {
      Int t;
      mpz_class base = g, mod = p;
      mpz_powm_ui(t.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(pm1 / q), mod.get_mpz_t());
      if (t == 1) {
        ok = false;
        break;
      }
    }
    if (ok) break;
  }
  if (a >= 2) {
    Int t;
    mpz_class base = g, mod = p * p;
    mpz_powm_ui(t.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(pm1), mod.get_mpz_t());
    if (t == 1) g += p;
  }
  return g;
}

struct CharacterGroup {
  std::vector<PrimePowerPart> parts;
  std::vector<CyclicFactor> factors;
};

CharacterGroup character_group(long c) {
  CharacterGroup G;
  long rest = c;
  for (long p : prime_factors(c)) {
    int a = 0;
    while (rest % p == 0) {
      rest /= p;
      ++a;
    }
    PrimePowerPart part{p, a, power_of(p, a), {}, {}};
    const long q = part.modulus;
    if (q <= 2) continue;  // trivial unit group
    part.index_of.assign(q, {});
    const std::size_t part_idx = G.parts.size();
    if (p == 2 && a >= 3) {
      const long o1 = q / 4;
      part.factors = {G.factors.size(), G.factors.size() + 1};
      G.factors.push_back({part_idx, 2});
      G.factors.push_back({part_idx, o1});
      long x = 1;
      for (long e1 = 0; e1 < o1; ++e1) {
        part.index_of[x] = {0, e1};
        part.index_of[q - x] = {1, e1};
        x = (x * 5) % q;
      }
    } else {
      const long g = (p == 2) ? 3 : primitive_root_mod_prime_power(p, a);
      const long o = euler_phi(q);
      part.factors = {G.factors.size()};
      G.factors.push_back({part_idx, o});
      long x = 1;
      for (long e = 0; e < o; ++e) {
        part.index_of[x] = {e};
        x = static_cast<long>((static_cast<__int128>(x) * g) % q);
      }
    }
    G.parts.push_back(std::move(part));
  }
  return G;
}

long valuation(long n, long p) {
  long v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

double zeta_log_derivative_characters(const CyclotomicField& K, double s) {
  const long c = K.conductor;
  const CharacterGroup G = character_group(c);

  std::vector<ClassSum> sums(c + 1);
  for (long b = 1; b <= c; ++b) sums[b] = class_sum(static_cast<double>(b), static_cast<double>(c), s);

  const std::size_t nf = G.factors.size();
  std::vector<long> k(nf, 0);
  double total = 0.0;
  const double two_pi = 2.0 * std::acos(-1.0);
  while (true) {
    // Conductor contribution of each prime-power part for this character.
    std::vector<bool> active(G.parts.size(), false);
    long f = 1;
    for (std::size_t pi = 0; pi < G.parts.size(); ++pi) {
      const auto& part = G.parts[pi];
      long cond = 1;
      if (part.p == 2 && part.a >= 3) {
        const long o1 = G.factors[part.factors[1]].order;
        const long k0 = k[part.factors[0]], k1 = k[part.factors[1]];
        const long ord1 = o1 / std::gcd(k1, o1);
        if (ord1 == 1)
          cond = k0 ? 4 : 1;
        else
          cond = power_of(2, static_cast<int>(2 + valuation(ord1, 2)));
      } else {
        const long o = G.factors[part.factors[0]].order;
        const long kk = k[part.factors[0]];
        const long ord = o / std::gcd(kk, o);
        if (ord != 1) cond = (part.p == 2) ? 4 : power_of(part.p, static_cast<int>(1 + valuation(ord, part.p)));
      }
      if (cond > 1) {
        active[pi] = true;
        f *= cond;
      }
    }
    std::complex<double> L = 0.0, dL = 0.0;
    for (long b = 1; b <= c; ++b) {
      if (std::gcd(b, f) != 1) continue;
      double phase = 0.0;
      for (std::size_t pi = 0; pi < G.parts.size(); ++pi) {
        if (!active[pi]) continue;
        const auto& part = G.parts[pi];
        const auto& idx = part.index_of[b % part.modulus];
        for (std::size_t t = 0; t < part.factors.size(); ++t) {
          const auto& fac = G.factors[part.factors[t]];
          phase += static_cast<double>(k[part.factors[t]] * idx[t] % fac.order) / static_cast<double>(fac.order);
        }
      }
      const std::complex<double> chi = std::polar(1.0, two_pi * phase);
      L += chi * sums[b].value;
      dL += chi * sums[b].deriv;
    }
    total += (dL / L).real();

    std::size_t i = 0;
    while (i < nf) {
      if (++k[i] < G.factors[i].order) break;
      k[i] = 0;
      ++i;
    }
    if (i == nf) break;
  }
  return total;
}

}  // namespace

double prime_sum_tail_bound(const CyclotomicField& K, double s, long bound) {
  const double P = static_cast<double>(std::max<long>(bound, 3));
  const double sm1 = s - 1.0;
  return 2.0 * K.degree * std::pow(P, -sm1) * (std::log(P) / sm1 + 1.0 / (sm1 * sm1));
}

double zeta_log_derivative_prime_sum(const CyclotomicField& K, double s, long bound) {
  if (!(s > 1.0)) throw DomainError("zeta_log_derivative: s must exceed 1 (pole at s = 1)");
  double sum = 0.0;
  for (long p : primes_up_to(bound)) {
    const PrimeSplit sp = split_prime(K, p);
    const double lp = std::log(static_cast<double>(p));
    sum -= sp.g * sp.f * lp / std::expm1(sp.f * s * lp);
  }
  return sum;
}

double zeta_log_derivative(const CyclotomicField& K, double s, double tol) {
  if (!(s > 1.0) || !std::isfinite(s)) throw DomainError("zeta_log_derivative: s must exceed 1 (pole at s = 1)");
  if (!(tol > 0.0)) throw DomainError("zeta_log_derivative: tol must be positive");
  if (s < kPrimeSumFrom) return zeta_log_derivative_characters(K, s);
  long bound = 64;
  while (prime_sum_tail_bound(K, s, bound) >= tol) bound *= 2;
  return zeta_log_derivative_prime_sum(K, s, bound);
}

// ---------------------------------------------------------------------------
// Ring arithmetic.

RingElement ring_zero(const CyclotomicField& K) { return RingElement{IntVector(K.degree)}; }

RingElement ring_from_int(const CyclotomicField& K, const Int& v) {
  RingElement r = ring_zero(K);
  r.coeffs[0] = v;
  return r;
}

RingElement ring_omega_power(const CyclotomicField& K, long j) {
  const long c = K.conductor;
  long e = j % c;
  if (e < 0) e += c;
  Poly p(static_cast<std::size_t>(e) + 1);
  p[e] = 1;
  return RingElement{reduce(K, std::move(p))};
}

RingElement ring_add(const RingElement& a, const RingElement& b) {
  RingElement r = a;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] += b.coeffs[i];
  return r;
}

RingElement ring_sub(const RingElement& a, const RingElement& b) {
  RingElement r = a;
  for (std::size_t i = 0; i < r.coeffs.size(); ++i) r.coeffs[i] -= b.coeffs[i];
  return r;
}

RingElement ring_mul(const CyclotomicField& K, const RingElement& a, const RingElement& b) {
  check_same_field(K, a);
  check_same_field(K, b);
  const std::size_t d = K.degree;
  Poly p(2 * d - 1);
  for (std::size_t i = 0; i < d; ++i) {
    if (a.coeffs[i] == 0) continue;
    for (std::size_t j = 0; j < d; ++j)
      mpz_addmul(p[i + j].get_mpz_t(), a.coeffs[i].get_mpz_t(), b.coeffs[j].get_mpz_t());
  }
  return RingElement{reduce(K, std::move(p))};
}

RingElement ring_conj(const CyclotomicField& K, const RingElement& a) {
  check_same_field(K, a);
  const long c = K.conductor;
  Poly p(static_cast<std::size_t>(c));
  for (std::size_t j = 0; j < a.coeffs.size(); ++j) p[(c - static_cast<long>(j)) % c] += a.coeffs[j];
  return RingElement{reduce(K, std::move(p))};
}

bool ring_is_zero(const RingElement& a) {
  for (const auto& x : a.coeffs)
    if (x != 0) return false;
  return true;
}

IntMatrix multiplication_matrix(const CyclotomicField& K, const RingElement& a) {
  check_same_field(K, a);
  const std::size_t d = K.degree;
  IntMatrix m(d, d);
  IntVector v = a.coeffs;
  for (std::size_t j = 0; j < d; ++j) {
    m.set_column(j, v);
    // v <- w * v
    Poly p(d + 1);
    for (std::size_t i = 0; i < d; ++i) p[i + 1] = v[i];
    v = reduce(K, std::move(p));
  }
  return m;
}

Int ring_norm(const CyclotomicField& K, const RingElement& a) { return determinant(multiplication_matrix(K, a)); }

Int trace_of_root_power(long c, long n) {
  long g = std::gcd(n < 0 ? -n : n, c);
  if (g == 0) g = c;
  const long m = c / g;
  return Int(moebius(m) * (euler_phi(c) / euler_phi(m)));
}

Int ring_trace(const CyclotomicField& K, const RingElement& a) {
  check_same_field(K, a);
  Int t = 0;
  for (std::size_t j = 0; j < a.coeffs.size(); ++j) t += a.coeffs[j] * trace_of_root_power(K.conductor, static_cast<long>(j));
  return t;
}

IntMatrix trace_gram(const CyclotomicField& K) {
  const std::size_t d = K.degree;
  IntMatrix g(d, d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t k = 0; k < d; ++k)
      g(j, k) = trace_of_root_power(K.conductor, static_cast<long>(j) - static_cast<long>(k));
  return g;
}

IdealZBasis ideal_sum_and_norm(const CyclotomicField& K, const std::vector<RingElement>& generators) {
  const std::size_t d = K.degree;
  std::vector<IntVector> cols;
  for (const auto& x : generators) {
    check_same_field(K, x);
    if (ring_is_zero(x)) continue;
    const IntMatrix m = multiplication_matrix(K, x);
    for (std::size_t j = 0; j < d; ++j) cols.push_back(m.column(j));
  }
  if (cols.empty()) throw DomainError("ideal_sum_and_norm: all generators are zero");
  IdealZBasis I;
  I.basis = hnf_columns(IntMatrix::from_columns(cols, d));
  if (I.basis.cols() != d) throw InternalError("ideal basis is not full rank");
  I.norm = abs(determinant(I.basis));
  return I;
}

bool ideal_contains(const IdealZBasis& I, const RingElement& x) {
  std::vector<Rat> z;
  if (!solve_rational(I.basis, x.coeffs, z)) return false;
  for (const auto& q : z)
    if (q.get_den() != 1) return false;
  return true;
}

}  // namespace modslope::cyclo

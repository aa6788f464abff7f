#include "modslope/cyclembed.hpp"

#include <sstream>

#include "modslope/error.hpp"

namespace modslope::embed {

using cyclo::CyclotomicField;
using cyclo::RingElement;

namespace {

using CyclicPoly = IntVector;  // element of Z[X]/(X^c - 1)

CyclicPoly cyclic_mul(const CyclicPoly& a, const CyclicPoly& b) {
  const std::size_t c = a.size();
  CyclicPoly r(c);
  for (std::size_t i = 0; i < c; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < c; ++j) {
      if (b[j] == 0) continue;
      mpz_addmul(r[(i + j) % c].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
    }
  }
  return r;
}

int legendre(long a, long p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) return 0;
  Int t, base = a, mod = p;
  mpz_powm_ui(t.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>((p - 1) / 2), mod.get_mpz_t());
  return t == 1 ? 1 : -1;
}

CyclicPoly isometry_multiplier(long c) {
  CyclicPoly m(c);
  m[0] = 1;
  long rest = c;
  for (long p : cyclo::prime_factors(c)) {
    int a = 0;
    while (rest % p == 0) {
      rest /= p;
      ++a;
    }
    CyclicPoly f(c);
    if (p == 2) {
      if (a == 1)
        throw DomainError("cyclic embedding: conductor " + std::to_string(c) +
                          " is 2 mod 4; use the isomorphic field of conductor " + std::to_string(c / 2));
      Int s;
      mpz_ui_pow_ui(s.get_mpz_t(), 2, static_cast<unsigned long>(a / 2));
      if (a % 2 == 0) {
        f[0] = s;
      } else {
        Int h;
        mpz_ui_pow_ui(h.get_mpz_t(), 2, static_cast<unsigned long>((a - 1) / 2));
        f[0] += h;
        f[c / 4] += h;
      }
    } else {
      Int h;
      mpz_ui_pow_ui(h.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(a / 2));
      if (a % 2 == 0) {
        f[0] = h;
      } else {
        // p^((a-1)/2) times the quadratic Gauss sum over the p-th roots of unity
        for (long k = 1; k < p; ++k) f[(k * (c / p)) % c] += h * legendre(k, p);
      }
    }
    m = cyclic_mul(m, f);
  }
  return m;
}

}  // namespace

CyclicEmbedding build_embedding(const CyclotomicField& K) {
  const long c = K.conductor;
  const std::size_t d = K.degree;
  CyclicEmbedding E;
  E.field = K;
  E.scale = c;
  E.multiplier = isometry_multiplier(c);
  CyclicPoly R(c);
  for (long k = 0; k < c; ++k) R[k] = cyclo::trace_of_root_power(c, k);
  const CyclicPoly col0 = cyclic_mul(R, E.multiplier);
  E.matrix = IntMatrix(c, d);
  for (std::size_t j = 0; j < d; ++j)
    for (long i = 0; i < c; ++i) E.matrix(i, j) = col0[(i - static_cast<long>(j) % c + c) % c];
  return E;
}

IntVector embed(const CyclicEmbedding& E, const RingElement& x) {
  if (x.coeffs.size() != E.matrix.cols()) throw DomainError("embed: element does not belong to the field");
  return E.matrix * x.coeffs;
}

RingElement unembed(const CyclicEmbedding& E, const IntVector& v) {
  std::vector<Rat> z;
  if (!solve_rational(E.matrix, v, z)) throw DomainError("unembed: vector is not in the image of the field");
  RingElement x;
  x.coeffs.resize(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i].get_den() != 1) throw DomainError("unembed: vector is not the image of an algebraic integer");
    x.coeffs[i] = z[i].get_num();
  }
  return x;
}

IntMatrix embed_module_basis(const CyclicEmbedding& E, const std::vector<std::vector<RingElement>>& entries) {
  const std::size_t r = entries.size();
  const std::size_t c = E.matrix.rows(), d = E.matrix.cols();
  IntMatrix B(r * c, r * d);
  for (std::size_t i = 0; i < r; ++i) {
    if (entries[i].size() != r) throw DomainError("embed_module_basis: entries must be r x r");
    for (std::size_t k = 0; k < r; ++k) {
      const IntMatrix block = E.matrix * cyclo::multiplication_matrix(E.field, entries[i][k]);
      for (std::size_t a = 0; a < c; ++a)
        for (std::size_t j = 0; j < d; ++j) B(i * c + a, k * d + j) = block(a, j);
    }
  }
  if (rank(B) != r * d) throw DomainError("embed_module_basis: entries are not K-linearly independent");
  return B;
}

std::vector<RingElement> unembed_module_vector(const CyclicEmbedding& E, const IntVector& v) {
  const std::size_t c = E.matrix.rows();
  if (v.size() % c != 0) throw DomainError("unembed_module_vector: length is not a multiple of c");
  std::vector<RingElement> out;
  for (std::size_t i = 0; i < v.size(); i += c)
    out.push_back(unembed(E, IntVector(v.begin() + i, v.begin() + i + c)));
  return out;
}

IntVector omega_shift(const IntVector& v, long c, long times) {
  IntVector out(v.size());
  long t = times % c;
  if (t < 0) t += c;
  for (std::size_t base = 0; base < v.size(); base += c)
    for (long i = 0; i < c; ++i) out[base + (i + t) % c] = v[base + i];
  return out;
}

std::string to_csv(const IntMatrix& m) {
  std::ostringstream os;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j).get_str();
    os << '\n';
  }
  return os.str();
}

}  // namespace modslope::embed

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "modslope/latred.hpp"

using namespace modslope;
using namespace modslope::lat;

namespace {

IntMatrix random_basis(std::mt19937_64& g, std::size_t n, std::size_t m, long range) {
  IntMatrix B(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) B(i, j) = static_cast<long>(g() % (2 * range + 1)) - range;
  return B;
}

IntMatrix qary(std::mt19937_64& g, std::size_t n, std::size_t k, long q) {
  IntMatrix B = IntMatrix::identity(n);
  for (std::size_t i = 0; i < k; ++i) {
    B(i, i) = q;
    for (std::size_t j = k; j < n; ++j) B(i, j) = static_cast<long>(g() % q);
  }
  return B;
}

// Smallest nonzero |B x|^2 over the box |x_i| <= bound.
Int brute_force_min(const IntMatrix& B, int bound) {
  const std::size_t m = B.cols();
  std::vector<int> x(m, -bound);
  Int best = -1;
  while (true) {
    IntVector v(B.rows());
    bool nonzero = false;
    for (std::size_t j = 0; j < m; ++j) {
      if (x[j] == 0) continue;
      nonzero = true;
      for (std::size_t i = 0; i < B.rows(); ++i) v[i] += B(i, j) * x[j];
    }
    if (nonzero) {
      const Int n = dot(v, v);
      if (best < 0 || n < best) best = n;
    }
    std::size_t j = 0;
    while (j < m && x[j] == bound) x[j++] = -bound;
    if (j == m) break;
    ++x[j];
  }
  return best;
}

}  // namespace

TEST_SUITE("latred") {
  TEST_CASE("exact GSO (basis vectors are columns)") {
    IntMatrix B(2, 2);
    B(0, 0) = 2;
    B(1, 0) = 1;
    B(0, 1) = 0;
    B(1, 1) = 2;
    const auto G = gso(IntLattice(B));
    CHECK(G.bstar_sq[0] == 5);
    CHECK(G.bstar_sq[1] == Rat(16, 5));
    CHECK(G.mu[1][0] == Rat(2, 5));
    CHECK(G.profile.ellQ[0] == doctest::Approx(0.5 * std::log(5.0)));
  }

  TEST_CASE("dependent generators are reported with a witness") {
    IntMatrix B(3, 3);
    B(0, 0) = 1;
    B(1, 1) = 1;
    B(0, 2) = 2;
    B(1, 2) = -3;
    try {
      gso(IntLattice(B));
      FAIL("expected DependencyError");
    } catch (const DependencyError& e) {
      CHECK(e.rank == 2);
      const IntVector z = B * e.witness;
      bool zero = true, nonzero_w = false;
      for (const auto& x : z) zero = zero && x == 0;
      for (const auto& x : e.witness) nonzero_w = nonzero_w || x != 0;
      CHECK(zero);
      CHECK(nonzero_w);
    }
    const auto L = lll(IntLattice(B));
    CHECK(L.rank() == 2);
    CHECK(hnf_columns(L.basis()) == hnf_columns(B));
  }

  TEST_CASE("LLL preserves the lattice and is reduced for every delta") {
    std::mt19937_64 g(42);
    const double deltas[] = {0.99, 0.75, 0.5, 0.25, 0.1};
    for (int t = 0; t < 40; ++t) {
      const std::size_t n = 4 + g() % 9;
      const IntMatrix B = t % 2 ? random_basis(g, n, n, 50) : qary(g, n, n / 2, 97);
      const double delta = deltas[t % 5];
      const auto L = lll(IntLattice(B), delta);
      CHECK(hnf_columns(L.basis()) == hnf_columns(B));
      CHECK(is_lll_reduced(L, delta));
    }
  }

  TEST_CASE("svp_enum matches brute force on small lattices") {
    std::mt19937_64 g(3);
    for (int t = 0; t < 15; ++t) {
      const std::size_t n = 2 + g() % 4;
      const IntMatrix B = lll(IntLattice(random_basis(g, n, n, 12))).basis();
      const auto sv = svp_enum(IntLattice(B));
      CHECK(sv.norm_sq == dot(sv.vector, sv.vector));
      CHECK(sv.norm_sq == brute_force_min(B, 3));
    }
  }

  TEST_CASE("svp_enum guard") {
    std::mt19937_64 g(5);
    CHECK_THROWS_AS(svp_enum(IntLattice(qary(g, 12, 6, 97)), 10), GuardError);
  }

  TEST_CASE("measure_slope recovers a line") {
    Profile P;
    for (int i = 0; i < 30; ++i) P.ellQ.push_back(3.0 - 0.05 * i + (i < 5 ? 1.0 : 0.0));
    CHECK(measure_slope(P, 5, 0) == doctest::Approx(-0.05));
    CHECK_THROWS_AS(measure_slope(P, 12, 12), DomainError);
  }

  TEST_CASE("ellK sums blocks") {
    Profile P;
    P.ellQ = {1, 2, 3, 4};
    P.block = 2;
    CHECK(P.ellK() == std::vector<double>{3, 7});
    CHECK(P.sum() == 10);
  }

  TEST_CASE("matrix text format round trip") {
    std::mt19937_64 g(9);
    const IntMatrix B = random_basis(g, 5, 4, 1000);
    std::stringstream ss;
    write_matrix(ss, B);
    CHECK(read_matrix(ss) == B);
  }

  TEST_CASE("Reducer window LLL tracks its transform") {
    std::mt19937_64 g(11);
    const IntMatrix B = qary(g, 16, 8, 521);
    Reducer R(B);
    const IntMatrix before = R.basis();
    IntMatrix T;
    R.lll(4, 12, 0.99, &T);
    CHECK(hnf_columns(R.basis()) == hnf_columns(B));
    CHECK(std::llabs(determinant(T).get_si()) == 1);
    for (std::size_t j = 0; j < 4; ++j) CHECK(R.column(j) == before.column(j));
  }
}

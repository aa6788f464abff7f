#include <cmath>

#include "doctest.h"
#include "modslope/cyclofield.hpp"
#include "modslope/error.hpp"

using namespace modslope;
using namespace modslope::cyclo;

namespace {

// |disc(Phi_c)| from an independent computer-algebra evaluation.
const std::vector<std::pair<long, const char*>> kDisc = {
    {1, "1"},   {3, "3"},     {4, "4"},         {5, "125"},     {7, "16807"},    {8, "256"},
    {9, "19683"}, {11, "2357947691"}, {15, "1265625"}, {16, "16777216"}, {12, "144"}, {20, "4000000"}};

RingElement elem(std::vector<long> v) {
  RingElement e;
  for (long x : v) e.coeffs.emplace_back(x);
  return e;
}

}  // namespace

TEST_SUITE("cyclofield") {
  TEST_CASE("discriminants") {
    for (const auto& [c, disc] : kDisc) {
      CAPTURE(c);
      const auto K = make_field(c);
      CHECK(K.abs_discriminant == Int(disc));
      CHECK(discriminant_formula(c) == Int(disc));
      CHECK(determinant(trace_gram(K)) == Int(disc));
    }
  }

  TEST_CASE("discriminant gap") {
    for (long c : {1L, 3L, 4L, 5L, 7L, 8L, 9L, 11L, 12L, 15L, 16L, 20L}) {
      CAPTURE(c);
      const auto K = make_field(c);
      CHECK(std::fabs(discriminant_gap(K) - discriminant_gap_from_discriminant(K)) < 1e-9);
    }
    for (long c : {1L, 2L, 4L, 8L, 16L, 32L}) CHECK(discriminant_gap(make_field(c)) == 0.0);
    CHECK(discriminant_gap(make_field(3)) == doctest::Approx(-0.07192051811294523).epsilon(1e-13));
    CHECK(discriminant_gap(make_field(15)) == doctest::Approx(-0.1615284815101029).epsilon(1e-13));
  }

  TEST_CASE("signature and roots of unity") {
    const auto K = make_field(15);
    CHECK(K.degree == 8);
    CHECK(K.num_real == 0);
    CHECK(K.num_complex_pairs == 4);
    CHECK(K.mu == 30);
    CHECK(make_field(1).mu == 2);
    CHECK(make_field(4).mu == 4);
    CHECK(make_field(3).mu == 6);
    CHECK(make_field(5).mu == 10);
    CHECK_THROWS_AS(make_field(0), DomainError);
  }

  TEST_CASE("prime splitting") {
    for (long c : {3L, 5L, 8L, 12L, 15L, 16L})
      for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L}) {
        const auto s = split_prime(make_field(c), p);
        CHECK(s.e * s.f * s.g == make_field(c).degree);
      }
    const auto s = split_prime(make_field(16), 2);
    CHECK(s.e == 8);
    CHECK(split_prime(make_field(5), 11).g == 4);
    CHECK(split_prime(make_field(5), 2).f == 4);
  }

  TEST_CASE("Dedekind zeta log-derivative") {
    const auto Q = make_field(1), K4 = make_field(4), K3 = make_field(3);
    CHECK(zeta_log_derivative(Q, 2.0) == doctest::Approx(-0.5699609930945328).epsilon(1e-9));
    CHECK(zeta_log_derivative(K4, 2.0) == doctest::Approx(-0.4808957087266478).epsilon(1e-9));
    CHECK(zeta_log_derivative(K4, 3.0) == doctest::Approx(-0.1322335856651118).epsilon(1e-9));
    CHECK(zeta_log_derivative(K3, 2.0) == doctest::Approx(-0.3973121950146917).epsilon(1e-9));
    CHECK(zeta_log_derivative(K3, 3.0) == doctest::Approx(-0.0796714796378313).epsilon(1e-9));
    CHECK_THROWS_AS(zeta_log_derivative(Q, 1.0), DomainError);
    CHECK_THROWS_AS(zeta_log_derivative(Q, 0.5), DomainError);
  }

  TEST_CASE("prime sum agrees with the character sum within its tail bound") {
    for (long c : {1L, 3L, 8L, 16L})
      for (double s : {6.0, 8.0}) {
        const auto K = make_field(c);
        const double exact = zeta_log_derivative(K, s);
        const double partial = zeta_log_derivative_prime_sum(K, s, 2000);
        CHECK(std::fabs(exact - partial) <= prime_sum_tail_bound(K, s, 2000) + 1e-10);
      }
  }

  TEST_CASE("ring arithmetic") {
    const auto K4 = make_field(4), K3 = make_field(3);
    CHECK(ring_norm(K4, elem({1, 1})) == 2);
    CHECK(ring_mul(K3, elem({0, 1}), elem({0, 1})) == elem({-1, -1}));
    CHECK(ring_trace(K3, elem({1, 0})) == 2);
    CHECK(ring_trace(K3, elem({0, 1})) == -1);
    const auto K5 = make_field(5);
    const auto w = ring_omega_power(K5, 1);
    RingElement p = ring_from_int(K5, 1);
    for (int i = 0; i < 5; ++i) p = ring_mul(K5, p, w);
    CHECK(p == ring_from_int(K5, 1));
    CHECK(ring_mul(K5, w, ring_conj(K5, w)) == ring_from_int(K5, 1));
  }

  TEST_CASE("ideals") {
    const auto K4 = make_field(4);
    const auto I = ideal_sum_and_norm(K4, {elem({1, 1})});
    CHECK(I.norm == 2);
    CHECK(ideal_contains(I, ring_from_int(K4, 2)));
    CHECK_FALSE(ideal_contains(I, ring_from_int(K4, 1)));
    CHECK(ideal_sum_and_norm(K4, {elem({2, 0}), elem({3, 0})}).norm == 1);
  }
}

#include <cmath>
#include <cstdlib>

#include "doctest.h"
#include "modslope/labkit.hpp"
#include "modslope/predictor.hpp"

using namespace modslope;
using namespace modslope::lab;

namespace {

ExperimentSpec make(Kind k, std::vector<long> cs, std::vector<int> blocks, int trials) {
  ExperimentSpec s;
  s.kind = k;
  s.conductors = std::move(cs);
  s.block_sizes = std::move(blocks);
  s.trials = trials;
  return s;
}

}  // namespace

TEST_SUITE("labkit") {
  TEST_CASE("gh_gap schema and record count") {
    auto s = make(Kind::gh_gap, {3}, {}, 20);
    s.rank = 6;
    const auto res = run_experiment(s);
    CHECK(res.table.rows.size() == 20);
    const std::string csv = res.table.csv();
    CHECK(csv.substr(0, csv.find('\n')) == "conductor,d,r,trial,seed,ln_lambda1,pred_gap,emp_gap,schema_version");
    CHECK(res.summary["groups"][0]["pred_gap"].get<double>() == doctest::Approx(std::log(3.0) / 12));
  }

  TEST_CASE("single trial reports an undefined stderr") {
    auto s = make(Kind::gh_gap, {1}, {}, 1);
    s.rd = 10;
    const auto res = run_experiment(s);
    CHECK(res.table.rows.size() == 1);
    CHECK(res.summary["groups"][0]["emp_gap"]["stderr"].is_null());
  }

  TEST_CASE("output does not depend on the thread count") {
    auto s = make(Kind::index, {3, 8}, {2}, 12);
    setenv("MODSLOPE_THREADS", "1", 1);
    const std::string a = run_experiment(s).table.csv();
    setenv("MODSLOPE_THREADS", "3", 1);
    const std::string b = run_experiment(s).table.csv();
    unsetenv("MODSLOPE_THREADS");
    CHECK(a == b);
    s.seed = 2;
    CHECK(run_experiment(s).table.csv() != a);
  }

  TEST_CASE("skewness: zero over Q, nonpositive for imaginary quadratic fields") {
    for (const auto& r : exp_skewness(make(Kind::skewness, {1}, {2, 5}, 20))) CHECK(r.skew == 0.0);
    for (const auto& r : exp_skewness(make(Kind::skewness, {3, 4}, {2, 4}, 20))) CHECK(r.skew <= 1e-12);
    for (const auto& r : exp_skewness(make(Kind::skewness, {8}, {2}, 20))) CHECK(r.skew <= 1e-12);
  }

  TEST_CASE("index records are trivial for small conductors and never positive") {
    for (const auto& r : exp_index(make(Kind::index, {1, 3, 4, 5, 8, 15}, {2}, 30))) {
      CHECK(r.ideal_norm == 1);
      CHECK(r.index_gap == 0.0);
    }
    for (const auto& r : exp_index(make(Kind::index, {16}, {2}, 30))) CHECK(r.index_gap <= 0.0);
  }

  TEST_CASE("slope experiment: one row per seed") {
    auto s = make(Kind::slope, {3}, {8}, 2);
    s.rd = 24;
    const auto recs = exp_slope(s);
    CHECK(recs.size() == 2);
    CHECK(recs[0].betaK == 4);
    CHECK(recs[0].out_of_model);
  }

  TEST_CASE("unstructured q-ary lattices match the module determinant") {
    const auto K = cyclo::make_field(3);
    const auto L = unstructured_qary(K, 6, 3, 521, 4);
    const auto M = mbkz::generate_qary_module(K, 6, 3, 521, 4);
    CHECK(determinant(L.gram()) == determinant(M.zbasis.transpose() * M.zbasis));
    CHECK_FALSE(hnf_columns(L.basis()) == hnf_columns(M.zbasis));
  }

  TEST_CASE("obliviousness: identical seeds give identical slopes") {
    auto s = make(Kind::obliviousness, {4}, {6}, 1);
    s.rd = 20;
    const auto a = exp_obliviousness(s), b = exp_obliviousness(s);
    REQUIRE(a.size() == 2);
    CHECK(a[0].slope == b[0].slope);
    CHECK(a[1].slope == b[1].slope);
  }

  TEST_CASE("gain curve over Q is zero") {
    for (const auto& g : exp_gain_curve(make(Kind::gain_curve, {1}, {100, 200}, 1))) {
      CHECK(std::fabs(g.gain_lower) < 1e-5);
      CHECK(std::fabs(g.gain_upper) < 1e-5);
      CHECK(g.gain_asymptotic == 0.0);
    }
  }

  TEST_CASE("spherical sampling: trivial signatures") {
    const auto one = sample_spherical_skewness(1, 1, 0, 3, 1000, 1);
    CHECK(one.mean == 0.0);
    const auto iq = sample_spherical_skewness(2, 0, 1, 4, 20000, 1);
    CHECK(std::fabs(iq.mean) <= 3 * *iq.se + 1e-15);
  }

  TEST_CASE("spherical sampling agrees with the closed form") {
    const int sig[][3] = {{2, 0, 1}, {3, 1, 1}, {4, 0, 2}, {4, 4, 0}, {6, 2, 2}, {8, 0, 4}};
    for (const auto& g : sig)
      for (int b : {2, 4, 8}) {
        CAPTURE(g[0]);
        CAPTURE(b);
        const auto st = sample_spherical_skewness(g[0], g[1], g[2], b, 100000, 11);
        const double m = predict::skewness_model(g[0], g[1], g[2], b);
        CHECK(std::fabs(st.mean - m) <= 4 * *st.se + 1e-14);
      }
  }

  TEST_CASE("validation") {
    auto s = make(Kind::slope, {3}, {9}, 1);
    s.rd = 24;
    CHECK_THROWS_AS(validate(s), DomainError);
    s.block_sizes = {48};
    CHECK_THROWS(validate(s));
    CHECK_THROWS_AS(parse_kind("bogus"), DomainError);
    auto t = make(Kind::gh_gap, {6}, {}, 1);
    t.rd = 12;
    CHECK_THROWS_AS(validate(t), DomainError);
    t.conductors = {1};
    t.trials = 0;
    CHECK_THROWS_AS(validate(t), DomainError);
  }
}

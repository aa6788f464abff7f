#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "modslope/modbkz.hpp"

namespace {

struct Out {
  int code;
  std::string text;
};

Out run(const std::string& args) {
  const std::string cmd = std::string(MODSLOPE_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string s;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) s.append(buf, n);
  const int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, s};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

std::vector<std::string> cells(const std::string& l) {
  std::vector<std::string> out;
  std::stringstream ss(l);
  for (std::string c; std::getline(ss, c, ',');) out.push_back(c);
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("field-info") {
    const auto a = run("field-info 3");
    REQUIRE(a.code == 0);
    const auto j = nlohmann::json::parse(a.text);
    CHECK(j["t2"].get<double>() == doctest::Approx(-0.07192051811294523));
    CHECK(j["abs_discriminant"] == "3");
    CHECK(j["d"] == 2);
    CHECK(nlohmann::json::parse(run("field-info 8").text)["t2"].get<double>() == 0.0);
    CHECK(run("field-info 0").code == 2);
    CHECK(run("field-info").code == 2);
    CHECK(nlohmann::json::parse(run("--bits field-info 3").text)["t2"].get<double>() ==
          doctest::Approx(-0.07192051811294523 / std::log(2.0)));
  }

  TEST_CASE("predict") {
    const auto a = run("predict --c 1 --beta 60:80:10");
    REQUIRE(a.code == 0);
    const auto ls = lines(a.text);
    REQUIRE(ls.size() == 4);
    const auto r = cells(ls[1]);
    CHECK(r[8] == r[9]);
    CHECK(std::stod(r[8]) == doctest::Approx(-0.02284309112373253));
    CHECK(cells(ls[0]).back() == "schema_version");
    CHECK(run("predict --c 16 --beta 100").code == 2);
    CHECK(run("predict --c 16 --beta 100 --continuous").code == 0);
    CHECK(run("predict --c 16 --beta 1:2:x").code == 2);
  }

  TEST_CASE("gain") {
    const auto a = run("gain --c 16 --beta 400");
    REQUIRE(a.code == 0);
    const auto r = cells(lines(a.text)[1]);
    CHECK(std::stod(r[4]) == 7.0);
    const auto q = cells(lines(run("gain --c 1 --beta 100").text)[1]);
    CHECK(std::fabs(std::stod(q[2])) < 1e-5);
    CHECK(std::stod(q[4]) == 0.0);
    CHECK(run("gain --c 4 --beta 20").code == 3);
  }

  TEST_CASE("run-mbkz over Q is classical BKZ") {
    const auto a = run("run-mbkz --c 1 --r 30 --betaK 10 --seed 4");
    REQUIRE(a.code == 0);
    const auto j = nlohmann::json::parse(a.text);
    const auto M = modslope::mbkz::generate_qary_module(modslope::cyclo::make_field(1), 30, 15, 521, 4);
    const auto b = modslope::mbkz::bkz(modslope::lat::IntLattice(M.zbasis), 10);
    CHECK(j["final_slope"].get<double>() == b.final_slope);
    CHECK(j["ellQ"].size() == 30);
    CHECK(run("run-mbkz --c 4 --r 30 --betaK 40").code == 2);
  }

  TEST_CASE("experiment") {
    const auto a = run("experiment gh_gap --c 3 --r 12 --trials 200");
    REQUIRE(a.code == 0);
    CHECK(lines(a.text).size() == 201);
    const auto s = run("experiment skewness --c 1 --betaK 3 --trials 10");
    REQUIRE(s.code == 0);
    const auto ls = lines(s.text);
    for (std::size_t i = 1; i < ls.size(); ++i) CHECK(std::stod(cells(ls[i])[5]) == 0.0);
    CHECK(run("experiment bogus").code == 2);
    CHECK(run("experiment slope --c 3 --rd 24 --beta 9").code == 2);
  }

  TEST_CASE("experiment index over conductor 16 finds non-trivial ideals") {
    const auto a = run("experiment index --c 16 --betaK 2 --trials 1000");
    REQUIRE(a.code == 0);
    int neg = 0;
    const auto ls = lines(a.text);
    for (std::size_t i = 1; i < ls.size(); ++i) neg += std::stod(cells(ls[i])[6]) < 0;
    CHECK(neg > 0);
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "jflow/symfunc.hpp"
#include "oracle/checks.hpp"
#include "oracle/oracle.hpp"

TEST_CASE("brute-force sigma examples") {
  CHECK(oracle::sigma_bruteforce(2, std::vector<double>{1, 2, 3}) == 11.0);
  CHECK(oracle::sigma_bruteforce(4, std::vector<double>{1.5, -2, 3, 0.5}) == 1.5 * -2 * 3 * 0.5);
  CHECK(oracle::sigma_bruteforce(0, std::vector<double>{}) == 1.0);
}

TEST_CASE("Grassmann algebra basics") {
  const oracle::Form a = oracle::Form::identity(2);
  // A (1,1)-form commutes with itself; its square is nonzero in dimension 2.
  const auto sq = a.wedge(a);
  CHECK_FALSE(sq.terms().empty());
  CHECK(a.power(3).terms().empty());
}

TEST_CASE("wedge coefficient examples") {
  for (int n = 1; n <= 4; ++n) {
    const std::vector<double> lambda(static_cast<std::size_t>(n), 0.7);
    CHECK(oracle::wedge_top_coeff(0, lambda) == doctest::Approx(std::tgamma(n + 1.0)));
  }
  CHECK(oracle::wedge_top_coeff(1, std::vector<double>{1, 2}) == doctest::Approx(3.0));
  CHECK(oracle::wedge_top_coeff(2, std::vector<double>{1, 1, 2}) == doctest::Approx(10.0));
}

TEST_CASE("form positivity examples") {
  CHECK(oracle::form_positivity_n1(std::vector<double>{1, 2}, 0.75, 2, 1));
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto lambda = testgen::gamma_k_point(rng, 3, 2);
    CHECK_FALSE(oracle::form_positivity_n1(lambda, 0.0, 2, 1));
  }
}

TEST_CASE("observed orders") {
  const std::vector<double> e{1.0, 0.25, 0.0625};
  const auto o = oracle::observed_orders(e);
  REQUIRE(o.size() == 2);
  CHECK(o[0] == doctest::Approx(2.0));
  CHECK(o[1] == doctest::Approx(2.0));
}

TEST_CASE("every oracle cross-check passes") {
  for (std::uint64_t seed : {1ull, 20240611ull}) {
    for (const auto& r : oracle::run_oracle_checks(seed)) {
      CAPTURE(r.name);
      CAPTURE(r.detail);
      CHECK(r.passed);
    }
  }
}

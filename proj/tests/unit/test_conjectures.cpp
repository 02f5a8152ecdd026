#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>

#include "ecaliquot/conjectures.hpp"
#include "oracles.hpp"

using namespace ecaliquot;

TEST_CASE("ss_density: closed forms and validation") {
  const double e = std::numbers::e;
  CHECK(ss_density(e * e, 2) == doctest::Approx(e / 4).epsilon(1e-14));
  CHECK(ss_density(4, 1) == doctest::Approx(2 / std::log(4.0)).epsilon(1e-14));
  CHECK_THROWS_AS(ss_density(1.5, 2), std::invalid_argument);
  CHECK_THROWS_AS(ss_density(10, 0), std::invalid_argument);
  for (int L : {1, 2, 3}) {
    double last = ss_density(std::exp(2.0 * L), L);
    for (double X = std::exp(2.0 * L) * 1.1; X < 1e9; X *= 1.7) {
      const double v = ss_density(X, L);
      CHECK(v > last);
      last = v;
    }
  }
}

TEST_CASE("jones_integral: endpoints, quadrature oracle, monotone") {
  CHECK(jones_integral(2, 2) == 0.0);
  for (int L : {1, 2, 3}) {
    for (double X : {3.0, 10.0, 100.0, 1000.0}) {
      const auto f = [L](double t) { return 1.0 / (2 * std::sqrt(t) * std::pow(std::log(t), L)); };
      const double ref = oracle::midpoint_richardson(f, 2.0, X, 200000);
      INFO("L=" << L << " X=" << X);
      CHECK(std::abs(jones_integral(X, L) - ref) < 1e-8);
    }
    double last = 0;
    for (double X = 2.5; X < 1e8; X *= 3) {
      const double v = jones_integral(X, L);
      CHECK(v > last);
      last = v;
    }
  }
  CHECK_THROWS_AS(jones_integral(1.0, 2), std::invalid_argument);
}

TEST_CASE("c2 Euler factors: exact small primes") {
  CHECK(c2_euler_factor_exact(2) == ExactFraction{4, 9});
  CHECK(c2_euler_factor_exact(3) == ExactFraction{189, 256});
  CHECK(static_cast<double>(c2_euler_factor(2)) == doctest::Approx(4.0 / 9));
  CHECK_THROWS_AS(c2_euler_factor_exact(1), std::invalid_argument);
  CHECK_THROWS_AS(c2_euler_factor_exact(10001), std::invalid_argument);
  for (i64 ell : {5, 7, 97, 9973}) {
    const auto f = c2_euler_factor_exact(ell);
    CHECK(static_cast<double>(f.numerator) / static_cast<double>(f.denominator) ==
          doctest::Approx(static_cast<double>(c2_euler_factor(ell))).epsilon(1e-15));
    // 1 - 1/l^2 + O(l^-3)
    const double l = static_cast<double>(ell);
    CHECK(std::abs(static_cast<double>(c2_euler_factor(ell)) - (1 - 1 / (l * l))) < 10 / (l * l * l));
  }
}

TEST_CASE("jones_C2: partial products") {
  const auto s2 = jones_C2(2);
  CHECK(s2.cutoff == 2);
  CHECK(static_cast<double>(s2.euler_product) == doctest::Approx(4.0 / 9).epsilon(1e-15));
  CHECK(static_cast<double>(s2.partial_product) ==
        doctest::Approx(8.0 / (3 * std::numbers::pi * std::numbers::pi) * 4.0 / 9).epsilon(1e-15));
  CHECK(static_cast<double>(jones_C2(3).euler_product) == doctest::Approx(4.0 / 9 * 189.0 / 256).epsilon(1e-15));
  CHECK(jones_C2(10).cutoff == 7);
  CHECK_THROWS_AS(jones_C2(1), std::invalid_argument);

  const auto big = jones_C2(10000);
  CHECK(big.partial_product > 0);
  CHECK(big.tail_monotone);
  CHECK(std::abs(static_cast<double>(big.partial_product) - 0.077089) < 5e-5);
  // the partial products settle at rate ~1/cutoff
  const double g1 = static_cast<double>(c2_cauchy_gap(1000, 10000));
  const double g2 = static_cast<double>(c2_cauchy_gap(10000, 100000));
  CHECK(g1 > 0);
  CHECK(g2 < g1);
  CHECK(g1 < 5e-4);
}

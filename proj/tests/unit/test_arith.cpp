#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <random>

#include "ecaliquot/arith.hpp"
#include "oracles.hpp"

using namespace ecaliquot;

TEST_CASE("kronecker: stated values") {
  CHECK(kronecker(-3, 7) == 1);
  CHECK(kronecker(-3, 2) == -1);
  for (i64 d = -50; d <= 50; ++d) CHECK(kronecker(d, 1) == 1);
  CHECK(kronecker(1, 0) == 1);
  CHECK(kronecker(-1, 0) == 1);
  CHECK(kronecker(5, 0) == 0);
  CHECK(kronecker(4, 2) == 0);
}

TEST_CASE("kronecker: multiplicative in n, matches factorization oracle") {
  for (i64 d = -60; d <= 60; ++d) {
    for (i64 n = 1; n <= 60; ++n) {
      INFO("d=" << d << " n=" << n);
      REQUIRE(kronecker(d, static_cast<u64>(n)) == oracle::kronecker(d, n));
    }
  }
  // (−3/2k) = (−3/2)(−3/k) for odd k
  for (u64 k = 1; k < 200; k += 2) CHECK(kronecker(-3, 2 * k) == kronecker(-3, 2) * kronecker(-3, k));
}

TEST_CASE("kronecker: extreme arguments stay exact") {
  const i64 big = std::numeric_limits<i64>::min() + 1;
  CHECK(kronecker(big, 3) == kronecker(oracle::mod(big, 3), 3));
  CHECK(kronecker(-4, 1000000007ULL) == -1);  // 1e9+7 = 3 mod 4
}

TEST_CASE("is_prime: examples and trial-division agreement") {
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(1));
  CHECK(is_prime(2));
  CHECK(is_prime(1622471));
  for (u64 n = 0; n < 20000; ++n) REQUIRE(is_prime(n) == oracle::is_prime(static_cast<i64>(n)));
  // strong pseudoprimes to several small bases
  CHECK_FALSE(is_prime(3215031751ULL));
  CHECK_FALSE(is_prime(3825123056546413051ULL));
  CHECK(is_prime(18446744073709551557ULL));  // largest 64-bit prime
  CHECK_FALSE(is_prime(18446744073709551615ULL));
}

TEST_CASE("next_prime / prev_prime") {
  CHECK(next_prime(0) == 2);
  CHECK(next_prime(14) == 17);
  CHECK(next_prime(17) == 17);
  CHECK(prev_prime(1) == 0);
  CHECK(prev_prime(20) == 19);
}

TEST_CASE("primes_in: examples") {
  CHECK(primes_in(2, 10).primes == std::vector<u64>{2, 3, 5, 7});
  CHECK(primes_in(90, 96).empty());
  const auto list = primes_in(1000, 1100);
  CHECK(list.size() == 16);
  CHECK(list.primes.front() == 1009);
  CHECK_THROWS_AS(primes_in(1, 10), std::invalid_argument);
  CHECK_THROWS_AS(primes_in(10, 9), std::invalid_argument);
}

TEST_CASE("primes_in: complete, ascending and prime against trial division") {
  for (auto [lo, hi] : {std::pair<u64, u64>{2, 2}, {2, 3}, {2, 100000}, {99990, 100030}, {262100, 262200},
                        {2, 2 * kSieveBlock + 17}}) {
    const auto got = primes_in(lo, hi);
    std::vector<u64> expect;
    for (const i64 p : oracle::primes_between(static_cast<i64>(lo), static_cast<i64>(hi))) expect.push_back(static_cast<u64>(p));
    REQUIRE(got.primes == expect);
    CHECK(std::is_sorted(got.begin(), got.end()));
  }
}

TEST_CASE("primes_in: high segment near 10^12") {
  const u64 lo = 1000000000000ULL;
  const auto got = primes_in(lo, lo + 2000);
  std::vector<u64> expect;
  for (u64 n = lo; n <= lo + 2000; ++n) {
    if (oracle::is_prime(static_cast<i64>(n))) expect.push_back(n);
  }
  CHECK(got.primes == expect);
}

TEST_CASE("HasseWindow: exact predicate and bounds") {
  CHECK_THROWS_AS(HasseWindow(3), std::invalid_argument);
  for (i64 p = 5; p < 3000; ++p) {
    if (!is_prime(static_cast<u64>(p))) continue;
    const HasseWindow w(p);
    for (i64 q = p - 200; q <= p + 200; ++q) {
      const bool inside = (q - p - 1) * (q - p - 1) < 4 * p;
      REQUIRE(w.contains(q) == inside);
      if (inside) {
        CHECK(std::abs(static_cast<double>(q - p)) <= 2 * std::sqrt(static_cast<double>(p)) + 1);
        CHECK(q >= w.first());
        CHECK(q <= w.last());
      }
    }
    CHECK(w.contains(w.first()));
    CHECK(w.contains(w.last()));
    CHECK_FALSE(w.contains(w.first() - 1));
    CHECK_FALSE(w.contains(w.last() + 1));
  }
  // a square modulus puts the endpoint exactly on the boundary: p = 25 is not
  // prime, but the constructor only needs p > 3 for the interval itself
  const HasseWindow w25(25);
  CHECK_FALSE(w25.contains(16));
  CHECK(w25.contains(17));
}

TEST_CASE("hasse_primes: examples") {
  CHECK(hasse_primes(13).primes == std::vector<u64>{7, 11, 13, 17, 19});
  CHECK(hasse_primes(5).primes == std::vector<u64>{2, 3, 5, 7});
  CHECK_THROWS_AS(hasse_primes(3), std::invalid_argument);
}

// The suspected asymmetry does not exist: with d = q - p, (d + 1)^2 < 4(p + d)
// expands to (d - 1)^2 < 4p, so the exhaustive scan finds no counterexample.
TEST_CASE("hasse window membership is symmetric") {
  for (i64 p = 5; p <= 100; ++p) {
    for (i64 q = 5; q <= 150; ++q) REQUIRE(HasseWindow(p).contains(q) == HasseWindow(q).contains(p));
  }
}

TEST_CASE("quadratic_char_sum: examples") {
  CHECK(quadratic_char_sum(1, 0, 0, 7) == 6);
  CHECK(quadratic_char_sum(1, 0, 1, 5) == -1);
  for (i64 ell : {3, 5, 7, 11}) CHECK(quadratic_char_sum(1, 4 * 13, 0, ell) == -1);
  CHECK_THROWS_AS(quadratic_char_sum(1, 0, 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(quadratic_char_sum(1, 0, 0, 9), std::invalid_argument);
  CHECK_THROWS_AS(quadratic_char_sum(7, 0, 0, 7), std::invalid_argument);
}

TEST_CASE("quadratic_char_sum: closed form equals brute force") {
  for (i64 ell : {3, 5, 7, 11, 13}) {
    for (i64 a = 1; a < ell; ++a) {
      for (i64 b = -ell; b < ell; ++b) {
        for (i64 c = 0; c < ell; ++c) REQUIRE(quadratic_char_sum(a, b, c, ell) == oracle::char_sum(a, b, c, ell));
      }
    }
  }
}

TEST_CASE("QuadraticCharacterTable matches Legendre symbols") {
  for (u64 p : {3ULL, 5ULL, 101ULL, 997ULL}) {
    const QuadraticCharacterTable chi(p);
    for (u64 x = 0; x < p; ++x) REQUIRE(chi(x) == oracle::legendre(static_cast<i64>(x), static_cast<i64>(p)));
  }
  CHECK_THROWS_AS(QuadraticCharacterTable(9), std::invalid_argument);
}

TEST_CASE("sample_primes_log_uniform: reproducible, in range, prime") {
  const auto a = sample_primes_log_uniform(50, 1000, 10000, 0);
  const auto b = sample_primes_log_uniform(50, 1000, 10000, 0);
  const auto c = sample_primes_log_uniform(50, 1000, 10000, 1);
  CHECK(a == b);
  CHECK(a != c);
  for (u64 p : a) {
    CHECK(is_prime(p));
    CHECK(p >= 1000);
    CHECK(p <= 10000);
  }
  CHECK_THROWS_AS(sample_primes_log_uniform(1, 24, 28, 0), std::invalid_argument);
}

TEST_CASE("isqrt and powmod") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    const u64 n = rng();
    const u64 r = isqrt(n);
    REQUIRE(static_cast<u128>(r) * r <= n);
    REQUIRE(static_cast<u128>(r + 1) * (r + 1) > n);
  }
  CHECK(isqrt(std::numeric_limits<u64>::max()) == 4294967295ULL);
  CHECK(powmod(2, 10, 1000) == 24);
  CHECK(powmod(5, 0, 1) == 0);
}

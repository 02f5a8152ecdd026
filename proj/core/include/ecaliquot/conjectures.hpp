#pragma once

// Reference densities for the number of aliquot cycles up to X.

#include <cstdint>

#include "ecaliquot/arith.hpp"

namespace ecaliquot {

/// sqrt(X) / (log X)^L. Requires X >= 2, L >= 1.
double ss_density(double X, int L);

/// Integral from 2 to X of dt / (2 sqrt(t) (log t)^L), absolute error <= 1e-10.
double jones_integral(double X, int L);

/// An exact rational, for Euler factors of small primes.
struct ExactFraction {
  i128 numerator;
  i128 denominator;

  friend bool operator==(const ExactFraction&, const ExactFraction&) = default;
};

/// l^2 (l^4 - 2l^3 - 2l^2 + 3l + 3) / ((l^2 - 1)(l - 1))^2, reduced. Valid for l <= 10^4.
ExactFraction c2_euler_factor_exact(i64 ell);
long double c2_euler_factor(i64 ell);

struct EulerProductState {
  i64 cutoff;                   // largest prime included
  long double euler_product;    // product of factors over primes <= cutoff
  long double partial_product;  // 8/(3 pi^2) times euler_product
  long double last_factor;
  bool tail_monotone;           // |factor - 1| non-increasing for every prime > 3 seen
};

/// Partial C_2 product over primes l <= cutoff (cutoff >= 2), accumulated in
/// ascending prime order in extended precision.
EulerProductState jones_C2(i64 cutoff);

/// |P(hi) - P(lo)| / P(hi) for the partial products at two cutoffs.
long double c2_cauchy_gap(i64 lo_cutoff, i64 hi_cutoff);

}  // namespace ecaliquot

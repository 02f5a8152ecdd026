#include "ecaliquot/conjectures.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ecaliquot {

namespace {

void require_range(double X, int L, const char* where) {
  if (!(X >= 2.0)) throw std::invalid_argument(std::string(where) + ": X must be at least 2");
  if (L < 1) throw std::invalid_argument(std::string(where) + ": L must be at least 1");
}

template <typename F>
long double simpson_step(F& f, long double a, long double fa, long double b, long double fb, long double m,
                         long double fm, long double whole, long double tol, int depth) {
  const long double lm = (a + m) / 2;
  const long double rm = (m + b) / 2;
  const long double flm = f(lm);
  const long double frm = f(rm);
  const long double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const long double right = (b - m) / 6 * (fm + 4 * frm + fb);
  const long double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15 * tol) return left + right + delta / 15;
  return simpson_step(f, a, fa, m, fm, lm, flm, left, tol / 2, depth - 1) +
         simpson_step(f, m, fm, b, fb, rm, frm, right, tol / 2, depth - 1);
}

template <typename F>
long double adaptive_simpson(F f, long double a, long double b, long double tol) {
  const long double m = (a + b) / 2;
  const long double fa = f(a);
  const long double fb = f(b);
  const long double fm = f(m);
  const long double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return simpson_step(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

i128 ipow(i128 base, int e) {
  i128 r = 1;
  while (e-- > 0) r *= base;
  return r;
}

}  // namespace

double ss_density(double X, int L) {
  require_range(X, L, "ss_density");
  return std::sqrt(X) / std::pow(std::log(X), L);
}

double jones_integral(double X, int L) {
  require_range(X, L, "jones_integral");
  if (X == 2.0) return 0.0;
  // t = u^2 turns the integrand into du / (2 log u)^L on [sqrt 2, sqrt X]
  auto f = [L](long double u) { return 1.0L / std::pow(2.0L * std::log(u), L); };
  const long double a = std::sqrt(2.0L);
  const long double b = std::sqrt(static_cast<long double>(X));
  constexpr int kPanels = 64;
  const long double ratio = std::pow(b / a, 1.0L / kPanels);
  long double total = 0.0L;
  long double lo = a;
  for (int i = 0; i < kPanels; ++i) {
    const long double hi = (i + 1 == kPanels) ? b : lo * ratio;
    total += adaptive_simpson(f, lo, hi, 1e-13L);
    lo = hi;
  }
  return static_cast<double>(total);
}

ExactFraction c2_euler_factor_exact(i64 ell) {
  if (ell < 2 || ell > 10000) throw std::invalid_argument("c2_euler_factor_exact: need 2 <= l <= 10^4");
  const i128 l = ell;
  const i128 num = l * l * (ipow(l, 4) - 2 * ipow(l, 3) - 2 * l * l + 3 * l + 3);
  const i128 inner = (l * l - 1) * (l - 1);
  const i128 den = inner * inner;
  const i128 g = gcd128(num, den);
  return ExactFraction{num / g, den / g};
}

long double c2_euler_factor(i64 ell) {
  const long double l = static_cast<long double>(ell);
  const long double num = l * l * (l * l * l * l - 2 * l * l * l - 2 * l * l + 3 * l + 3);
  const long double inner = (l * l - 1) * (l - 1);
  return num / (inner * inner);
}

EulerProductState jones_C2(i64 cutoff) {
  if (cutoff < 2) throw std::invalid_argument("jones_C2: cutoff must be at least 2");
  EulerProductState state{cutoff, 1.0L, 0.0L, 1.0L, true};
  long double prev_gap = -1.0L;
  i64 largest = 2;
  for (const u64 ell : primes_in(2, static_cast<u64>(cutoff))) {
    const long double factor = c2_euler_factor(static_cast<i64>(ell));
    state.euler_product *= factor;
    state.last_factor = factor;
    largest = static_cast<i64>(ell);
    if (ell > 3) {
      const long double gap = std::fabs(factor - 1.0L);
      if (prev_gap >= 0.0L && gap > prev_gap) state.tail_monotone = false;
      prev_gap = gap;
    }
  }
  state.cutoff = largest;
  state.partial_product = 8.0L / (3.0L * std::numbers::pi_v<long double> * std::numbers::pi_v<long double>) *
                          state.euler_product;
  return state;
}

long double c2_cauchy_gap(i64 lo_cutoff, i64 hi_cutoff) {
  const long double lo = jones_C2(lo_cutoff).partial_product;
  const long double hi = jones_C2(hi_cutoff).partial_product;
  return std::fabs(hi - lo) / hi;
}

}  // namespace ecaliquot

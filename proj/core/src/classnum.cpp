#include "ecaliquot/classnum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ecaliquot {

namespace {

void require_negative(i64 D, const char* where) {
  if (D >= 0) throw std::invalid_argument(std::string(where) + ": D must be negative, got " + std::to_string(D));
}

// Contribution of a reduced form with middle coefficient b to the count of
// reduced forms: (a, +-b, c) are distinct classes unless b = 0, a = b or a = c.
constexpr int form_weight(i64 a, i64 b, i64 c) noexcept {
  return (b == 0 || a == b || a == c) ? 1 : 2;
}

}  // namespace

Discriminant::Discriminant(i64 value) : value_(value) {
  if (!is_valid(value)) {
    throw std::invalid_argument("not a negative discriminant: " + std::to_string(value));
  }
}

bool Discriminant::is_valid(i64 value) noexcept {
  if (value >= 0) return false;
  const i64 r = mod_floor(value, 4);
  return r == 0 || r == 1;
}

HurwitzValue HurwitzValue::from_twelfths(i64 twelve_h) {
  const i64 g = std::gcd(twelve_h, i64{12});
  return HurwitzValue{twelve_h / g, 12 / g};
}

i64 class_number_h(Discriminant disc) {
  const i64 d = disc.value();
  const i64 n = -d;
  i64 count = 0;
  // b has the parity of d; reduced forms satisfy 3 b^2 <= |d|
  for (i64 b = (n & 1); 3 * b * b <= n; b += 2) {
    const i64 q = (b * b + n) / 4;  // = a c
    for (i64 a = std::max<i64>(b, 1); a * a <= q; ++a) {
      if (q % a != 0) continue;
      const i64 c = q / a;
      if (std::gcd(std::gcd(a, b), c) != 1) continue;
      count += form_weight(a, b, c);
    }
  }
  return count;
}

int roots_of_unity_w(Discriminant d) {
  if (d.value() == -3) return 6;
  if (d.value() == -4) return 4;
  return 2;
}

HurwitzValue hurwitz_H(i64 D) {
  require_negative(D, "hurwitz_H");
  if (!Discriminant::is_valid(D)) return HurwitzValue{0, 1};
  const i64 n = -D;
  i64 twelfths = 0;
  for (i64 f = 1; f * f <= n; ++f) {
    if (n % (f * f) != 0) continue;
    const i64 sub = D / (f * f);
    if (!Discriminant::is_valid(sub)) continue;
    const Discriminant d(sub);
    twelfths += class_number_h(d) * (12 / roots_of_unity_w(d));
  }
  return HurwitzValue::from_twelfths(twelfths);
}

FundamentalDecomposition fundamental_decomposition(Discriminant disc) {
  i64 n = -disc.value();
  i64 squarefree = 1;
  i64 root = 1;
  for (i64 q = 2; q * q <= n; ++q) {
    int e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) root *= q;
    if (e & 1) squarefree *= q;
  }
  squarefree *= n;
  const i64 s = -squarefree;
  if (mod_floor(s, 4) == 1) return {s, root};
  return {4 * s, root / 2};
}

bool is_fundamental_discriminant(i64 d) noexcept {
  if (!Discriminant::is_valid(d)) return false;
  return fundamental_decomposition(Discriminant(d)).f == 1;
}

LValue dirichlet_L1(Discriminant D) {
  const double h = static_cast<double>(class_number_h(D));
  const double w = roots_of_unity_w(D);
  const double value = 2.0 * std::numbers::pi * h / (w * std::sqrt(static_cast<double>(-D.value())));
  return LValue{D.value(), LMethod::kFormsFormula, 0.0, value};
}

LValue dirichlet_L1_series(Discriminant D) {
  constexpr i64 kPeriods = 32;
  const i64 k = -D.value();
  std::vector<int> chi(static_cast<std::size_t>(k) + 1);
  for (i64 r = 1; r <= k; ++r) chi[static_cast<std::size_t>(r)] = kronecker(D.value(), static_cast<u64>(r));

  long double partial = 0.0L;
  for (i64 m = 0; m < kPeriods; ++m) {
    const i64 base = m * k;
    for (i64 r = 1; r <= k; ++r) {
      const int c = chi[static_cast<std::size_t>(r)];
      if (c != 0) partial += static_cast<long double>(c) / static_cast<long double>(base + r);
    }
  }

  // Tail sum_{j >= 0} 1/(N + r + j k) per residue r. The divergent log parts
  // cancel because chi sums to zero over a period.
  const long double N = static_cast<long double>(kPeriods * k);
  const long double kk = static_cast<long double>(k);
  long double tail = 0.0L;
  for (i64 r = 1; r <= k; ++r) {
    const int c = chi[static_cast<std::size_t>(r)];
    if (c == 0) continue;
    const long double x = N + static_cast<long double>(r);
    const long double x2 = x * x;
    const long double term = -std::log(x) / kk + 0.5L / x + kk / (12.0L * x2) - kk * kk * kk / (120.0L * x2 * x2);
    tail += static_cast<long double>(c) * term;
  }
  return LValue{D.value(), LMethod::kSeries, 0.0, static_cast<double>(partial + tail)};
}

double truncated_L1(i64 D, double y, std::span<const u64> primes) {
  long double product = 1.0L;
  for (const u64 ell : primes) {
    if (static_cast<double>(ell) > y) break;
    const int c = kronecker(D, ell);
    if (c == 0) continue;
    product /= 1.0L - static_cast<long double>(c) / static_cast<long double>(ell);
  }
  return static_cast<double>(product);
}

LValue truncated_L1(i64 D, double y) {
  if (!(y > 1.0)) throw std::invalid_argument("truncated_L1: y must exceed 1");
  double value = 1.0;
  if (y >= 2.0) {
    const auto primes = primes_in(2, static_cast<u64>(std::floor(y)));
    value = truncated_L1(D, y, primes.primes);
  }
  return LValue{D, LMethod::kTruncated, y, value};
}

GsReport gs_truncation_report(i64 Q, double alpha, const GsOptions& options) {
  if (Q < 3) throw std::invalid_argument("gs_truncation_report: Q must be at least 3");
  if (!(alpha >= 1.0)) {
    throw std::invalid_argument("gs_truncation_report: alpha must be at least 1");
  }
  GsReport report{};
  report.Q = Q;
  report.alpha = alpha;
  const double logQ = std::log(static_cast<double>(Q));
  const double nominal_y = std::pow(logQ, 8.0 * alpha * alpha * options.exponent_scale);
  report.y_capped = nominal_y > options.y_cap;
  report.y = std::min(nominal_y, options.y_cap);
  report.threshold = std::pow(logQ, -alpha);
  report.allowed = std::pow(static_cast<double>(Q), 2.0 / alpha);

  std::vector<u64> primes;
  if (report.y >= 2.0) primes = primes_in(2, static_cast<u64>(std::floor(report.y))).primes;

  // Local factors (1 -+ 1/l)^-1, shared by every d. chi_d is a character mod |d|
  // for fundamental d, so one table per d replaces a Kronecker evaluation per prime.
  std::vector<long double> when_plus(primes.size());
  std::vector<long double> when_minus(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const auto ell = static_cast<long double>(primes[i]);
    when_plus[i] = ell / (ell - 1.0L);
    when_minus[i] = ell / (ell + 1.0L);
  }
  std::vector<int> chi;

  double total = 0.0;
  for (i64 d = -3; d >= -Q; --d) {
    if (!is_fundamental_discriminant(d)) continue;
    const double full = dirichlet_L1(Discriminant(d)).value;
    const auto k = static_cast<u64>(-d);
    chi.resize(k);
    for (u64 r = 0; r < k; ++r) chi[r] = kronecker(d, r);
    long double product = 1.0L;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      const int c = chi[primes[i] % k];
      if (c > 0) product *= when_plus[i];
      else if (c < 0) product *= when_minus[i];
    }
    const auto trunc = static_cast<double>(product);
    const double err = std::abs(full / trunc - 1.0);
    report.rows.push_back(GsRow{d, full, trunc, err});
    total += err;
    report.max_error = std::max(report.max_error, err);
    if (err > report.threshold) ++report.exceptional;
  }
  report.mean_error = report.rows.empty() ? 0.0 : total / static_cast<double>(report.rows.size());
  return report;
}

ClassNumberTable::ClassNumberTable(i64 max_abs) : max_abs_(max_abs), h_(static_cast<std::size_t>(max_abs) + 1, 0) {
  if (max_abs < 3) throw std::invalid_argument("ClassNumberTable: max_abs must be at least 3");
  // reduced (a, b, c): -a < b <= a <= c, b >= 0 when a = c; |d| = 4ac - b^2 >= 3a^2
  for (i64 a = 1; 3 * a * a <= max_abs; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      const i64 c_first = (b < 0) ? a + 1 : a;
      for (i64 c = c_first;; ++c) {
        const i64 n = 4 * a * c - b * b;
        if (n > max_abs) break;
        if (std::gcd(std::gcd(a, b < 0 ? -b : b), c) != 1) continue;
        ++h_[static_cast<std::size_t>(n)];
      }
    }
  }
}

i64 ClassNumberTable::h(i64 D) const {
  if (D >= 0 || -D > max_abs_) {
    throw std::out_of_range("ClassNumberTable::h: discriminant " + std::to_string(D) + " outside table");
  }
  return h_[static_cast<std::size_t>(-D)];
}

HurwitzValue ClassNumberTable::H(i64 D) const {
  require_negative(D, "ClassNumberTable::H");
  if (!Discriminant::is_valid(D)) return HurwitzValue{0, 1};
  const i64 n = -D;
  i64 twelfths = 0;
  for (i64 f = 1; f * f <= n; ++f) {
    if (n % (f * f) != 0) continue;
    const i64 sub = D / (f * f);
    if (!Discriminant::is_valid(sub)) continue;
    twelfths += h(sub) * (12 / roots_of_unity_w(Discriminant(sub)));
  }
  return HurwitzValue::from_twelfths(twelfths);
}

}  // namespace ecaliquot

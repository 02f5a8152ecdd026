#include "ecaliquot/arith.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace ecaliquot {

u64 isqrt(u64 n) noexcept {
  if (n == 0) return 0;
  auto r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  // long double sqrt can be off by one near 2^64
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

u64 mulmod(u64 a, u64 b, u64 m) noexcept {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod(u64 base, u64 exp, u64 m) noexcept {
  u64 result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1U) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

namespace {

// Jacobi symbol (a/n) for odd n >= 1, 0 <= a < n.
int jacobi(u64 a, u64 n) noexcept {
  int sign = 1;
  while (a != 0) {
    const int tz = std::countr_zero(a);
    a >>= tz;
    const u64 n8 = n & 7U;
    if ((tz & 1) && (n8 == 3 || n8 == 5)) sign = -sign;
    // reciprocity
    if ((a & 3U) == 3 && (n & 3U) == 3) sign = -sign;
    const u64 r = n % a;
    n = a;
    a = r;
  }
  return n == 1 ? sign : 0;
}

}  // namespace

int kronecker(i64 d, u64 n) noexcept {
  if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
  int sign = 1;
  if ((n & 1U) == 0) {
    if ((d & 1) == 0) return 0;
    const int v = std::countr_zero(n);
    n >>= v;
    if (v & 1) {
      const i64 d8 = mod_floor(d, 8);
      if (d8 == 3 || d8 == 5) sign = -sign;
    }
  }
  if (n == 1) return sign;
  const i128 r = static_cast<i128>(d) % static_cast<i128>(n);
  const u64 a = static_cast<u64>(r < 0 ? r + static_cast<i128>(n) : r);
  return sign * jacobi(a, n);
}

bool is_prime(u64 n) noexcept {
  if (n < 2) return false;
  static constexpr std::array<u64, 12> kSmall{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (const u64 q : kSmall) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  if (n < 41 * 41) return true;

  const int s = std::countr_zero(n - 1);
  const u64 d = (n - 1) >> s;
  // Jim Sinclair's witness set, deterministic below 2^64.
  static constexpr std::array<u64, 7> kWitnesses{2, 325, 9375, 28178, 450775, 9780504, 1795265022};
  for (const u64 w : kWitnesses) {
    const u64 a = w % n;
    if (a == 0) continue;
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

u64 next_prime(u64 n) noexcept {
  if (n <= 2) return 2;
  u64 c = n | 1U;
  while (!is_prime(c)) c += 2;
  return c;
}

u64 prev_prime(u64 n) noexcept {
  for (u64 c = n; c >= 2; --c) {
    if (is_prime(c)) return c;
  }
  return 0;
}

std::vector<u64> sample_primes_log_uniform(std::size_t count, u64 lo, u64 hi, u64 seed) {
  if (lo < 2 || hi < lo || prev_prime(hi) < lo) {
    throw std::invalid_argument("sample_primes_log_uniform: [lo, hi] must contain a prime");
  }
  std::mt19937_64 rng(seed);
  const double log_lo = std::log(static_cast<double>(lo));
  const double log_hi = std::log(static_cast<double>(hi));
  std::vector<u64> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double x = std::exp(log_lo + u * (log_hi - log_lo));
    u64 p = next_prime(std::max<u64>(lo, static_cast<u64>(std::ceil(x))));
    if (p > hi) p = prev_prime(hi);
    out.push_back(p);
  }
  return out;
}

PrimeList primes_in(u64 lo, u64 hi) {
  if (lo < 2 || hi < lo) {
    throw std::invalid_argument("primes_in: need 2 <= lo <= hi, got lo=" + std::to_string(lo) +
                                " hi=" + std::to_string(hi));
  }
  PrimeList out{lo, hi, {}};

  const u64 root = isqrt(hi);
  std::vector<std::uint8_t> small(root + 1, 1);
  std::vector<u64> base;
  for (u64 i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (u64 j = i * i; j <= root; j += i) small[j] = 0;
  }

  std::vector<std::uint8_t> block(kSieveBlock);
  for (u64 start = lo;; start += kSieveBlock) {
    const u64 stop = std::min<u64>(hi, start + (kSieveBlock - 1));
    const std::size_t len = static_cast<std::size_t>(stop - start + 1);
    std::fill_n(block.begin(), len, 1);
    for (const u64 q : base) {
      if (q * q > stop) break;
      u64 first = std::max(q * q, (start + q - 1) / q * q);
      for (u64 j = first; j <= stop; j += q) block[j - start] = 0;
    }
    for (std::size_t i = 0; i < len; ++i) {
      if (block[i]) out.primes.push_back(start + i);
    }
    if (stop == hi) break;
  }
  return out;
}

HasseWindow::HasseWindow(i64 p) : p_(p) {
  if (p <= 3) throw std::invalid_argument("HasseWindow: p must exceed 3");
  const i64 r = static_cast<i64>(isqrt(static_cast<u64>(4 * p)));
  first_ = p + 1 - r;
  last_ = p + 1 + r;
  // r^2 == 4p only when p is a square; keep the interval open regardless
  if (!contains(first_)) ++first_;
  if (!contains(last_)) --last_;
}

bool HasseWindow::contains(i64 q) const noexcept {
  const i128 delta = static_cast<i128>(q) - p_ - 1;
  return delta * delta < static_cast<i128>(4) * p_;
}

PrimeList hasse_primes(i64 p) {
  const HasseWindow window(p);
  const u64 lo = static_cast<u64>(std::max<i64>(2, window.first()));
  const u64 hi = static_cast<u64>(window.last());
  PrimeList out{lo, hi, {}};
  for (u64 q = lo; q <= hi; ++q) {
    if (window.contains(static_cast<i64>(q)) && is_prime(q)) out.primes.push_back(q);
  }
  return out;
}

i64 quadratic_char_sum(i64 a, i64 b, i64 c, i64 ell) {
  if (ell < 3 || (ell & 1) == 0 || !is_prime(static_cast<u64>(ell))) {
    throw std::invalid_argument("quadratic_char_sum: modulus must be an odd prime");
  }
  if (mod_floor(a, ell) == 0) {
    throw std::invalid_argument("quadratic_char_sum: leading coefficient divisible by modulus");
  }
  const int chi_a = kronecker(a, static_cast<u64>(ell));
  const i128 disc = static_cast<i128>(b) * b - static_cast<i128>(4) * a * c;
  if (mod_floor128(disc, ell) == 0) return chi_a * (ell - 1);
  return -chi_a;
}

QuadraticCharacterTable::QuadraticCharacterTable(u64 p) : p_(p), chi_(p, -1) {
  if (p < 3 || !is_prime(p)) throw std::invalid_argument("QuadraticCharacterTable: need an odd prime");
  chi_[0] = 0;
  for (u64 x = 1; x <= p / 2; ++x) chi_[mulmod(x, x, p)] = 1;
}

}  // namespace ecaliquot

#pragma once

// Integer and modular arithmetic primitives shared by every other module.

#include <cstdint>
#include <span>
#include <vector>

namespace ecaliquot {

using i64 = std::int64_t;
using u64 = std::uint64_t;
__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

/// Least nonnegative residue of a modulo m (m > 0).
constexpr i64 mod_floor(i64 a, i64 m) noexcept {
  const i64 r = a % m;
  return r < 0 ? r + m : r;
}

/// Least nonnegative residue of a 128-bit value modulo m (m > 0).
constexpr i64 mod_floor128(i128 a, i64 m) noexcept {
  const i128 r = a % m;
  return static_cast<i64>(r < 0 ? r + m : r);
}

/// floor(sqrt(n)), exact for the full 64-bit range.
u64 isqrt(u64 n) noexcept;

u64 mulmod(u64 a, u64 b, u64 m) noexcept;
u64 powmod(u64 base, u64 exp, u64 m) noexcept;

/// Kronecker symbol (d/n), including n = 0, n = 2 and negative d.
int kronecker(i64 d, u64 n) noexcept;

/// Deterministic Miller-Rabin; exact for every n < 2^64.
bool is_prime(u64 n) noexcept;

/// Smallest prime >= n (n < 2^64 - 59).
u64 next_prime(u64 n) noexcept;

struct PrimeList {
  u64 lo = 2;
  u64 hi = 2;
  std::vector<u64> primes;

  [[nodiscard]] bool empty() const noexcept { return primes.empty(); }
  [[nodiscard]] std::size_t size() const noexcept { return primes.size(); }
  [[nodiscard]] auto begin() const noexcept { return primes.begin(); }
  [[nodiscard]] auto end() const noexcept { return primes.end(); }
};

/// Largest prime <= n, or 0 if there is none.
u64 prev_prime(u64 n) noexcept;

/// `count` primes drawn log-uniformly from [lo, hi] with a seeded mt19937_64:
/// x = exp(log lo + u (log hi - log lo)), then the next prime >= x (or the
/// largest prime <= hi). Reproducible for a given seed on every platform.
std::vector<u64> sample_primes_log_uniform(std::size_t count, u64 lo, u64 hi, u64 seed);

/// Segmented sieve block, in flags.
inline constexpr std::size_t kSieveBlock = std::size_t{1} << 18;

/// All primes in [lo, hi], ascending. Throws std::invalid_argument unless 2 <= lo <= hi.
PrimeList primes_in(u64 lo, u64 hi);

/// The open Hasse interval (p+1-2sqrt(p), p+1+2sqrt(p)) of a prime p > 3,
/// tested with the exact predicate (q-p-1)^2 < 4p.
class HasseWindow {
 public:
  explicit HasseWindow(i64 p);

  [[nodiscard]] i64 p() const noexcept { return p_; }
  [[nodiscard]] bool contains(i64 q) const noexcept;
  /// Smallest and largest integers inside the window.
  [[nodiscard]] i64 first() const noexcept { return first_; }
  [[nodiscard]] i64 last() const noexcept { return last_; }

 private:
  i64 p_;
  i64 first_;
  i64 last_;
};

/// Primes q with (q-p-1)^2 < 4p; p itself is included. Requires p > 3.
PrimeList hasse_primes(i64 p);

/// Sum over t mod ell of ((a t^2 + b t + c) / ell), via the closed form.
/// ell must be an odd prime and a must be a unit mod ell.
i64 quadratic_char_sum(i64 a, i64 b, i64 c, i64 ell);

/// Table of the quadratic character modulo an odd prime p.
class QuadraticCharacterTable {
 public:
  explicit QuadraticCharacterTable(u64 p);

  [[nodiscard]] u64 modulus() const noexcept { return p_; }
  /// (x/p) for a residue x in [0, p).
  [[nodiscard]] int operator()(u64 x) const noexcept { return chi_[x]; }
  [[nodiscard]] std::span<const std::int8_t> values() const noexcept { return chi_; }

 private:
  u64 p_;
  std::vector<std::int8_t> chi_;
};

}  // namespace ecaliquot

#pragma once

// Aliquot cycles of a fixed curve E/Q: tuples (p_1, ..., p_L) of distinct
// primes of good reduction with #E(F_{p_i}) = p_{i+1}, indices mod L.

#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ecaliquot/curves.hpp"

namespace ecaliquot {

struct AliquotCycle {
  std::vector<i64> primes;  // normalized: primes.front() is the minimum

  [[nodiscard]] std::size_t length() const noexcept { return primes.size(); }
  friend auto operator<=>(const AliquotCycle&, const AliquotCycle&) = default;
};

struct CycleSearchConfig {
  int length = 2;    // L >= 1
  i64 X = 100;       // bound on the leading prime
  i64 min_prime = 5;

  /// Throws std::invalid_argument if length < 1 or min_prime < 5.
  void validate() const;
};

/// Raised when a chain value would leave the signed 64-bit range.
class ChainOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// #E(F_p) for p > 3, or std::nullopt when E has bad reduction at p.
std::optional<i64> aliquot_step(const CurveZ& curve, i64 p, const CharacterTableSet* tables = nullptr);

/// All normalized aliquot cycles of length cfg.length with leading prime <= cfg.X,
/// sorted by leading prime. The result does not depend on `jobs`.
std::vector<AliquotCycle> find_aliquot_cycles(const CurveZ& curve, const CycleSearchConfig& cfg, unsigned jobs = 1,
                                              const CharacterTableSet* tables = nullptr);

/// pi_{E,L}(X): the number of cycles find_aliquot_cycles returns.
std::size_t pi_E_L(const CurveZ& curve, const CycleSearchConfig& cfg, unsigned jobs = 1,
                   const CharacterTableSet* tables = nullptr);

/// #{5 <= p <= X good : #E(F_p) is prime}.
std::size_t pi_E_twin(const CurveZ& curve, i64 X, unsigned jobs = 1);

/// Good primes 5 <= p <= X with #E(F_p) = p.
std::vector<i64> anomalous_primes(const CurveZ& curve, i64 X, unsigned jobs = 1);

/// Independent re-check of every cycle invariant (distinct primes >= min_prime,
/// minimum first, good reduction, closure, consecutive Hasse containment).
bool is_valid_cycle(const CurveZ& curve, const AliquotCycle& cycle, i64 min_prime = 5);

}  // namespace ecaliquot

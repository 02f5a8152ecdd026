#include "ecaliquot/aliquot.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "ecaliquot/parallel.hpp"

namespace ecaliquot {

namespace {

// Largest p whose Hasse window stays below 2^63 - 1.
constexpr i64 kMaxChainValue = std::numeric_limits<i64>::max() - (i64{1} << 33);

std::vector<i64> good_primes_upto(i64 lo, i64 X) {
  std::vector<i64> out;
  if (X < lo) return out;
  for (const u64 p : primes_in(static_cast<u64>(lo), static_cast<u64>(X))) out.push_back(static_cast<i64>(p));
  return out;
}

// Follows the chain from p1; returns the cycle if it closes after exactly L steps.
std::optional<AliquotCycle> chase(const CurveZ& curve, i64 p1, const CycleSearchConfig& cfg,
                                  const CharacterTableSet* tables) {
  AliquotCycle cycle;
  cycle.primes.reserve(static_cast<std::size_t>(cfg.length));
  cycle.primes.push_back(p1);
  i64 current = p1;
  for (int step = 1; step <= cfg.length; ++step) {
    if (current > kMaxChainValue) {
      throw ChainOverflow("aliquot chain value " + std::to_string(current) + " exceeds 64-bit range");
    }
    const auto next = aliquot_step(curve, current, tables);
    if (!next) return std::nullopt;
    if (step == cfg.length) {
      if (*next == p1) return cycle;
      return std::nullopt;
    }
    // normalization pruning: anything <= p1 is either smaller or an early repeat
    if (*next <= p1 || *next < cfg.min_prime) return std::nullopt;
    if (!is_prime(static_cast<u64>(*next))) return std::nullopt;
    if (std::find(cycle.primes.begin(), cycle.primes.end(), *next) != cycle.primes.end()) return std::nullopt;
    cycle.primes.push_back(*next);
    current = *next;
  }
  return std::nullopt;
}

}  // namespace

void CycleSearchConfig::validate() const {
  if (length < 1) throw std::invalid_argument("cycle length L must be at least 1");
  if (min_prime < 5) throw std::invalid_argument("min_prime must be at least 5");
}

std::optional<i64> aliquot_step(const CurveZ& curve, i64 p, const CharacterTableSet* tables) {
  const auto reduced = reduce(curve, p);
  if (!reduced) return std::nullopt;
  return group_order(*reduced, tables);
}

std::vector<AliquotCycle> find_aliquot_cycles(const CurveZ& curve, const CycleSearchConfig& cfg, unsigned jobs,
                                              const CharacterTableSet* tables) {
  cfg.validate();
  const auto starts = good_primes_upto(cfg.min_prime, cfg.X);
  std::vector<std::optional<AliquotCycle>> slots(starts.size());
  parallel_for(starts.size(), jobs, [&](std::size_t i) { slots[i] = chase(curve, starts[i], cfg, tables); });

  std::vector<AliquotCycle> cycles;
  for (auto& slot : slots) {
    if (slot) cycles.push_back(std::move(*slot));
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

std::size_t pi_E_L(const CurveZ& curve, const CycleSearchConfig& cfg, unsigned jobs,
                   const CharacterTableSet* tables) {
  return find_aliquot_cycles(curve, cfg, jobs, tables).size();
}

std::size_t pi_E_twin(const CurveZ& curve, i64 X, unsigned jobs) {
  const auto primes = good_primes_upto(5, X);
  std::vector<std::uint8_t> hit(primes.size(), 0);
  parallel_for(primes.size(), jobs, [&](std::size_t i) {
    const auto order = aliquot_step(curve, primes[i]);
    hit[i] = order && is_prime(static_cast<u64>(*order));
  });
  return static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1));
}

std::vector<i64> anomalous_primes(const CurveZ& curve, i64 X, unsigned jobs) {
  const auto primes = good_primes_upto(5, X);
  std::vector<std::uint8_t> hit(primes.size(), 0);
  parallel_for(primes.size(), jobs, [&](std::size_t i) {
    const auto order = aliquot_step(curve, primes[i]);
    hit[i] = order && *order == primes[i];
  });
  std::vector<i64> out;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (hit[i]) out.push_back(primes[i]);
  }
  return out;
}

bool is_valid_cycle(const CurveZ& curve, const AliquotCycle& cycle, i64 min_prime) {
  const auto& ps = cycle.primes;
  if (ps.empty()) return false;
  if (*std::min_element(ps.begin(), ps.end()) != ps.front()) return false;
  auto sorted = ps;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const i64 p = ps[i];
    const i64 q = ps[(i + 1) % ps.size()];
    if (p < min_prime || !is_prime(static_cast<u64>(p))) return false;
    const auto reduced = reduce(curve, p);
    if (!reduced) return false;
    if (trace_of_frobenius(*reduced).group_order != q) return false;
    if (!HasseWindow(p).contains(q)) return false;
  }
  return true;
}

}  // namespace ecaliquot

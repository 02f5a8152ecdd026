#include "ecaliquot/curves.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ecaliquot {

CurveZ::CurveZ(i64 a, i64 b) : a_(a), b_(b) {
  if (a > kMaxCoefficient || a < -kMaxCoefficient || b > kMaxCoefficient || b < -kMaxCoefficient) {
    throw std::invalid_argument("CurveZ: coefficients must satisfy |a|, |b| <= 2^31");
  }
  if (is_singular(a, b)) {
    throw std::invalid_argument("singular curve: 4a^3 + 27b^2 = 0 for (a, b) = (" + std::to_string(a) +
                                ", " + std::to_string(b) + ")");
  }
}

i128 CurveZ::discriminant() const noexcept {
  return i128{4} * a_ * a_ * a_ + i128{27} * b_ * b_;
}

bool CurveZ::is_singular(i64 a, i64 b) noexcept {
  return i128{4} * a * a * a + i128{27} * b * b == 0;
}

CurveModP::CurveModP(i64 p, i64 s, i64 t) : p_(p) {
  if (p <= 3 || !is_prime(static_cast<u64>(p))) {
    throw std::invalid_argument("CurveModP: modulus must be a prime > 3, got " + std::to_string(p));
  }
  s_ = mod_floor(s, p);
  t_ = mod_floor(t, p);
  if (is_singular(p, s_, t_)) {
    throw std::invalid_argument("CurveModP: singular curve");
  }
}

bool CurveModP::is_singular(i64 p, i64 s, i64 t) noexcept {
  const i128 ss = mod_floor(s, p);
  const i128 tt = mod_floor(t, p);
  return mod_floor128(4 * (ss * ss % p) * ss + 27 * tt * tt, p) == 0;
}

std::optional<CurveModP> reduce(const CurveZ& curve, i64 p) {
  if (p <= 3) throw std::invalid_argument("reduce: prime must exceed 3");
  if (mod_floor128(curve.discriminant(), p) == 0) return std::nullopt;
  return CurveModP(p, curve.a(), curve.b());
}

TraceRecord trace_of_frobenius(const CurveModP& curve, const QuadraticCharacterTable& chi) {
  const i64 p = curve.p();
  if (chi.modulus() != static_cast<u64>(p)) {
    throw std::invalid_argument("trace_of_frobenius: character table modulus mismatch");
  }
  const auto table = chi.values();
  const u64 up = static_cast<u64>(p);
  const u64 s = static_cast<u64>(curve.s());
  const u64 t = static_cast<u64>(curve.t());
  i64 sum = 0;
  // x^3 + s x + t = (x^2 + s) x + t, all products below 2^64 for p < 2^32
  for (u64 x = 0; x < up; ++x) {
    const u64 v = ((x * x % up + s) * x + t) % up;
    sum += table[v];
  }
  const i64 a_p = -sum;
  return TraceRecord{curve, a_p, p + 1 - a_p};
}

TraceRecord trace_of_frobenius(const CurveModP& curve) {
  return trace_of_frobenius(curve, QuadraticCharacterTable(static_cast<u64>(curve.p())));
}

CharacterTableSet::CharacterTableSet(u64 max_p) : max_p_(max_p) {
  tables_.resize(static_cast<std::size_t>(max_p) + 1);
  if (max_p < 5) return;
  for (const u64 p : primes_in(5, max_p)) tables_[static_cast<std::size_t>(p)].emplace(p);
}

const QuadraticCharacterTable* CharacterTableSet::find(u64 p) const noexcept {
  if (p > max_p_) return nullptr;
  const auto& slot = tables_[static_cast<std::size_t>(p)];
  return slot ? &*slot : nullptr;
}

i64 group_order(const CurveModP& curve, const CharacterTableSet* tables) {
  if (tables != nullptr) {
    if (const auto* chi = tables->find(static_cast<u64>(curve.p())); chi != nullptr) {
      return trace_of_frobenius(curve, *chi).group_order;
    }
  }
  return trace_of_frobenius(curve).group_order;
}

int aut_order(const CurveModP& curve) {
  const i64 p = curve.p();
  if (curve.s() == 0 && p % 3 == 1) return 6;
  if (curve.t() == 0 && p % 4 == 1) return 4;
  return 2;
}

std::vector<CurveModP> twist_orbit(const CurveModP& curve) {
  const i64 p = curve.p();
  const u64 up = static_cast<u64>(p);
  std::vector<CurveModP> orbit;
  orbit.reserve(static_cast<std::size_t>(p - 1));
  for (u64 u = 1; u < up; ++u) {
    const u64 u2 = mulmod(u, u, up);
    const u64 u4 = mulmod(u2, u2, up);
    const u64 u6 = mulmod(u4, u2, up);
    orbit.emplace_back(p, static_cast<i64>(mulmod(static_cast<u64>(curve.s()), u4, up)),
                       static_cast<i64>(mulmod(static_cast<u64>(curve.t()), u6, up)));
  }
  std::sort(orbit.begin(), orbit.end());
  orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
  return orbit;
}

std::vector<IsoClass> isomorphism_class_reps(i64 p) {
  if (p <= 3 || !is_prime(static_cast<u64>(p))) {
    throw std::invalid_argument("isomorphism_class_reps: need a prime > 3");
  }
  const auto n = static_cast<std::size_t>(p);
  std::vector<std::uint8_t> seen(n * n, 0);
  std::vector<IsoClass> reps;
  for (i64 s = 0; s < p; ++s) {
    for (i64 t = 0; t < p; ++t) {
      const std::size_t idx = static_cast<std::size_t>(s) * n + static_cast<std::size_t>(t);
      if (seen[idx] || CurveModP::is_singular(p, s, t)) continue;
      const CurveModP rep(p, s, t);
      const auto orbit = twist_orbit(rep);
      for (const auto& c : orbit) seen[static_cast<std::size_t>(c.s()) * n + static_cast<std::size_t>(c.t())] = 1;
      reps.push_back(IsoClass{rep, static_cast<i64>(orbit.size())});
    }
  }
  return reps;
}

i64 singular_pair_count(i64 p) {
  if (p <= 3 || !is_prime(static_cast<u64>(p))) {
    throw std::invalid_argument("singular_pair_count: need a prime > 3");
  }
  // 27 t^2 = -4 s^3 has 1 + ((-4 s^3 / 27) / p) = 1 + ((-3 s^3) / p) solutions in t
  i64 count = 0;
  for (i64 s = 0; s < p; ++s) {
    const i128 v = i128{-3} * s * s * s;
    count += 1 + kronecker(mod_floor128(v, p), static_cast<u64>(p));
  }
  return count;
}

}  // namespace ecaliquot

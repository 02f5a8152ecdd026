#pragma once

// Short Weierstrass curves y^2 = x^3 + s x + t over prime fields of
// characteristic > 3, and their integral lifts y^2 = x^3 + a x + b.

#include <compare>
#include <optional>
#include <vector>

#include "ecaliquot/arith.hpp"

namespace ecaliquot {

/// Family coefficients are bounded by 2^31 in absolute value.
inline constexpr i64 kMaxCoefficient = i64{1} << 31;

/// Integral Weierstrass curve E_{a,b} with 4a^3 + 27b^2 != 0.
class CurveZ {
 public:
  /// Throws std::invalid_argument for a singular pair or |a|, |b| > 2^31.
  CurveZ(i64 a, i64 b);

  [[nodiscard]] i64 a() const noexcept { return a_; }
  [[nodiscard]] i64 b() const noexcept { return b_; }
  /// 4a^3 + 27b^2 (the discriminant up to the factor -16).
  [[nodiscard]] i128 discriminant() const noexcept;

  [[nodiscard]] static bool is_singular(i64 a, i64 b) noexcept;

  friend bool operator==(const CurveZ&, const CurveZ&) = default;

 private:
  i64 a_;
  i64 b_;
};

/// Nonsingular curve over F_p, p prime > 3, coefficients reduced into [0, p).
class CurveModP {
 public:
  /// Throws std::invalid_argument if p <= 3, p is composite, or the curve is singular.
  CurveModP(i64 p, i64 s, i64 t);

  [[nodiscard]] i64 p() const noexcept { return p_; }
  [[nodiscard]] i64 s() const noexcept { return s_; }
  [[nodiscard]] i64 t() const noexcept { return t_; }

  [[nodiscard]] static bool is_singular(i64 p, i64 s, i64 t) noexcept;

  friend auto operator<=>(const CurveModP&, const CurveModP&) = default;

 private:
  i64 p_;
  i64 s_;
  i64 t_;
};

struct TraceRecord {
  CurveModP curve;
  i64 a_p;
  i64 group_order;  // p + 1 - a_p
};

/// Reduction of E_{a,b} modulo p; std::nullopt when p divides 4a^3 + 27b^2.
/// Throws std::invalid_argument for p <= 3.
std::optional<CurveModP> reduce(const CurveZ& curve, i64 p);

/// a_p = -sum_x ((x^3 + s x + t) / p), by the naive O(p) character sum.
TraceRecord trace_of_frobenius(const CurveModP& curve);
/// Same, reusing a precomputed character table for curve.p().
TraceRecord trace_of_frobenius(const CurveModP& curve, const QuadraticCharacterTable& chi);

/// Character tables for every prime 5 <= p <= max_p, built once and shared
/// read-only between workers.
class CharacterTableSet {
 public:
  explicit CharacterTableSet(u64 max_p);

  [[nodiscard]] u64 max_p() const noexcept { return max_p_; }
  /// Table for p, or nullptr when p is out of range or not prime.
  [[nodiscard]] const QuadraticCharacterTable* find(u64 p) const noexcept;

 private:
  u64 max_p_;
  std::vector<std::optional<QuadraticCharacterTable>> tables_;  // indexed by p
};

/// Group order of E_p, using `tables` when it covers p.
i64 group_order(const CurveModP& curve, const CharacterTableSet* tables);

/// #Aut over F_p: 6 if s = 0 and p = 1 mod 3, 4 if t = 0 and p = 1 mod 4, else 2.
int aut_order(const CurveModP& curve);

/// {(s u^4, t u^6) : u in F_p^*}, sorted and deduplicated.
std::vector<CurveModP> twist_orbit(const CurveModP& curve);

struct IsoClass {
  CurveModP representative;  // smallest (s, t) in its orbit
  i64 multiplicity;          // (p - 1) / #Aut
};

/// One representative per F_p-isomorphism class of nonsingular short Weierstrass curves.
std::vector<IsoClass> isomorphism_class_reps(i64 p);

/// Number of singular pairs (s, t) in [0, p)^2.
i64 singular_pair_count(i64 p);

}  // namespace ecaliquot

#pragma once

// Class numbers of imaginary quadratic orders, Hurwitz-Kronecker class
// numbers H(D) = sum_{f^2 | D, D/f^2 = 0,1 mod 4} h(D/f^2) / w(D/f^2),
// and the values L(1, chi_D) they are tied to.

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ecaliquot/arith.hpp"

namespace ecaliquot {

/// Negative discriminant: value < 0 and value = 0 or 1 mod 4.
class Discriminant {
 public:
  explicit Discriminant(i64 value);

  [[nodiscard]] i64 value() const noexcept { return value_; }
  [[nodiscard]] static bool is_valid(i64 value) noexcept;

  friend auto operator<=>(const Discriminant&, const Discriminant&) = default;

 private:
  i64 value_;
};

/// Exact H(D), kept as a reduced fraction with denominator dividing 12.
struct HurwitzValue {
  i64 numerator = 0;
  i64 denominator = 1;

  [[nodiscard]] static HurwitzValue from_twelfths(i64 twelve_h);
  [[nodiscard]] i64 twelfths() const noexcept { return numerator * (12 / denominator); }
  [[nodiscard]] double to_double() const noexcept {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }

  friend bool operator==(const HurwitzValue&, const HurwitzValue&) = default;
};

/// Number of reduced primitive forms (a, b, c) of discriminant d, i.e. the
/// class number of the order of discriminant d.
i64 class_number_h(Discriminant d);

/// Units in the order of discriminant d: 6 for -3, 4 for -4, 2 otherwise.
int roots_of_unity_w(Discriminant d);

/// Throws std::invalid_argument for D >= 0. D = 2, 3 mod 4 gives 0.
HurwitzValue hurwitz_H(i64 D);

struct FundamentalDecomposition {
  i64 d;  // fundamental discriminant
  i64 f;  // conductor, D = d f^2
};

FundamentalDecomposition fundamental_decomposition(Discriminant D);
bool is_fundamental_discriminant(i64 d) noexcept;

/// D(m, n) = (m + 1 - n)^2 - 4m, symmetric in m and n.
constexpr i64 D_of(i64 m, i64 n) noexcept { return (m + 1 - n) * (m + 1 - n) - 4 * m; }

enum class LMethod { kFormsFormula, kSeries, kTruncated };

struct LValue {
  i64 D;
  LMethod method;
  double y;  // truncation point for kTruncated, 0 otherwise
  double value;
};

/// L(1, chi_D) = 2 pi h(D) / (w(D) sqrt(-D)), with h and w of the order of discriminant D.
LValue dirichlet_L1(Discriminant D);

/// L(1, chi_D) from character partial sums over 32 full periods, with the tail
/// evaluated by Euler-Maclaurin summation in each residue class mod |D|.
/// Absolute error is below 1e-9.
LValue dirichlet_L1_series(Discriminant D);

/// prod_{prime l <= y} (1 - chi_D(l)/l)^{-1}; the empty product for y < 2.
LValue truncated_L1(i64 D, double y);
/// Same, over a caller-supplied ascending prime list (only primes <= y are used).
double truncated_L1(i64 D, double y, std::span<const u64> primes);

struct GsRow {
  i64 d;
  double l_value;
  double l_truncated;
  double relative_error;  // |L / L_trunc - 1|
};

struct GsOptions {
  double y_cap = 1e7;          // the nominal y = (log Q)^(8 alpha^2) explodes quickly
  double exponent_scale = 1.0;  // multiplies the exponent 8 alpha^2
};

struct GsReport {
  i64 Q;
  double alpha;
  double y;
  bool y_capped;
  std::vector<GsRow> rows;      // one per negative fundamental d with |d| <= Q
  double threshold;             // (log Q)^(-alpha)
  std::size_t exceptional;      // rows with relative_error > threshold
  double allowed;               // Q^(2/alpha)
  double mean_error;
  double max_error;
};

GsReport gs_truncation_report(i64 Q, double alpha, const GsOptions& options = {});

/// h(D) for every discriminant -max_abs <= D < 0, from a single pass over
/// reduced forms. Faster than repeated class_number_h calls for sweeps.
class ClassNumberTable {
 public:
  explicit ClassNumberTable(i64 max_abs);

  [[nodiscard]] i64 max_abs() const noexcept { return max_abs_; }
  /// Class number of the order of discriminant D; 0 if D is not a discriminant.
  [[nodiscard]] i64 h(i64 D) const;
  [[nodiscard]] HurwitzValue H(i64 D) const;

 private:
  i64 max_abs_;
  std::vector<std::int32_t> h_;  // indexed by -D
};

}  // namespace ecaliquot

#pragma once

// The family C(A, B) = { E_{a,b} : |a| <= A, |b| <= B, 4a^3 + 27b^2 != 0 }
// and the class-number sums that describe its average number of aliquot cycles.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ecaliquot/aliquot.hpp"
#include "ecaliquot/classnum.hpp"
#include "ecaliquot/hurwitz_cache.hpp"

namespace ecaliquot {

struct FamilySpec {
  i64 A = 1;
  i64 B = 1;
  i64 X = 100;
  int L = 2;

  /// Throws std::invalid_argument unless A, B >= 1 (and <= 2^31) and L >= 1.
  void validate() const;

  friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

/// |C(A, B)|, exact. Throws std::invalid_argument unless A, B >= 1.
i64 family_size(i64 A, i64 B);

/// |family_size(A, B) - 4AB| / (A + B + 1).
double family_size_constant(i64 A, i64 B);

struct DirectAverage {
  i64 family_size;
  i64 total_cycles;  // sum of pi_{E,L}(X) over the family
  i64 numerator;     // total_cycles / family_size, reduced
  i64 denominator;

  [[nodiscard]] double value() const noexcept {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
};

/// Exact mean of pi_{E,L}(X) over C(A, B), curve by curve.
DirectAverage direct_average(const FamilySpec& spec, unsigned jobs = 1);

/// H(D) for D < 0 and 0 for D >= 0.
HurwitzValue hurwitz_or_zero(HurwitzCache& cache, i64 D);

/// Which prime tuples enter the main-term chain sum.
enum class ChainSet {
  kNormalized,  // distinct primes > 3 with p_1 the minimum (the tuples pi_{E,L} counts)
  kAll,         // every prime p_{i+1} > 3 in the window of p_i
};

/// sum over chains p_1 <= X, p_{i+1} in the Hasse window of p_i, of
/// prod_j H(D(p_j, p_{j+1})) / p_j, with p_{L+1} = p_1.
double main_term_sum(i64 X, int L, HurwitzCache& cache, ChainSet chains = ChainSet::kNormalized,
                     unsigned jobs = 1);
double main_term_sum(i64 X, int L, ChainSet chains = ChainSet::kNormalized, unsigned jobs = 1);

/// Which (s, t) in [0, p)^2 are counted.
enum class PairConvention {
  kNonsingular,  // all nonsingular pairs; makes the Deuring identity exact
  kNonzero,      // nonsingular pairs with s, t != 0
};

/// counts[N - window.first()] = #{(s, t) : #E_{s,t}(F_p) = N}, by exhaustive point counting.
struct GroupOrderHistogram {
  i64 p;
  i64 first;  // smallest N in the Hasse window
  std::vector<i64> counts;

  [[nodiscard]] i64 at(i64 N) const;
  [[nodiscard]] i64 total() const;
};

GroupOrderHistogram group_order_histogram(i64 p, PairConvention convention = PairConvention::kNonsingular);

/// #{(s, t) nonsingular : #E_{s,t}(F_p) = N}. Throws std::invalid_argument
/// unless p > 3 is prime and (N - p - 1)^2 < 4p.
i64 deuring_pair_count(i64 p, i64 N, PairConvention convention = PairConvention::kNonsingular);

struct DeuringCheck {
  i64 p;
  i64 N;
  i64 lhs;              // brute-force pair count
  i64 rhs_twelfths;     // 12 (p - 1) H(D(p, N))
  [[nodiscard]] bool holds() const noexcept { return 12 * lhs == rhs_twelfths; }
};

/// One check per N in the window of p.
std::vector<DeuringCheck> deuring_checks(i64 p, HurwitzCache& cache);

/// Primes p_1, ..., p_L > 3, distinct, each p_{i+1} in the window of p_i.
class ChainTuple {
 public:
  explicit ChainTuple(std::vector<i64> primes);

  [[nodiscard]] std::span<const i64> primes() const noexcept { return primes_; }
  [[nodiscard]] std::size_t length() const noexcept { return primes_.size(); }

 private:
  std::vector<i64> primes_;
};

struct RCount {
  i64 count;                  // R(P, S, T)
  double reference;           // 4AB / (2^L p_1 ... p_L)
  double orbit_expectation;   // (2A+1)(2B+1) prod_i |orbit_i| / p_i^2
};

/// Number of |a| <= A, |b| <= B with a = s_i u_i^4, b = t_i u_i^6 (mod p_i) for some u_i, every i.
RCount r_count(const ChainTuple& P, std::span<const i64> S, std::span<const i64> T, i64 A, i64 B);

/// Same count over explicit ranges a_lo <= a <= a_hi, b_lo <= b <= b_hi.
i64 r_count_range(const ChainTuple& P, std::span<const i64> S, std::span<const i64> T, i64 a_lo, i64 a_hi,
                  i64 b_lo, i64 b_hi);

struct PropSum {
  i64 terms;       // primes q contributing
  double sum;
  double ratio;    // normalized by p / log p or p^{3/2} / log p
};

/// sum over primes q in the window of p, q != p, r, of H(D(p,q)) H(D(r,q)).
/// Requires (r - p - 1)^2 < 9p.
PropSum prop33_sum(i64 p, i64 r, HurwitzCache& cache);

/// sum over primes q != p in the window of p of H(D(p,q)).
PropSum prop34_sum(i64 p, HurwitzCache& cache);

struct FamilyReport {
  FamilySpec spec;
  i64 family_size = 0;
  i64 direct_average_num = 0;
  i64 direct_average_den = 1;
  double main_term = 0.0;
  double ss_density = 0.0;
  std::optional<double> ratio_direct_main;  // empty for 0/0
  std::optional<double> ratio_direct_ss;

  [[nodiscard]] double direct_average() const noexcept {
    return static_cast<double>(direct_average_num) / static_cast<double>(direct_average_den);
  }
  friend bool operator==(const FamilyReport&, const FamilyReport&) = default;
};

FamilyReport family_report(const FamilySpec& spec, HurwitzCache& cache, unsigned jobs = 1);

nlohmann::json to_json(const FamilyReport& report);
FamilyReport family_report_from_json(const nlohmann::json& j);

/// Column names of the sweep CSV, in order.
std::string family_csv_header();
std::string to_csv_row(const FamilyReport& report);

/// Shortest decimal that round-trips the double.
std::string format_double(double value);

}  // namespace ecaliquot

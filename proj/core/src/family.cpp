#include "ecaliquot/family.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "ecaliquot/conjectures.hpp"
#include "ecaliquot/parallel.hpp"

namespace ecaliquot {

namespace {

void require_prime_above_3(i64 p, const char* where) {
  if (p <= 3 || !is_prime(static_cast<u64>(p))) {
    throw std::invalid_argument(std::string(where) + ": need a prime > 3, got " + std::to_string(p));
  }
}

// Upper bound for every prime reachable by L - 1 window steps from a prime <= X.
i64 chain_prime_bound(i64 X, int L) {
  i64 bound = X;
  for (int i = 1; i < L; ++i) bound = bound + 2 + static_cast<i64>(isqrt(static_cast<u64>(4 * bound)));
  return bound;
}

std::vector<i64> primes_from5(i64 X) {
  std::vector<i64> out;
  if (X < 5) return out;
  for (const u64 p : primes_in(5, static_cast<u64>(X))) out.push_back(static_cast<i64>(p));
  return out;
}

// H(D(p, q)) for q strictly inside the window of p; such D is always a discriminant.
HurwitzValue window_H(HurwitzCache& cache, i64 p, i64 q) {
  const i64 D = D_of(p, q);
  if (!Discriminant::is_valid(D)) {
    throw std::logic_error("D(" + std::to_string(p) + ", " + std::to_string(q) + ") = " + std::to_string(D) +
                           " is not a negative discriminant");
  }
  return cache.get(D);
}

class ChainWalker {
 public:
  ChainWalker(int L, HurwitzCache& cache, ChainSet chains) : L_(L), cache_(cache), chains_(chains) {}

  double from(i64 p1) {
    chain_.assign(1, p1);
    return extend(1.0);
  }

 private:
  double extend(double weight) {
    const i64 p1 = chain_.front();
    const i64 current = chain_.back();
    if (static_cast<int>(chain_.size()) == L_) {
      const HurwitzValue closing = hurwitz_or_zero(cache_, D_of(current, p1));
      return weight * closing.to_double() / static_cast<double>(current);
    }
    double total = 0.0;
    for (const u64 uq : hasse_primes(current)) {
      const i64 q = static_cast<i64>(uq);
      if (q <= 3) continue;
      if (chains_ == ChainSet::kNormalized) {
        if (q <= p1 || std::find(chain_.begin(), chain_.end(), q) != chain_.end()) continue;
      }
      const double step = window_H(cache_, current, q).to_double() / static_cast<double>(current);
      if (step == 0.0) continue;
      chain_.push_back(q);
      total += extend(weight * step);
      chain_.pop_back();
    }
    return total;
  }

  int L_;
  HurwitzCache& cache_;
  ChainSet chains_;
  std::vector<i64> chain_;
};

}  // namespace

void FamilySpec::validate() const {
  if (A < 1 || B < 1) throw std::invalid_argument("family bounds A and B must be at least 1");
  if (A > kMaxCoefficient || B > kMaxCoefficient) throw std::invalid_argument("family bounds must not exceed 2^31");
  if (L < 1) throw std::invalid_argument("cycle length L must be at least 1");
}

i64 family_size(i64 A, i64 B) {
  FamilySpec{A, B, 5, 1}.validate();
  // 4a^3 + 27b^2 = 0 exactly when (a, b) = (-3k^2, 2k^3)
  i64 singular = 0;
  for (i64 k = 0; 3 * k * k <= A && 2 * k * k * k <= B; ++k) singular += (k == 0) ? 1 : 2;
  return (2 * A + 1) * (2 * B + 1) - singular;
}

double family_size_constant(i64 A, i64 B) {
  const i64 n = family_size(A, B);
  return std::abs(static_cast<double>(n - 4 * A * B)) / static_cast<double>(A + B + 1);
}

DirectAverage direct_average(const FamilySpec& spec, unsigned jobs) {
  spec.validate();
  const CharacterTableSet tables(static_cast<u64>(std::max<i64>(5, chain_prime_bound(spec.X, spec.L + 1))));
  const CycleSearchConfig cfg{spec.L, spec.X, 5};

  const i64 width = 2 * spec.B + 1;
  const auto rows = static_cast<std::size_t>(2 * spec.A + 1);
  std::vector<i64> per_row(rows, 0);
  // one task per value of a; each row is summed serially
  parallel_for(rows, jobs, [&](std::size_t i) {
    const i64 a = static_cast<i64>(i) - spec.A;
    i64 sum = 0;
    for (i64 j = 0; j < width; ++j) {
      const i64 b = j - spec.B;
      if (CurveZ::is_singular(a, b)) continue;
      sum += static_cast<i64>(pi_E_L(CurveZ(a, b), cfg, 1, &tables));
    }
    per_row[i] = sum;
  });

  DirectAverage out{};
  out.family_size = family_size(spec.A, spec.B);
  out.total_cycles = std::accumulate(per_row.begin(), per_row.end(), i64{0});
  const i64 g = std::gcd(out.total_cycles, out.family_size);
  out.numerator = out.total_cycles / g;
  out.denominator = out.family_size / g;
  return out;
}

HurwitzValue hurwitz_or_zero(HurwitzCache& cache, i64 D) {
  if (D >= 0) return HurwitzValue{0, 1};
  return cache.get(D);
}

double main_term_sum(i64 X, int L, HurwitzCache& cache, ChainSet chains, unsigned jobs) {
  if (X < 5) throw std::invalid_argument("main_term_sum: X must be at least 5");
  if (L < 1) throw std::invalid_argument("main_term_sum: L must be at least 1");
  const auto starts = primes_from5(X);
  std::vector<double> partial(starts.size(), 0.0);
  parallel_for(starts.size(), jobs, [&](std::size_t i) {
    ChainWalker walker(L, cache, chains);
    partial[i] = walker.from(starts[i]);
  });
  // ascending p_1, independent of scheduling
  double total = 0.0;
  for (const double v : partial) total += v;
  return total;
}

double main_term_sum(i64 X, int L, ChainSet chains, unsigned jobs) {
  HurwitzCache cache;
  cache.attach_table(std::make_shared<ClassNumberTable>(4 * chain_prime_bound(std::max<i64>(X, 5), L + 1) + 4));
  return main_term_sum(X, L, cache, chains, jobs);
}

i64 GroupOrderHistogram::at(i64 N) const {
  const i64 idx = N - first;
  if (idx < 0 || idx >= static_cast<i64>(counts.size())) return 0;
  return counts[static_cast<std::size_t>(idx)];
}

i64 GroupOrderHistogram::total() const { return std::accumulate(counts.begin(), counts.end(), i64{0}); }

GroupOrderHistogram group_order_histogram(i64 p, PairConvention convention) {
  require_prime_above_3(p, "group_order_histogram");
  const HasseWindow window(p);
  const QuadraticCharacterTable chi(static_cast<u64>(p));
  GroupOrderHistogram hist{p, window.first(), std::vector<i64>(static_cast<std::size_t>(window.last() - window.first() + 1), 0)};
  const i64 start = (convention == PairConvention::kNonzero) ? 1 : 0;
  for (i64 s = start; s < p; ++s) {
    for (i64 t = start; t < p; ++t) {
      if (CurveModP::is_singular(p, s, t)) continue;
      const i64 order = trace_of_frobenius(CurveModP(p, s, t), chi).group_order;
      if (!window.contains(order)) throw std::logic_error("group order outside the Hasse window");
      ++hist.counts[static_cast<std::size_t>(order - hist.first)];
    }
  }
  return hist;
}

i64 deuring_pair_count(i64 p, i64 N, PairConvention convention) {
  require_prime_above_3(p, "deuring_pair_count");
  if (!HasseWindow(p).contains(N)) {
    throw std::invalid_argument("deuring_pair_count: N = " + std::to_string(N) + " outside the Hasse window of " +
                                std::to_string(p));
  }
  return group_order_histogram(p, convention).at(N);
}

std::vector<DeuringCheck> deuring_checks(i64 p, HurwitzCache& cache) {
  const auto hist = group_order_histogram(p);
  std::vector<DeuringCheck> out;
  out.reserve(hist.counts.size());
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    const i64 N = hist.first + static_cast<i64>(i);
    const i64 twelve_h = cache.get(D_of(p, N)).twelfths();
    out.push_back(DeuringCheck{p, N, hist.counts[i], (p - 1) * twelve_h});
  }
  return out;
}

ChainTuple::ChainTuple(std::vector<i64> primes) : primes_(std::move(primes)) {
  if (primes_.empty()) throw std::invalid_argument("ChainTuple: empty");
  for (std::size_t i = 0; i < primes_.size(); ++i) {
    require_prime_above_3(primes_[i], "ChainTuple");
    if (std::count(primes_.begin(), primes_.end(), primes_[i]) != 1) {
      throw std::invalid_argument("ChainTuple: primes must be distinct");
    }
    if (i + 1 < primes_.size() && !HasseWindow(primes_[i]).contains(primes_[i + 1])) {
      throw std::invalid_argument("ChainTuple: " + std::to_string(primes_[i + 1]) + " not in the window of " +
                                  std::to_string(primes_[i]));
    }
  }
}

namespace {

struct OrbitMasks {
  std::vector<i64> moduli;
  std::vector<std::vector<std::uint8_t>> masks;  // masks[i][s * p + t]
  std::vector<i64> orbit_sizes;
};

OrbitMasks build_masks(const ChainTuple& P, std::span<const i64> S, std::span<const i64> T) {
  if (S.size() != P.length() || T.size() != P.length()) {
    throw std::invalid_argument("r_count: S and T must have one residue per prime");
  }
  OrbitMasks m;
  for (std::size_t i = 0; i < P.length(); ++i) {
    const i64 p = P.primes()[i];
    const u64 up = static_cast<u64>(p);
    const u64 s = static_cast<u64>(mod_floor(S[i], p));
    const u64 t = static_cast<u64>(mod_floor(T[i], p));
    if (s == 0 || t == 0) throw std::invalid_argument("r_count: residues s_i and t_i must be nonzero");
    std::vector<std::uint8_t> mask(up * up, 0);
    i64 size = 0;
    for (u64 u = 1; u < up; ++u) {
      const u64 u2 = mulmod(u, u, up);
      const u64 u4 = mulmod(u2, u2, up);
      const u64 u6 = mulmod(u4, u2, up);
      auto& cell = mask[mulmod(s, u4, up) * up + mulmod(t, u6, up)];
      if (!cell) ++size;
      cell = 1;
    }
    m.moduli.push_back(p);
    m.masks.push_back(std::move(mask));
    m.orbit_sizes.push_back(size);
  }
  return m;
}

i64 count_in_ranges(const OrbitMasks& m, i64 a_lo, i64 a_hi, i64 b_lo, i64 b_hi) {
  i64 count = 0;
  std::vector<i64> b_rows(m.moduli.size());
  for (i64 b = b_lo; b <= b_hi; ++b) {
    for (std::size_t i = 0; i < m.moduli.size(); ++i) b_rows[i] = mod_floor(b, m.moduli[i]);
    for (i64 a = a_lo; a <= a_hi; ++a) {
      bool all = true;
      for (std::size_t i = 0; i < m.moduli.size() && all; ++i) {
        const i64 p = m.moduli[i];
        all = m.masks[i][static_cast<std::size_t>(mod_floor(a, p) * p + b_rows[i])] != 0;
      }
      count += all ? 1 : 0;
    }
  }
  return count;
}

}  // namespace

RCount r_count(const ChainTuple& P, std::span<const i64> S, std::span<const i64> T, i64 A, i64 B) {
  if (A < 0 || B < 0) throw std::invalid_argument("r_count: A and B must be nonnegative");
  const auto masks = build_masks(P, S, T);
  RCount out{};
  out.count = count_in_ranges(masks, -A, A, -B, B);
  double denom = 1.0;
  double orbit_density = 1.0;
  for (std::size_t i = 0; i < masks.moduli.size(); ++i) {
    const double p = static_cast<double>(masks.moduli[i]);
    denom *= 2.0 * p;
    orbit_density *= static_cast<double>(masks.orbit_sizes[i]) / (p * p);
  }
  out.reference = 4.0 * static_cast<double>(A) * static_cast<double>(B) / denom;
  out.orbit_expectation = static_cast<double>(2 * A + 1) * static_cast<double>(2 * B + 1) * orbit_density;
  return out;
}

i64 r_count_range(const ChainTuple& P, std::span<const i64> S, std::span<const i64> T, i64 a_lo, i64 a_hi,
                  i64 b_lo, i64 b_hi) {
  if (a_hi < a_lo || b_hi < b_lo) return 0;
  return count_in_ranges(build_masks(P, S, T), a_lo, a_hi, b_lo, b_hi);
}

PropSum prop33_sum(i64 p, i64 r, HurwitzCache& cache) {
  require_prime_above_3(p, "prop33_sum");
  require_prime_above_3(r, "prop33_sum");
  const i128 gap = static_cast<i128>(r) - p - 1;
  if (gap * gap >= static_cast<i128>(9) * p) {
    throw std::invalid_argument("prop33_sum: r must satisfy (r - p - 1)^2 < 9p");
  }
  i128 sum_144ths = 0;
  i64 terms = 0;
  for (const u64 uq : hasse_primes(p)) {
    const i64 q = static_cast<i64>(uq);
    if (q == p || q == r) continue;
    ++terms;
    const i64 hp = window_H(cache, p, q).twelfths();
    const i64 hr = hurwitz_or_zero(cache, D_of(r, q)).twelfths();
    sum_144ths += static_cast<i128>(hp) * hr;
  }
  const double sum = static_cast<double>(sum_144ths) / 144.0;
  const double pd = static_cast<double>(p);
  return PropSum{terms, sum, sum * std::log(pd) / std::pow(pd, 1.5)};
}

PropSum prop34_sum(i64 p, HurwitzCache& cache) {
  require_prime_above_3(p, "prop34_sum");
  i64 sum_twelfths = 0;
  i64 terms = 0;
  for (const u64 uq : hasse_primes(p)) {
    const i64 q = static_cast<i64>(uq);
    if (q == p) continue;
    ++terms;
    sum_twelfths += window_H(cache, p, q).twelfths();
  }
  const double sum = static_cast<double>(sum_twelfths) / 12.0;
  const double pd = static_cast<double>(p);
  return PropSum{terms, sum, sum * std::log(pd) / pd};
}

FamilyReport family_report(const FamilySpec& spec, HurwitzCache& cache, unsigned jobs) {
  spec.validate();
  FamilyReport report;
  report.spec = spec;
  const auto avg = direct_average(spec, jobs);
  report.family_size = avg.family_size;
  report.direct_average_num = avg.numerator;
  report.direct_average_den = avg.denominator;
  report.main_term = spec.X >= 5 ? main_term_sum(spec.X, spec.L, cache, ChainSet::kNormalized, jobs) : 0.0;
  report.ss_density = ss_density(static_cast<double>(std::max<i64>(spec.X, 2)), spec.L);

  const double direct = report.direct_average();
  if (report.main_term != 0.0) {
    report.ratio_direct_main = direct / report.main_term;
  } else if (direct == 0.0) {
    report.ratio_direct_main.reset();
  } else {
    report.ratio_direct_main = std::numeric_limits<double>::infinity();
  }
  report.ratio_direct_ss = direct / report.ss_density;
  return report;
}

nlohmann::json to_json(const FamilyReport& r) {
  nlohmann::json j;
  j["A"] = r.spec.A;
  j["B"] = r.spec.B;
  j["X"] = r.spec.X;
  j["L"] = r.spec.L;
  j["family_size"] = r.family_size;
  j["direct_average_num"] = r.direct_average_num;
  j["direct_average_den"] = r.direct_average_den;
  j["main_term"] = r.main_term;
  j["ss_density"] = r.ss_density;
  j["ratio_direct_main"] = r.ratio_direct_main ? nlohmann::json(*r.ratio_direct_main) : nlohmann::json(nullptr);
  j["ratio_direct_ss"] = r.ratio_direct_ss ? nlohmann::json(*r.ratio_direct_ss) : nlohmann::json(nullptr);
  return j;
}

FamilyReport family_report_from_json(const nlohmann::json& j) {
  FamilyReport r;
  r.spec.A = j.at("A").get<i64>();
  r.spec.B = j.at("B").get<i64>();
  r.spec.X = j.at("X").get<i64>();
  r.spec.L = j.at("L").get<int>();
  r.family_size = j.at("family_size").get<i64>();
  r.direct_average_num = j.at("direct_average_num").get<i64>();
  r.direct_average_den = j.at("direct_average_den").get<i64>();
  r.main_term = j.at("main_term").get<double>();
  r.ss_density = j.at("ss_density").get<double>();
  if (!j.at("ratio_direct_main").is_null()) r.ratio_direct_main = j.at("ratio_direct_main").get<double>();
  if (!j.at("ratio_direct_ss").is_null()) r.ratio_direct_ss = j.at("ratio_direct_ss").get<double>();
  return r;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string family_csv_header() {
  return "A,B,X,L,family_size,direct_average_num,direct_average_den,main_term,ss_density,ratio_direct_main,"
         "ratio_direct_ss";
}

std::string to_csv_row(const FamilyReport& r) {
  std::string row = std::to_string(r.spec.A) + ',' + std::to_string(r.spec.B) + ',' + std::to_string(r.spec.X) + ',' +
                    std::to_string(r.spec.L) + ',' + std::to_string(r.family_size) + ',' +
                    std::to_string(r.direct_average_num) + ',' + std::to_string(r.direct_average_den) + ',' +
                    format_double(r.main_term) + ',' + format_double(r.ss_density) + ',';
  if (r.ratio_direct_main) row += format_double(*r.ratio_direct_main);
  row += ',';
  if (r.ratio_direct_ss) row += format_double(*r.ratio_direct_ss);
  return row;
}

}  // namespace ecaliquot

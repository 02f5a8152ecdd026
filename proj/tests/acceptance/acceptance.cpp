// Acceptance checks 1-10. Prints one PASS/FAIL line per criterion; exits
// nonzero if any selected criterion fails. `acceptance N` runs criterion N only.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ecaliquot/aliquot.hpp"
#include "ecaliquot/arith.hpp"
#include "ecaliquot/classnum.hpp"
#include "ecaliquot/conjectures.hpp"
#include "ecaliquot/curves.hpp"
#include "ecaliquot/family.hpp"
#include "ecaliquot/hurwitz_cache.hpp"
#include "oracles.hpp"

using namespace ecaliquot;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::vector<i64> primes_upto(i64 lo, i64 hi) {
  std::vector<i64> out;
  for (const u64 p : primes_in(static_cast<u64>(lo), static_cast<u64>(hi))) out.push_back(static_cast<i64>(p));
  return out;
}

// 1. Deuring exactness for 5 <= p <= 199.
Outcome deuring_exactness() {
  HurwitzCache cache;
  std::size_t checks = 0;
  for (const i64 p : primes_upto(5, 199)) {
    for (const auto& c : deuring_checks(p, cache)) {
      ++checks;
      if (!c.holds()) {
        std::ostringstream s;
        s << "mismatch p=" << c.p << " N=" << c.N << " lhs=" << c.lhs << " rhs*12=" << c.rhs_twelfths;
        return {false, s.str()};
      }
    }
  }
  return {true, std::to_string(checks) + " (p, N) pairs, all exact"};
}

// 2. The per-N counts partition the nonsingular pairs.
Outcome partition_check() {
  for (const i64 p : primes_upto(5, 199)) {
    i64 nonsingular = 0;
    for (i64 s = 0; s < p; ++s) {
      for (i64 t = 0; t < p; ++t) nonsingular += oracle::singular_mod_p(p, s, t) ? 0 : 1;
    }
    const auto hist = group_order_histogram(p);
    if (hist.total() != nonsingular) {
      return {false, "p=" + std::to_string(p) + " sum=" + std::to_string(hist.total()) +
                         " nonsingular=" + std::to_string(nonsingular)};
    }
  }
  return {true, "sum over N equals the nonsingular pair count for every p <= 199"};
}

// 3. Forms-route and series-route L(1, chi_d) for fundamental d in [-5000, -3].
Outcome l_value_cross_validation() {
  double worst = 0;
  i64 worst_d = 0;
  std::size_t n = 0;
  for (i64 d = -3; d >= -5000; --d) {
    if (!is_fundamental_discriminant(d)) continue;
    ++n;
    const double forms = dirichlet_L1(Discriminant(d)).value;
    const double series = dirichlet_L1_series(Discriminant(d)).value;
    const double rel = std::abs(forms - series) / forms;
    if (rel > worst) {
      worst = rel;
      worst_d = d;
    }
  }
  std::ostringstream s;
  s << n << " discriminants, max relative error " << worst << " at d=" << worst_d;
  return {worst < 1e-6, s.str()};
}

// 4. The amicable pair (13, 19) on y^2 = x^3 + 2.
Outcome amicable_pair() {
  const bool oracle_ok = oracle::count_points(13, 0, 2) == 19 && oracle::count_points(19, 0, 2) == 13;
  const auto cycles = find_aliquot_cycles(CurveZ(0, 2), {2, 100, 5});
  const bool found = std::find(cycles.begin(), cycles.end(), AliquotCycle{{13, 19}}) != cycles.end();
  std::ostringstream s;
  s << "oracle #E(F_13)=19, #E(F_19)=13: " << (oracle_ok ? "yes" : "no") << "; search returned " << cycles.size()
    << " cycle(s), (13,19) " << (found ? "present" : "absent");
  return {oracle_ok && found, s.str()};
}

// 5. Closed-form character sums against brute force.
Outcome character_sums() {
  std::size_t n = 0;
  for (const i64 ell : {3, 5, 7, 11, 13}) {
    for (i64 a = 1; a < ell; ++a) {
      for (i64 b = 0; b < ell; ++b) {
        for (i64 c = 0; c < ell; ++c) {
          ++n;
          if (quadratic_char_sum(a, b, c, ell) != oracle::char_sum(a, b, c, ell)) {
            return {false, "mismatch at (a,b,c,l)=(" + std::to_string(a) + "," + std::to_string(b) + "," +
                               std::to_string(c) + "," + std::to_string(ell) + ")"};
          }
        }
      }
    }
  }
  const i64 p = 13;
  for (const i64 ell : {3, 5, 7, 11}) {
    if (quadratic_char_sum(1, 4 * p, 0, ell) != -1 || oracle::char_sum(1, 4 * p, 0, ell) != -1) {
      return {false, "c(l,1) != -1 for l=" + std::to_string(ell)};
    }
  }
  return {true, std::to_string(n) + " triples exact; c(l,1) = -1 for l in {3,5,7,11}, p = 13"};
}

// 6. Hasse bound on 1000 random curves.
Outcome hasse_property() {
  std::mt19937_64 rng(0);
  const auto primes = primes_upto(5, 1000);
  std::size_t tested = 0;
  double worst = 0;
  while (tested < 1000) {
    const i64 p = primes[rng() % primes.size()];
    const i64 s = static_cast<i64>(rng() % static_cast<u64>(p));
    const i64 t = static_cast<i64>(rng() % static_cast<u64>(p));
    if (CurveModP::is_singular(p, s, t)) continue;
    ++tested;
    const i64 ap = trace_of_frobenius(CurveModP(p, s, t)).a_p;
    if (ap * ap > 4 * p) return {false, "a_p^2 > 4p at p=" + std::to_string(p)};
    worst = std::max(worst, static_cast<double>(ap * ap) / static_cast<double>(4 * p));
  }
  std::ostringstream s;
  s << tested << " curves, max a_p^2/(4p) = " << worst;
  return {true, s.str()};
}

// 7. Bounded proposition ratios over 50 log-uniform primes.
Outcome proposition_ratios() {
  HurwitzCache cache;
  cache.attach_table(std::make_shared<ClassNumberTable>(40004));
  const auto ps = sample_primes_log_uniform(50, 1000, 10000, 0);
  double max34 = 0, max33 = 0;
  i64 at34 = 0, at33 = 0;
  for (const u64 up : ps) {
    const auto p = static_cast<i64>(up);
    const double r34 = prop34_sum(p, cache).ratio;
    const double r33 = prop33_sum(p, p, cache).ratio;
    if (r34 > max34) max34 = r34, at34 = p;
    if (r33 > max33) max33 = r33, at33 = p;
  }
  std::ostringstream s;
  s << "max prop34 ratio " << max34 << " (p=" << at34 << "), max prop33 ratio " << max33 << " (p=" << at33 << ")";
  return {max34 < 100 && max33 < 100 && max34 > 0 && max33 > 0, s.str()};
}

// 8. Coherence report for (40, 40, 500, 2).
Outcome coherence_report() {
  const FamilySpec spec{40, 40, 500, 2};
  HurwitzCache c1, c8;
  const auto r1 = family_report(spec, c1, 1);
  const auto r8 = family_report(spec, c8, 8);
  const double direct = r1.direct_average();
  const bool finite = std::isfinite(direct) && std::isfinite(r1.main_term) && r1.ratio_direct_main &&
                      std::isfinite(*r1.ratio_direct_main);
  const bool positive = direct > 0 && r1.main_term > 0;
  const bool deterministic = to_json(r1).dump() == to_json(r8).dump();
  std::ostringstream s;
  s << "direct_average=" << r1.direct_average_num << "/" << r1.direct_average_den << " (" << direct
    << "), main_term=" << r1.main_term << ", ratio=" << (r1.ratio_direct_main ? *r1.ratio_direct_main : NAN)
    << ", jobs 1 vs 8 " << (deterministic ? "identical" : "DIFFER");
  return {finite && positive && deterministic, s.str()};
}

// 9. Convergence of the twin-order constant and its first two factors.
Outcome c2_convergence() {
  const bool f2 = c2_euler_factor_exact(2) == ExactFraction{4, 9};
  const bool f3 = c2_euler_factor_exact(3) == ExactFraction{189, 256};
  const long double gap = c2_cauchy_gap(1000, 10000);
  std::ostringstream s;
  s << "factor(2)=4/9 " << (f2 ? "ok" : "WRONG") << ", factor(3)=189/256 " << (f3 ? "ok" : "WRONG")
    << ", |P(1e4)-P(1e3)|/P(1e4) = " << static_cast<double>(gap) << " (required < 1e-06)";
  return {f2 && f3 && gap < 1e-6L, s.str()};
}

// 10. Monotonicity in X on {10, 100, 1000}.
Outcome monotonicity() {
  const CurveZ e(0, 2);
  const std::vector<i64> grid{10, 100, 1000};
  HurwitzCache cache;
  std::vector<double> cyc, twin, main, integral;
  for (const i64 X : grid) {
    cyc.push_back(static_cast<double>(pi_E_L(e, {2, X, 5})));
    twin.push_back(static_cast<double>(pi_E_twin(e, X)));
    main.push_back(main_term_sum(X, 2, cache));
    integral.push_back(jones_integral(static_cast<double>(X), 2));
  }
  auto monotone = [](const std::vector<double>& v) { return std::is_sorted(v.begin(), v.end()); };
  auto show = [](const std::vector<double>& v) {
    std::ostringstream s;
    s << v[0] << "," << v[1] << "," << v[2];
    return s.str();
  };
  const bool ok = monotone(cyc) && monotone(twin) && monotone(main) && monotone(integral);
  return {ok, "pi_E_2=[" + show(cyc) + "] pi_twin=[" + show(twin) + "] main_term=[" + show(main) +
                  "] jones_integral=[" + show(integral) + "]"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Deuring exactness (5 <= p <= 199)", deuring_exactness},
      {"partition of nonsingular pairs by group order", partition_check},
      {"L(1, chi_d) forms vs series, d in [-5000, -3]", l_value_cross_validation},
      {"amicable pair (13, 19) on y^2 = x^3 + 2", amicable_pair},
      {"character-sum closed form", character_sums},
      {"Hasse bound on 1000 random curves", hasse_property},
      {"proposition ratios over 50 sampled primes", proposition_ratios},
      {"family coherence report (40, 40, 500, 2)", coherence_report},
      {"C2 partial-product convergence and exact factors", c2_convergence},
      {"monotonicity in X", monotonicity},
  };

  std::size_t first = 1, last = criteria.size();
  if (argc > 1) {
    first = last = static_cast<std::size_t>(std::stoul(argv[1]));
    if (first < 1 || first > criteria.size()) {
      std::cerr << "criterion must be 1.." << criteria.size() << '\n';
      return 2;
    }
  }

  int failures = 0;
  for (std::size_t i = first; i <= last; ++i) {
    const auto& [name, check] = criteria[i - 1];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2zu: %s  %s -- %s [%.2fs]\n", i, o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(),
                secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}

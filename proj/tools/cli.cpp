#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ecaliquot/aliquot.hpp"
#include "ecaliquot/arith.hpp"
#include "ecaliquot/classnum.hpp"
#include "ecaliquot/conjectures.hpp"
#include "ecaliquot/curves.hpp"
#include "ecaliquot/family.hpp"
#include "ecaliquot/hurwitz_cache.hpp"
#include "ecaliquot/parallel.hpp"

#ifndef ECALIQUOT_VERSION
#define ECALIQUOT_VERSION "0.0.0"
#endif

namespace ecaliquot::cli {
namespace {

using json = nlohmann::json;

struct BudgetRefusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IdentityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::string format = "csv";
  unsigned jobs = 1;
  u64 seed = 0;
  std::string cache_path;
  bool no_cache = false;
  bool force = false;
  std::string manifest_path;
};

// Everything a subcommand needs at run time.
struct Context {
  const Globals& g;
  std::ostream& out;
  std::ostream& err;
  std::unique_ptr<HurwitzCache> cache;

  [[nodiscard]] bool csv() const { return g.format == "csv"; }
  [[nodiscard]] unsigned workers() const { return g.jobs == 0 ? default_jobs() : g.jobs; }

  HurwitzCache& hcache() {
    if (!cache) {
      if (g.no_cache) {
        cache = std::make_unique<HurwitzCache>();
      } else {
        cache = std::make_unique<HurwitzCache>(g.cache_path.empty() ? HurwitzCache::default_path()
                                                                     : std::filesystem::path(g.cache_path));
      }
    }
    return *cache;
  }
};

std::string fraction(const HurwitzValue& h) {
  if (h.denominator == 1) return std::to_string(h.numerator);
  return std::to_string(h.numerator) + "/" + std::to_string(h.denominator);
}

std::string fmt(double v) { return format_double(v); }

void emit_json(Context& ctx, const json& j) { ctx.out << j.dump() << '\n'; }

std::vector<i64> parse_list(const std::string& text, const char* what) {
  std::vector<i64> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    i64 v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw std::invalid_argument(std::string(what) + ": not an integer list: '" + text + "'");
    }
    values.push_back(v);
    start = comma + 1;
  }
  return values;
}

// ---------------------------------------------------------------------------
// subcommands

struct CyclesArgs {
  i64 a = 0, b = 0, X = 100, min_prime = 5;
  int L = 2;
};

void cmd_cycles(Context& ctx, const CyclesArgs& args) {
  const CurveZ curve(args.a, args.b);
  CycleSearchConfig cfg{args.L, args.X, args.min_prime};
  cfg.validate();
  const auto cycles = find_aliquot_cycles(curve, cfg, ctx.workers());
  if (ctx.csv()) {
    for (int i = 1; i <= args.L; ++i) ctx.out << (i > 1 ? "," : "") << 'p' << i;
    ctx.out << '\n';
    for (const auto& c : cycles) {
      for (std::size_t i = 0; i < c.primes.size(); ++i) ctx.out << (i ? "," : "") << c.primes[i];
      ctx.out << '\n';
    }
    ctx.out << "# pi_E_L(X)=" << cycles.size() << '\n';
  } else {
    json rows = json::array();
    for (const auto& c : cycles) rows.push_back(c.primes);
    emit_json(ctx, json{{"a", args.a},
                        {"b", args.b},
                        {"L", args.L},
                        {"X", args.X},
                        {"min_prime", args.min_prime},
                        {"cycles", rows},
                        {"count", cycles.size()}});
  }
}

struct CurveXArgs {
  i64 a = 0, b = 0, X = 100;
};

void cmd_twin(Context& ctx, const CurveXArgs& args) {
  const CurveZ curve(args.a, args.b);
  const auto n = pi_E_twin(curve, args.X, ctx.workers());
  if (ctx.csv()) {
    ctx.out << "a,b,X,pi_twin\n" << args.a << ',' << args.b << ',' << args.X << ',' << n << '\n';
  } else {
    emit_json(ctx, json{{"a", args.a}, {"b", args.b}, {"X", args.X}, {"pi_twin", n}});
  }
}

void cmd_anomalous(Context& ctx, const CurveXArgs& args) {
  const CurveZ curve(args.a, args.b);
  const auto primes = anomalous_primes(curve, args.X, ctx.workers());
  if (ctx.csv()) {
    ctx.out << "p\n";
    for (const i64 p : primes) ctx.out << p << '\n';
    ctx.out << "# count=" << primes.size() << '\n';
  } else {
    emit_json(ctx, json{{"a", args.a}, {"b", args.b}, {"X", args.X}, {"primes", primes}, {"count", primes.size()}});
  }
}

struct ClassnumArgs {
  i64 D = -3;
  std::vector<i64> range;
};

void cmd_classnum(Context& ctx, const ClassnumArgs& args) {
  i64 lo = args.D;
  i64 hi = args.D;
  if (!args.range.empty()) {
    lo = args.range.at(0);
    hi = args.range.at(1);
  }
  if (lo > hi) throw std::invalid_argument("classnum: empty range " + std::to_string(lo) + ".." + std::to_string(hi));
  if (hi >= 0) throw std::invalid_argument("classnum: D must be negative, got " + std::to_string(hi));
  auto& cache = ctx.hcache();
  if (hi > lo) cache.attach_table(std::make_shared<ClassNumberTable>(-lo));

  json rows = json::array();
  if (ctx.csv()) ctx.out << "D,twelve_H,H\n";
  for (i64 D = lo; D <= hi; ++D) {
    const auto H = cache.get(D);
    if (ctx.csv()) {
      ctx.out << D << ',' << H.twelfths() << ',' << fraction(H) << '\n';
    } else {
      rows.push_back(json{{"D", D},
                          {"twelve_H", H.twelfths()},
                          {"H_num", H.numerator},
                          {"H_den", H.denominator},
                          {"H", H.to_double()}});
    }
  }
  if (!ctx.csv()) emit_json(ctx, args.range.empty() ? rows.at(0) : json{{"rows", rows}});
}

struct LvalueArgs {
  i64 D = -3;
  double y = 0.0;
};

const char* method_name(LMethod m) {
  switch (m) {
    case LMethod::kFormsFormula: return "forms";
    case LMethod::kSeries: return "series";
    case LMethod::kTruncated: return "truncated";
  }
  return "?";
}

void cmd_lvalue(Context& ctx, const LvalueArgs& args) {
  const Discriminant D(args.D);
  std::vector<LValue> values{dirichlet_L1(D), dirichlet_L1_series(D)};
  if (args.y > 0.0) values.push_back(truncated_L1(args.D, args.y));
  if (ctx.csv()) {
    ctx.out << "D,method,y,value\n";
    for (const auto& v : values) ctx.out << v.D << ',' << method_name(v.method) << ',' << fmt(v.y) << ',' << fmt(v.value) << '\n';
  } else {
    json rows = json::array();
    for (const auto& v : values) rows.push_back(json{{"method", method_name(v.method)}, {"y", v.y}, {"value", v.value}});
    emit_json(ctx, json{{"D", args.D}, {"fundamental", is_fundamental_discriminant(args.D)}, {"values", rows}});
  }
}

struct GsArgs {
  i64 Q = 1000;
  double alpha = 1.0;
  GsOptions options;
};

void cmd_gs_report(Context& ctx, const GsArgs& args) {
  const auto r = gs_truncation_report(args.Q, args.alpha, args.options);
  if (ctx.csv()) {
    ctx.out << "d,l_value,l_truncated,relative_error\n";
    for (const auto& row : r.rows) {
      ctx.out << row.d << ',' << fmt(row.l_value) << ',' << fmt(row.l_truncated) << ',' << fmt(row.relative_error) << '\n';
    }
    ctx.out << "# Q=" << r.Q << " alpha=" << fmt(r.alpha) << " y=" << fmt(r.y) << " y_capped=" << (r.y_capped ? 1 : 0)
            << " threshold=" << fmt(r.threshold) << " exceptional=" << r.exceptional << " allowed=" << fmt(r.allowed)
            << " mean_error=" << fmt(r.mean_error) << " max_error=" << fmt(r.max_error) << '\n';
  } else {
    json rows = json::array();
    for (const auto& row : r.rows) {
      rows.push_back(json{{"d", row.d},
                          {"l_value", row.l_value},
                          {"l_truncated", row.l_truncated},
                          {"relative_error", row.relative_error}});
    }
    emit_json(ctx, json{{"Q", r.Q},
                        {"alpha", r.alpha},
                        {"y", r.y},
                        {"y_capped", r.y_capped},
                        {"threshold", r.threshold},
                        {"exceptional", r.exceptional},
                        {"allowed", r.allowed},
                        {"mean_error", r.mean_error},
                        {"max_error", r.max_error},
                        {"rows", rows}});
  }
}

struct DeuringArgs {
  i64 pmax = 50;
  bool inject_fault = false;
};

inline constexpr i64 kDeuringGuard = 1000;

std::string twelfths_text(i64 t) {
  if (t % 12 == 0) return std::to_string(t / 12);
  const HurwitzValue v = HurwitzValue::from_twelfths(t);
  return fraction(v);
}

void cmd_deuring(Context& ctx, const DeuringArgs& args) {
  if (args.pmax > kDeuringGuard && !ctx.g.force) {
    throw BudgetRefusal("deuring: --pmax " + std::to_string(args.pmax) + " exceeds " + std::to_string(kDeuringGuard) +
                        " (brute force is cubic in p); pass --force to run anyway");
  }
  std::vector<i64> primes;
  if (args.pmax >= 5) {
    for (const u64 p : primes_in(5, static_cast<u64>(args.pmax))) primes.push_back(static_cast<i64>(p));
  }
  auto& cache = ctx.hcache();
  if (!primes.empty()) cache.attach_table(std::make_shared<ClassNumberTable>(4 * primes.back()));

  std::vector<std::vector<DeuringCheck>> per_p(primes.size());
  parallel_for(primes.size(), ctx.workers(), [&](std::size_t i) { per_p[i] = deuring_checks(primes[i], cache); });
  if (args.inject_fault && !per_p.empty() && !per_p.front().empty()) per_p.front().front().lhs += 1;

  std::size_t checks = 0;
  std::vector<DeuringCheck> bad;
  for (const auto& v : per_p) {
    checks += v.size();
    for (const auto& c : v) {
      if (!c.holds()) bad.push_back(c);
    }
  }

  if (ctx.csv()) {
    ctx.out << "p,N,lhs,rhs,holds\n";
    for (const auto& v : per_p) {
      for (const auto& c : v) {
        ctx.out << c.p << ',' << c.N << ',' << c.lhs << ',' << twelfths_text(c.rhs_twelfths) << ','
                << (c.holds() ? 1 : 0) << '\n';
      }
    }
    if (bad.empty()) ctx.out << "# all identities hold; checks=" << checks << '\n';
    else ctx.out << "# identity violations=" << bad.size() << "; checks=" << checks << '\n';
  } else {
    json mismatches = json::array();
    for (const auto& c : bad) {
      mismatches.push_back(json{{"p", c.p}, {"N", c.N}, {"lhs", c.lhs}, {"rhs", twelfths_text(c.rhs_twelfths)}});
    }
    emit_json(ctx, json{{"pmax", args.pmax},
                        {"primes", primes.size()},
                        {"checks", checks},
                        {"all_hold", bad.empty()},
                        {"message", bad.empty() ? "all identities hold" : "identity violation"},
                        {"mismatches", mismatches}});
  }
  if (!bad.empty()) {
    const auto& c = bad.front();
    throw IdentityViolation("deuring: identity violated at p=" + std::to_string(c.p) + " N=" + std::to_string(c.N) +
                            " lhs=" + std::to_string(c.lhs) + " rhs=" + twelfths_text(c.rhs_twelfths) + " (" +
                            std::to_string(bad.size()) + " mismatches)");
  }
}

struct FamilyArgs {
  i64 A = 1, B = 1;
  std::string X = "100";
  int L = 2;
  double budget = 1e8;
};

void cmd_family(Context& ctx, const FamilyArgs& args) {
  const auto xs = parse_list(args.X, "family: X");
  std::vector<FamilySpec> specs;
  for (const i64 X : xs) {
    FamilySpec spec{args.A, args.B, X, args.L};
    spec.validate();
    if (X < 1) throw std::invalid_argument("family: X must be positive");
    specs.push_back(spec);
  }
  const i64 xmax = *std::max_element(xs.begin(), xs.end());
  const double work = static_cast<double>(args.A) * static_cast<double>(args.B) * static_cast<double>(xmax);
  ctx.err << "estimate: curves=" << family_size(args.A, args.B) << " X_max=" << xmax << " L=" << args.L
          << " A*B*X=" << fmt(work) << " budget=" << fmt(args.budget) << '\n';
  if (work > args.budget && !ctx.g.force) {
    throw BudgetRefusal("family: A*B*X = " + fmt(work) + " exceeds the budget " + fmt(args.budget) +
                        "; pass --force or raise --budget");
  }

  std::vector<FamilyReport> reports;
  for (const auto& spec : specs) reports.push_back(family_report(spec, ctx.hcache(), ctx.workers()));

  if (ctx.csv()) {
    ctx.out << family_csv_header() << '\n';
    for (const auto& r : reports) ctx.out << to_csv_row(r) << '\n';
  } else if (reports.size() == 1) {
    emit_json(ctx, to_json(reports.front()));
  } else {
    json rows = json::array();
    for (const auto& r : reports) rows.push_back(to_json(r));
    emit_json(ctx, json{{"reports", rows}});
  }
}

struct MaintermArgs {
  i64 X = 100;
  int L = 2;
  bool all_chains = false;
};

void cmd_mainterm(Context& ctx, const MaintermArgs& args) {
  const auto chains = args.all_chains ? ChainSet::kAll : ChainSet::kNormalized;
  const double value = main_term_sum(args.X, args.L, ctx.hcache(), chains, ctx.workers());
  const char* name = args.all_chains ? "all" : "normalized";
  if (ctx.csv()) {
    ctx.out << "X,L,chains,main_term\n" << args.X << ',' << args.L << ',' << name << ',' << fmt(value) << '\n';
  } else {
    emit_json(ctx, json{{"X", args.X}, {"L", args.L}, {"chains", name}, {"main_term", value}});
  }
}

struct PropsArgs {
  i64 p = 0;
  i64 r = 0;
  std::size_t sample = 0;
  i64 lo = 1000;
  i64 hi = 10000;
};

void cmd_props(Context& ctx, const PropsArgs& args) {
  struct Row {
    i64 p;
    std::optional<i64> r;
    PropSum s;
  };
  auto& cache = ctx.hcache();
  std::vector<Row> rows;
  if (args.sample > 0) {
    if (args.lo < 5 || args.hi < args.lo) throw std::invalid_argument("props: need 5 <= --lo <= --hi");
    const auto ps = sample_primes_log_uniform(args.sample, static_cast<u64>(args.lo), static_cast<u64>(args.hi), ctx.g.seed);
    cache.attach_table(std::make_shared<ClassNumberTable>(4 * (args.hi + 1)));
    std::vector<std::pair<PropSum, PropSum>> sums(ps.size());
    parallel_for(ps.size(), ctx.workers(), [&](std::size_t i) {
      const auto p = static_cast<i64>(ps[i]);
      sums[i] = {prop34_sum(p, cache), prop33_sum(p, p, cache)};
    });
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const auto p = static_cast<i64>(ps[i]);
      rows.push_back(Row{p, std::nullopt, sums[i].first});
      rows.push_back(Row{p, p, sums[i].second});
    }
  } else {
    if (args.p == 0) throw std::invalid_argument("props: give --p or --sample");
    if (args.r != 0) rows.push_back(Row{args.p, args.r, prop33_sum(args.p, args.r, cache)});
    else rows.push_back(Row{args.p, std::nullopt, prop34_sum(args.p, cache)});
  }

  double max34 = 0.0, max33 = 0.0;
  for (const auto& row : rows) (row.r ? max33 : max34) = std::max(row.r ? max33 : max34, row.s.ratio);

  if (ctx.csv()) {
    ctx.out << "p,r,kind,terms,sum,ratio\n";
    for (const auto& row : rows) {
      ctx.out << row.p << ',' << (row.r ? std::to_string(*row.r) : "") << ',' << (row.r ? "prop33" : "prop34") << ','
              << row.s.terms << ',' << fmt(row.s.sum) << ',' << fmt(row.s.ratio) << '\n';
    }
    if (args.sample > 0) ctx.out << "# max_ratio_prop34=" << fmt(max34) << " max_ratio_prop33=" << fmt(max33) << '\n';
  } else {
    json items = json::array();
    for (const auto& row : rows) {
      items.push_back(json{{"p", row.p},
                           {"r", row.r ? json(*row.r) : json(nullptr)},
                           {"kind", row.r ? "prop33" : "prop34"},
                           {"terms", row.s.terms},
                           {"sum", row.s.sum},
                           {"ratio", row.s.ratio}});
    }
    json j{{"rows", items}};
    if (args.sample > 0) {
      j["seed"] = ctx.g.seed;
      j["max_ratio_prop34"] = max34;
      j["max_ratio_prop33"] = max33;
    }
    emit_json(ctx, j);
  }
}

struct RcountArgs {
  std::string primes, s, t;
  i64 A = 10, B = 10;
};

void cmd_rcount(Context& ctx, const RcountArgs& args) {
  const ChainTuple P(parse_list(args.primes, "rcount: --primes"));
  const auto S = parse_list(args.s, "rcount: --s");
  const auto T = parse_list(args.t, "rcount: --t");
  const auto r = r_count(P, S, T, args.A, args.B);
  if (ctx.csv()) {
    ctx.out << "count,reference,orbit_expectation\n"
            << r.count << ',' << fmt(r.reference) << ',' << fmt(r.orbit_expectation) << '\n';
  } else {
    emit_json(ctx, json{{"count", r.count}, {"reference", r.reference}, {"orbit_expectation", r.orbit_expectation}});
  }
}

struct ConstantsArgs {
  i64 cutoff = 10000;
  i64 X = 0;
  int L = 2;
};

void cmd_constants(Context& ctx, const ConstantsArgs& args) {
  const auto st = jones_C2(args.cutoff);
  const auto euler = static_cast<double>(st.euler_product);
  const auto c2 = static_cast<double>(st.partial_product);
  const auto last = static_cast<double>(st.last_factor);
  double integral = 0.0, density = 0.0;
  if (args.X > 0) {
    if (args.X < 2) throw std::invalid_argument("constants: --X must be at least 2");
    integral = jones_integral(static_cast<double>(args.X), args.L);
    density = ss_density(static_cast<double>(args.X), args.L);
  }
  if (ctx.csv()) {
    ctx.out << "cutoff,euler_product,C2,last_factor,tail_monotone";
    if (args.X > 0) ctx.out << ",X,L,jones_integral,C2_times_integral,ss_density";
    ctx.out << '\n' << args.cutoff << ',' << fmt(euler) << ',' << fmt(c2) << ',' << fmt(last) << ','
            << (st.tail_monotone ? 1 : 0);
    if (args.X > 0) {
      ctx.out << ',' << args.X << ',' << args.L << ',' << fmt(integral) << ',' << fmt(c2 * integral) << ','
              << fmt(density);
    }
    ctx.out << '\n';
  } else {
    json j{{"cutoff", args.cutoff},
           {"largest_prime", st.cutoff},
           {"euler_product", euler},
           {"C2", c2},
           {"last_factor", last},
           {"tail_monotone", st.tail_monotone}};
    if (args.X > 0) {
      j["X"] = args.X;
      j["L"] = args.L;
      j["jones_integral"] = integral;
      j["C2_times_integral"] = c2 * integral;
      j["ss_density"] = density;
    }
    emit_json(ctx, j);
  }
}

// ---------------------------------------------------------------------------

// Column/key documentation shown in --help; kept in sync with docs/FORMATS.md.
const std::map<std::string, std::string>& formats() {
  static const std::map<std::string, std::string> f{
      {"cycles", "CSV: p1,...,pL per cycle, then '# pi_E_L(X)=<count>'. JSON: a,b,L,X,min_prime,cycles,count"},
      {"twin", "CSV: a,b,X,pi_twin. JSON: a,b,X,pi_twin"},
      {"anomalous", "CSV: p per row, then '# count=<n>'. JSON: a,b,X,primes,count"},
      {"classnum", "CSV: D,twelve_H,H. JSON: D,twelve_H,H_num,H_den,H (range: {rows:[...]})"},
      {"lvalue", "CSV: D,method,y,value (method: forms|series|truncated). JSON: D,fundamental,values"},
      {"gs-report", "CSV: d,l_value,l_truncated,relative_error, then a '# ...' summary line. "
                    "JSON: Q,alpha,y,y_capped,threshold,exceptional,allowed,mean_error,max_error,rows"},
      {"deuring", "CSV: p,N,lhs,rhs,holds, then '# all identities hold; checks=<n>'. "
                  "JSON: pmax,primes,checks,all_hold,message,mismatches"},
      {"family", "CSV: " + family_csv_header() +
                     ". JSON: A,B,X,L,family_size,direct_average_num,direct_average_den,main_term,ss_density,"
                     "ratio_direct_main,ratio_direct_ss (sweep: {reports:[...]})"},
      {"mainterm", "CSV: X,L,chains,main_term. JSON: same keys"},
      {"props", "CSV: p,r,kind,terms,sum,ratio (kind: prop34|prop33). JSON: rows[,seed,max_ratio_prop34,max_ratio_prop33]"},
      {"rcount", "CSV: count,reference,orbit_expectation. JSON: same keys"},
      {"constants", "CSV: cutoff,euler_product,C2,last_factor,tail_monotone[,X,L,jones_integral,C2_times_integral,"
                    "ss_density]. JSON: same keys plus largest_prime"},
  };
  return f;
}

json manifest_parameters(const CLI::App& sub) {
  json params = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help") continue;
    std::string value;
    const auto& res = opt->results();
    if (!res.empty()) {
      for (std::size_t i = 0; i < res.size(); ++i) value += (i ? "," : "") + res[i];
    } else {
      value = opt->get_default_str();
      if (value == "{}") value.clear();
    }
    params[name] = value;
  }
  return params;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Aliquot cycles of elliptic curves, Hurwitz class numbers and family averages", "ecaliquot"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->always_capture_default();

  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--jobs", g.jobs, "Worker threads (0 = all cores)");
  app.add_option("--seed", g.seed, "Seed for randomized sampling");
  app.add_option("--cache", g.cache_path, "H-cache file (default: $ECALIQUOT_HCACHE or the per-user data directory)");
  app.add_flag("--no-cache", g.no_cache, "Keep H values in memory only");
  app.add_flag("--force", g.force, "Override cost guards and budgets");
  app.add_option("--manifest", g.manifest_path, "Write the run manifest to this file instead of stderr");
  app.set_version_flag("--version", ECALIQUOT_VERSION);

  std::vector<std::pair<CLI::App*, std::function<void(Context&)>>> commands;
  auto add = [&](const std::string& name, const std::string& description) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->footer("Output columns: " + formats().at(name));
    return sub;
  };

  CyclesArgs cycles;
  {
    auto* s = add("cycles", "Normalized aliquot cycles of y^2 = x^3 + a x + b");
    s->add_option("a", cycles.a)->required();
    s->add_option("b", cycles.b)->required();
    s->add_option("L", cycles.L)->required();
    s->add_option("X", cycles.X)->required();
    s->add_option("--min-prime", cycles.min_prime, "Smallest prime allowed in a cycle");
    commands.emplace_back(s, [&](Context& c) { cmd_cycles(c, cycles); });
  }
  CurveXArgs twin;
  {
    auto* s = add("twin", "Count primes p <= X with #E(F_p) prime");
    s->add_option("a", twin.a)->required();
    s->add_option("b", twin.b)->required();
    s->add_option("X", twin.X)->required();
    commands.emplace_back(s, [&](Context& c) { cmd_twin(c, twin); });
  }
  CurveXArgs anomalous;
  {
    auto* s = add("anomalous", "Primes p <= X with #E(F_p) = p");
    s->add_option("a", anomalous.a)->required();
    s->add_option("b", anomalous.b)->required();
    s->add_option("X", anomalous.X)->required();
    commands.emplace_back(s, [&](Context& c) { cmd_anomalous(c, anomalous); });
  }
  ClassnumArgs classnum;
  {
    auto* s = add("classnum", "Hurwitz class numbers H(D)");
    auto* d = s->add_option("D", classnum.D, "Negative integer");
    auto* r = s->add_option("--range", classnum.range, "Dmin Dmax")->expected(2);
    d->excludes(r);
    s->require_option(1);
    commands.emplace_back(s, [&](Context& c) { cmd_classnum(c, classnum); });
  }
  LvalueArgs lvalue;
  {
    auto* s = add("lvalue", "L(1, chi_D) by the forms formula, the series and optionally the truncated Euler product");
    s->add_option("D", lvalue.D)->required();
    s->add_option("--y", lvalue.y, "Truncation point of the Euler product");
    commands.emplace_back(s, [&](Context& c) { cmd_lvalue(c, lvalue); });
  }
  GsArgs gs;
  {
    auto* s = add("gs-report", "Truncated Euler products against L(1, chi_d) for fundamental |d| <= Q");
    s->add_option("Q", gs.Q)->required();
    s->add_option("alpha", gs.alpha)->required();
    s->add_option("--y-cap", gs.options.y_cap, "Upper limit on the truncation point");
    s->add_option("--exponent-scale", gs.options.exponent_scale, "Multiplier of the exponent 8 alpha^2");
    commands.emplace_back(s, [&](Context& c) { cmd_gs_report(c, gs); });
  }
  DeuringArgs deuring;
  {
    auto* s = add("deuring", "Check #{(s,t) : #E = N} = (p-1) H(D(p,N)) for all primes 5 <= p <= pmax");
    s->add_option("--pmax", deuring.pmax, "Largest prime (above 1000 needs --force)");
    s->add_flag("--inject-fault", deuring.inject_fault, "Test hook: corrupt one count")->group("");
    commands.emplace_back(s, [&](Context& c) { cmd_deuring(c, deuring); });
  }
  FamilyArgs family;
  {
    auto* s = add("family", "Family average of pi_{E,L}(X) over |a| <= A, |b| <= B");
    s->add_option("A", family.A)->required();
    s->add_option("B", family.B)->required();
    s->add_option("X", family.X, "Bound, or comma-separated bounds for a sweep")->required();
    s->add_option("L", family.L)->required();
    s->add_option("--budget", family.budget, "Largest A*B*X run without --force");
    commands.emplace_back(s, [&](Context& c) { cmd_family(c, family); });
  }
  MaintermArgs mainterm;
  {
    auto* s = add("mainterm", "Class-number main term of the family average");
    s->add_option("X", mainterm.X)->required();
    s->add_option("L", mainterm.L)->required();
    s->add_flag("--all-chains", mainterm.all_chains, "Sum over all window chains, not just normalized ones");
    commands.emplace_back(s, [&](Context& c) { cmd_mainterm(c, mainterm); });
  }
  PropsArgs props;
  {
    auto* s = add("props", "Window sums of H(D(p,q)) and H(D(p,q)) H(D(r,q))");
    auto* p = s->add_option("--p", props.p, "Prime p > 3");
    s->add_option("--r", props.r, "Second prime for the product sum")->needs(p);
    auto* n = s->add_option("--sample", props.sample, "Sample this many primes log-uniformly (uses --seed)");
    s->add_option("--lo", props.lo, "Sampling range start");
    s->add_option("--hi", props.hi, "Sampling range end");
    p->excludes(n);
    commands.emplace_back(s, [&](Context& c) { cmd_props(c, props); });
  }
  RcountArgs rcount;
  {
    auto* s = add("rcount", "Count family members reducing to given isomorphism classes");
    s->add_option("--primes", rcount.primes, "Comma-separated chain primes")->required();
    s->add_option("--s", rcount.s, "Comma-separated s_i")->required();
    s->add_option("--t", rcount.t, "Comma-separated t_i")->required();
    s->add_option("--A", rcount.A);
    s->add_option("--B", rcount.B);
    commands.emplace_back(s, [&](Context& c) { cmd_rcount(c, rcount); });
  }
  ConstantsArgs constants;
  {
    auto* s = add("constants", "Partial Euler product of the twin-order constant and the reference integral");
    s->add_option("--cutoff", constants.cutoff, "Include primes <= cutoff");
    s->add_option("--X", constants.X, "Also evaluate the integral up to X");
    s->add_option("--L", constants.L);
    commands.emplace_back(s, [&](Context& c) { cmd_constants(c, constants); });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << ECALIQUOT_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }

  // Help on a subcommand is also reported via CallForHelp, so reaching here means a real run.
  CLI::App* chosen = nullptr;
  std::function<void(Context&)> body;
  for (auto& [sub, fn] : commands) {
    if (sub->parsed()) {
      chosen = sub;
      body = fn;
    }
  }
  if (chosen == nullptr) {
    err << "error: no subcommand\n";
    return kValidation;
  }

  Context ctx{g, out, err, nullptr};
  const auto start = std::chrono::steady_clock::now();
  int code = kOk;
  try {
    body(ctx);
  } catch (const BudgetRefusal& e) {
    err << "error: " << e.what() << '\n';
    code = kBudgetRefusal;
  } catch (const IdentityViolation& e) {
    err << "error: " << e.what() << '\n';
    code = kIdentityViolation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = kValidation;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (ctx.cache && ctx.cache->path()) {
    try {
      ctx.cache->flush();
    } catch (const std::exception& e) {
      err << "warning: could not write the H-cache: " << e.what() << '\n';
    }
  }

  json params = manifest_parameters(*chosen);
  params["format"] = g.format;
  params["seed"] = std::to_string(g.seed);
  params["force"] = g.force ? "true" : "false";
  params["cache"] = g.no_cache ? "none" : (ctx.cache && ctx.cache->path() ? ctx.cache->path()->string() : g.cache_path);
  const json manifest{{"subcommand", chosen->get_name()},
                      {"parameters", params},
                      {"artifact_version", ECALIQUOT_VERSION},
                      {"wall_time", wall},
                      {"worker_count", ctx.workers()},
                      {"exit_code", code}};
  if (g.manifest_path.empty()) {
    err << "manifest: " << manifest.dump() << '\n';
  } else {
    std::ofstream file(g.manifest_path);
    if (!file) {
      err << "warning: could not open manifest file " << g.manifest_path << '\n';
    } else {
      file << manifest.dump(2) << '\n';
    }
  }
  return code;
}

}  // namespace ecaliquot::cli

#include <benchmark/benchmark.h>

#include "ecaliquot/aliquot.hpp"
#include "ecaliquot/classnum.hpp"
#include "ecaliquot/curves.hpp"
#include "ecaliquot/family.hpp"

using namespace ecaliquot;

static void BM_TraceOfFrobenius(benchmark::State& state) {
  const auto p = static_cast<i64>(prev_prime(static_cast<u64>(state.range(0))));
  const CurveModP curve(p, 3, 7);
  for (auto _ : state) benchmark::DoNotOptimize(trace_of_frobenius(curve));
}
BENCHMARK(BM_TraceOfFrobenius)->Arg(1000)->Arg(100000);

static void BM_TraceWithTable(benchmark::State& state) {
  const auto p = prev_prime(static_cast<u64>(state.range(0)));
  const QuadraticCharacterTable chi(p);
  const CurveModP curve(static_cast<i64>(p), 3, 7);
  for (auto _ : state) benchmark::DoNotOptimize(trace_of_frobenius(curve, chi));
}
BENCHMARK(BM_TraceWithTable)->Arg(1000)->Arg(100000);

static void BM_ClassNumber(benchmark::State& state) {
  const Discriminant D(-4 * state.range(0) - 3);
  for (auto _ : state) benchmark::DoNotOptimize(class_number_h(D));
}
BENCHMARK(BM_ClassNumber)->Arg(1000)->Arg(1000000);

static void BM_ClassNumberTable(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ClassNumberTable(state.range(0)));
}
BENCHMARK(BM_ClassNumberTable)->Arg(10000)->Arg(100000);

static void BM_Sieve(benchmark::State& state) {
  const auto hi = static_cast<u64>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(primes_in(2, hi));
}
BENCHMARK(BM_Sieve)->Arg(1000000)->Arg(10000000);

static void BM_CycleSearch(benchmark::State& state) {
  const CurveZ e(0, 2);
  for (auto _ : state) benchmark::DoNotOptimize(pi_E_L(e, {2, state.range(0), 5}));
}
BENCHMARK(BM_CycleSearch)->Arg(1000)->Arg(10000);

static void BM_MainTerm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(main_term_sum(state.range(0), 2));
}
BENCHMARK(BM_MainTerm)->Arg(1000);

BENCHMARK_MAIN();

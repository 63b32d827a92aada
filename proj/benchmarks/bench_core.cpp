#include <benchmark/benchmark.h>

#include "apx/approx.hpp"
#include "apx/harness.hpp"
#include "apx/norms.hpp"
#include "apx/smoothness.hpp"
#include "apx/weights.hpp"

using namespace apx;

static void BM_AnalyzeSynthesize(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(0));
    const TrigPoly p = random_poly(static_cast<int>(n / 2 - 1), 1);
    const PeriodicGrid g(n);
    for (auto _ : st) benchmark::DoNotOptimize(analyze(synthesize(p, g)));
}
BENCHMARK(BM_AnalyzeSynthesize)->RangeMultiplier(4)->Range(64, 16384);

static void BM_WeightedNorm(benchmark::State& st) {
    const TrigPoly p = random_poly(static_cast<int>(st.range(0)), 2);
    const Weight w = Weight::power(0.0, 0.5);
    for (auto _ : st) benchmark::DoNotOptimize(weighted_norm(p, 2.0, w));
}
BENCHMARK(BM_WeightedNorm)->RangeMultiplier(4)->Range(8, 2048);

static void BM_Modulus(benchmark::State& st) {
    const TrigPoly f = surrogate(FunctionRule::abs_sin_pow(1.0), 8192);
    const LpNorm nm{2.0, st.range(0) ? Weight::power(0.0, 0.5) : Weight::constant()};
    for (auto _ : st) benchmark::DoNotOptimize(modulus(f, 2, 1.0 / 64, nm));
}
BENCHMARK(BM_Modulus)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_BestApproxL2(benchmark::State& st) {
    const LpNorm nm{2.0, Weight::power(0.0, 0.5)};
    for (auto _ : st) benchmark::DoNotOptimize(best_approx(FunctionRule::abs_sin_pow(1.0), static_cast<int>(st.range(0)), nm));
}
BENCHMARK(BM_BestApproxL2)->RangeMultiplier(4)->Range(4, 256)->Unit(benchmark::kMillisecond);

static void BM_BestApproxL1(benchmark::State& st) {
    const LpNorm nm{1.0, Weight::power(0.0, -0.5)};
    for (auto _ : st) benchmark::DoNotOptimize(best_approx(FunctionRule::abs_sin_pow(1.0), static_cast<int>(st.range(0)), nm));
}
BENCHMARK(BM_BestApproxL1)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

static void BM_Muckenhoupt(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(muckenhoupt_constant(Weight::power(0.0, 0.5), 2.0));
}
BENCHMARK(BM_Muckenhoupt)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

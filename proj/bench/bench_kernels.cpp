// Serial reference vs OpenMP kernels for the Boyd scan and the truncation experiment.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "opideal/nest.hpp"
#include "opideal/symfunc.hpp"

using namespace opideal;

namespace {

int threads() { return omp_get_max_threads(); }

void BM_BoydSerial(benchmark::State& state)
{
    const auto phi = SymNormFunc::schatten(3);
    const int m_max = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(serial::boyd_estimate(phi, m_max, 4 * m_max));
}

void BM_BoydParallel(benchmark::State& state)
{
    const auto phi = SymNormFunc::schatten(3);
    const int m_max = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(boyd_estimate(phi, m_max, 4 * m_max, threads()));
    state.counters["threads"] = threads();
}

void BM_GrowthSerial(benchmark::State& state)
{
    const auto phi = SymNormFunc::schatten(1);
    const std::vector<int> sizes{static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(serial::truncation_norm_experiment(phi, sizes, 40, 7));
}

void BM_GrowthParallel(benchmark::State& state)
{
    const auto phi = SymNormFunc::schatten(1);
    const std::vector<int> sizes{static_cast<int>(state.range(0))};
    for (auto _ : state) benchmark::DoNotOptimize(truncation_norm_experiment(phi, sizes, 40, 7, threads()));
    state.counters["threads"] = threads();
}

} // namespace

BENCHMARK(BM_BoydSerial)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoydParallel)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GrowthSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GrowthParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

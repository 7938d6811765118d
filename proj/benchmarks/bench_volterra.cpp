#include <benchmark/benchmark.h>

#include "mpemba/kernel.hpp"
#include "mpemba/states.hpp"

using namespace mpemba;

namespace {

void BM_Volterra(benchmark::State& st) {
    ModelParams p;
    p.g0 = 0.2;
    p.M = 20;
    const double step = 50.0 / static_cast<double>(st.range(0));
    const auto grid = UniformGrid::spanning(50.0, step);
    const auto kernel = memory_kernel(p, 50.0, step, 64);
    const auto forcing = forcing_term(p, dark_state(p, 5), grid);
    for (auto _ : st) {
        auto sol = solve_volterra(1.0, kernel, forcing, grid);
        benchmark::DoNotOptimize(sol.amplitudes.data());
    }
    st.SetComplexityN(st.range(0));
}
// Cost is quadratic in the grid length.
BENCHMARK(BM_Volterra)->RangeMultiplier(2)->Range(250, 4000)->Complexity(benchmark::oNSquared)
    ->Unit(benchmark::kMillisecond);

void BM_MemoryKernel(benchmark::State& st) {
    ModelParams p;
    p.g0 = 0.2;
    p.M = 1;
    for (auto _ : st) {
        auto k = memory_kernel(p, 50.0, 0.05, 64);
        benchmark::DoNotOptimize(k.values.data());
    }
}
BENCHMARK(BM_MemoryKernel)->Unit(benchmark::kMillisecond);

} // namespace

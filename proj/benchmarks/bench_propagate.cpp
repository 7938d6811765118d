#include <benchmark/benchmark.h>

#include "mpemba/propagate.hpp"
#include "mpemba/states.hpp"

using namespace mpemba;

namespace {

ModelParams lattice(int M) {
    ModelParams p;
    p.g0 = 0.2;
    p.M = M;
    return p;
}

void BM_ChebyshevStep(benchmark::State& st) {
    const auto p = lattice(static_cast<int>(st.range(0)));
    const auto h = build_hamiltonian(p);
    const ChebyshevPropagator prop(h, 0.1, 1e-10);
    Eigen::VectorXcd psi = canonical_state(p).to_vector();
    for (auto _ : st) {
        prop.apply(psi);
        benchmark::DoNotOptimize(psi.data());
    }
    st.counters["order"] = static_cast<double>(prop.order());
}
BENCHMARK(BM_ChebyshevStep)->Arg(64)->Arg(248)->Arg(1024);

void BM_EvolveReference(benchmark::State& st) {
    const auto p = lattice(248);
    const auto h = build_hamiltonian(p);
    const auto s = canonical_state(p);
    for (auto _ : st) {
        auto t = evolve(s, h, {120.0, 0.1, 1e-10, {}, false});
        benchmark::DoNotOptimize(t.distances.data());
    }
}
BENCHMARK(BM_EvolveReference)->Unit(benchmark::kMillisecond);

} // namespace

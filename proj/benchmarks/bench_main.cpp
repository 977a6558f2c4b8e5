#include <benchmark/benchmark.h>

#include "arlab/arlab.hpp"

using namespace arlab;

namespace {

TrigPolynomial table_potential() {
    TrigPolynomial v = TrigPolynomial::constant(1.0);
    v.set(1, 0.0, 1.1);
    return v;
}

void BM_SpectralStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const StationaryDensity sd = solve_order_parameter(2.0);
    SpectralDensity p = SpectralDensity::from_stationary(sd, n);
    FokkerPlanckSolver solver(table_potential(), 2.0, 0.02, n, 1e-3);
    for (auto _ : state) {
        solver.step(p);
        benchmark::DoNotOptimize(p.coeffs().data());
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SpectralStep)->Arg(32)->Arg(50)->Arg(100);

void BM_EulerMaruyamaStep(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const StationaryDensity sd = solve_order_parameter(2.0);
    ParticleEnsemble ens = ParticleEnsemble::from_stationary(sd, n, 1);
    const ParticleParams params{table_potential(), 2.0, 0.02, 1.0, 1e-3};
    for (auto _ : state) benchmark::DoNotOptimize(em_step(ens, params));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_EulerMaruyamaStep)->Arg(1000)->Arg(10000);

void BM_BesselTable(benchmark::State& state) {
    const int k_max = static_cast<int>(state.range(0));
    double x = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(BesselTable::compute(x, k_max));
        x = x < 50.0 ? x * 1.01 : 0.5;
    }
}
BENCHMARK(BM_BesselTable)->Arg(16)->Arg(64);

void BM_Classify(benchmark::State& state) {
    const StationaryDensity sd = solve_order_parameter(2.0);
    TrigPolynomial v = TrigPolynomial::constant(1.0);
    v.set(1, 0.0, 0.8);
    v.set(2, 0.0, 1.6);
    const TrigPolynomial f = effective_force_coeff(v, sd).f;
    for (auto _ : state) benchmark::DoNotOptimize(classify(f));
}
BENCHMARK(BM_Classify);

}  // namespace
BENCHMARK_MAIN();

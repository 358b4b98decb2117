// Parallel kernels against their serial references.

#include "rydssh/analysis.hpp"
#include "rydssh/dynamics.hpp"

#include <benchmark/benchmark.h>

using namespace rydssh;

namespace {

DressedSpectrum chain(std::size_t sites) {
    return diagonalize(build_hamiltonian(make_ssh_chain(1, sites, 160.0, 800.0)));
}

void BM_EvolveParallel(benchmark::State& state) {
    const auto s = chain(static_cast<std::size_t>(state.range(0)));
    const auto grid = uniform_grid(100.0, 10001);
    for (auto _ : state) benchmark::DoNotOptimize(evolve(s, 0, grid));
}

void BM_EvolveSerialReference(benchmark::State& state) {
    const auto s = chain(static_cast<std::size_t>(state.range(0)));
    const auto grid = uniform_grid(100.0, 10001);
    for (auto _ : state) benchmark::DoNotOptimize(evolve_serial(s, 0, grid));
}

std::vector<double> detunings() {
    std::vector<double> v;
    for (int i = -100; i <= 100; ++i) v.push_back(0.25 * i);
    return v;
}

void BM_TransferSweep(benchmark::State& state) {
    const auto spec = make_ssh_chain(58, 6, 160.0, 800.0);
    const auto values = detunings();
    const auto mode = state.range(0) ? Execution::parallel : Execution::serial;
    for (auto _ : state) benchmark::DoNotOptimize(edge_transfer_resonance(spec, 0, values, 0.0, mode));
}

}  // namespace

BENCHMARK(BM_EvolveParallel)->Arg(6)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvolveSerialReference)->Arg(6)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransferSweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

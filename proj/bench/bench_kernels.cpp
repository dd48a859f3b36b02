#include <benchmark/benchmark.h>

#include <vector>

#include "spinphoton/sweep.hpp"

using namespace spinphoton;

namespace {

SweepSpec coupling_sweep(int points) {
    SweepSpec spec;
    spec.parameter = SweepParameter::GRel;
    spec.protocol = ProtocolKind::Ghz;
    spec.ghz_photons = 4;
    spec.config.gate = RealisticMode{CavityParams::relative(10.0, 0.1), 0.5};
    spec.config.t_over_t2 = 0.01;
    for (int i = 0; i < points; ++i) {
        spec.grid.push_back(0.5 + 0.5 * i);
    }
    return spec;
}

std::vector<double> detunings(int points) {
    std::vector<double> grid;
    for (int i = 0; i < points; ++i) {
        grid.push_back(-5.0 + 10.0 * i / (points - 1));
    }
    return grid;
}

void BM_SweepParallel(benchmark::State& state) {
    const auto spec = coupling_sweep(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sweep(spec));
    }
}

void BM_SweepSerial(benchmark::State& state) {
    const auto spec = coupling_sweep(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_sweep_serial(spec));
    }
}

void BM_ReflectanceParallel(benchmark::State& state) {
    const auto grid = detunings(static_cast<int>(state.range(0)));
    const auto p = CavityParams::relative(2.4, 0.1, 0.05);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reflectance_sweep(p, grid));
    }
}

void BM_ReflectanceSerial(benchmark::State& state) {
    const auto grid = detunings(static_cast<int>(state.range(0)));
    const auto p = CavityParams::relative(2.4, 0.1, 0.05);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reflectance_sweep_serial(p, grid));
    }
}

void BM_SampleParallel(benchmark::State& state) {
    const auto r = scheme_b_entangle_photons(ProtocolConfig{});
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_branches(r, 7, static_cast<std::size_t>(state.range(0))));
    }
}

void BM_SampleSerial(benchmark::State& state) {
    const auto r = scheme_b_entangle_photons(ProtocolConfig{});
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_branches_serial(r, 7, static_cast<std::size_t>(state.range(0))));
    }
}

} // namespace

BENCHMARK(BM_SweepParallel)->Arg(16)->Arg(64);
BENCHMARK(BM_SweepSerial)->Arg(16)->Arg(64);
BENCHMARK(BM_ReflectanceParallel)->Arg(10000)->Arg(100000);
BENCHMARK(BM_ReflectanceSerial)->Arg(10000)->Arg(100000);
BENCHMARK(BM_SampleParallel)->Arg(100000);
BENCHMARK(BM_SampleSerial)->Arg(100000);

BENCHMARK_MAIN();

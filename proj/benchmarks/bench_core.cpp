#include <benchmark/benchmark.h>

#include "matterwave/analysis.hpp"
#include "matterwave/interferometer.hpp"
#include "matterwave/solver.hpp"
#include "matterwave/transition.hpp"
#include "matterwave/units.hpp"

using namespace matterwave;

namespace {

DiffractionConfig mirror(Mechanism m, Geometry g, double tau_us) {
    DiffractionConfig c;
    c.mechanism = m;
    c.geometry = g;
    c.delta_tau = UnitSystem().microseconds_to_dimensionless(tau_us);
    c.pulse_area = 3.14159265358979323846;
    return c;
}

// args: mechanism (0 Raman, 1 Bragg), geometry (0 single, 1 double), pulse length in us
void BM_ConvergedSolve(benchmark::State& state) {
    const auto m = state.range(0) ? Mechanism::Bragg : Mechanism::Raman;
    const auto g = state.range(1) ? Geometry::Double : Geometry::Single;
    const auto c = mirror(m, g, static_cast<double>(state.range(2)));
    const auto in = AmplitudeState::eigenstate(m, kMinAutoOrder, 0.03, InternalState::Ground, 0);
    int order = 0;
    for (auto _ : state) {
        auto r = evolve_converged(in, c, SolverSettings{});
        order = r.n_max_used;
        benchmark::DoNotOptimize(r.state.data().data());
    }
    state.counters["n_max"] = order;
}
BENCHMARK(BM_ConvergedSolve)->ArgsProduct({{0, 1}, {0, 1}, {12, 50}})->Unit(benchmark::kMicrosecond);

void BM_BuildTransition(benchmark::State& state) {
    const auto c = mirror(Mechanism::Bragg, Geometry::Double, 25.0);
    const int samples = static_cast<int>(state.range(0));
    const InputBlock in = InputBlock::order(-1, samples, InternalState::Ground);
    for (auto _ : state) {
        auto g = build_transition(c, SolverSettings{}, samples, std::span(&in, 1), BuildOptions{1});
        benchmark::DoNotOptimize(g.blocks().data());
    }
    state.SetItemsProcessed(state.iterations() * samples);
}
BENCHMARK(BM_BuildTransition)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_ApplyTransition(benchmark::State& state) {
    const auto c = mirror(Mechanism::Raman, Geometry::Double, 25.0);
    const int samples = static_cast<int>(state.range(0));
    const InputBlock in = InputBlock::order(-1, samples, InternalState::Excited);
    const auto g = build_transition(c, SolverSettings{}, samples, std::span(&in, 1));
    const auto psi = WavePacket::gaussian(-1.0, 0.05, samples, InternalState::Excited, true);
    for (auto _ : state) {
        auto out = apply(g, psi);
        benchmark::DoNotOptimize(out.component(InternalState::Ground).data());
    }
}
BENCHMARK(BM_ApplyTransition)->Arg(256)->Arg(1024)->Unit(benchmark::kMicrosecond);

void BM_Interferometer(benchmark::State& state) {
    const auto c = mirror(Mechanism::Bragg, Geometry::Double, 25.0);
    AnalysisOptions o;
    o.threads = 1;
    for (auto _ : state) benchmark::DoNotOptimize(signal(c, 0.1, 64, o).contrast);
}
BENCHMARK(BM_Interferometer)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

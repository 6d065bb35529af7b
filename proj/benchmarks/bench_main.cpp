#include <benchmark/benchmark.h>

#include <mlorenz/analysis.hpp>
#include <mlorenz/integrator.hpp>
#include <mlorenz/models.hpp>

using namespace mlorenz;

namespace {

LorenzModel model_for(int which) {
    switch (which) {
        case 0: return LorenzModel::classical();
        case 1: return LorenzModel::u2(U2Convention::derived_d);
        default: return LorenzModel::u2(U2Convention::paper_eq7);
    }
}

void BM_Rk8Step(benchmark::State& state) {
    const auto model = model_for(static_cast<int>(state.range(0)));
    const LorenzParams p;
    auto s = initial_state(model, {}, 1, 0);
    Rk8Stepper stepper(s.size());
    auto rhs = [&](double, std::span<const double> x, std::span<double> dx) {
        model.rhs(x, p, dx);
    };
    double t = 0.0;
    for (auto _ : state) {
        stepper.step(rhs, t, 1e-3, s);
        t += 1e-3;
        benchmark::DoNotOptimize(s.data());
    }
    state.SetLabel(model.name());
}
BENCHMARK(BM_Rk8Step)->Arg(0)->Arg(1)->Arg(2);

void BM_LyapunovRun(benchmark::State& state) {
    const auto model = model_for(static_cast<int>(state.range(0)));
    LyapunovOptions o;
    o.horizon = 20.0;
    for (auto _ : state) {
        if (model.has_block_split()) {
            benchmark::DoNotOptimize(block_lyapunov(model, LorenzParams{}, o, 1, 0));
        } else {
            benchmark::DoNotOptimize(largest_lyapunov(model, LorenzParams{}, o, 1, 0));
        }
    }
    state.SetLabel(model.name() + ", 20 time units");
}
BENCHMARK(BM_LyapunovRun)->Arg(0)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_SweepThreads(benchmark::State& state) {
    const auto model = LorenzModel::u2(U2Convention::paper_eq7);
    SweepSpec spec;
    spec.r_values = r_grid(20.0, 30.0, 2.5);
    spec.samples_per_r = 4;
    spec.lyapunov.horizon = 5.0;
    spec.threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sweep_r(model, spec));
}
BENCHMARK(BM_SweepThreads)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();

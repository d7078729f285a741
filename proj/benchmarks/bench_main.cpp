#include "sirsvp/equilibria.hpp"
#include "sirsvp/integrator.hpp"
#include "sirsvp/lyapunov.hpp"
#include "sirsvp/sweep.hpp"
#include "sirsvp/vector_field.hpp"

#include <benchmark/benchmark.h>

using namespace sirsvp;

namespace
{

const RawParams reference_raw{1.0, 3.0, 1.0 / 3.0, 1.0, 1.0 / 3.0, 1.0, 0.2, 0.1};

const ModelParams& reference()
{
    static const ModelParams m = validate_params(reference_raw);
    return m;
}

void BM_VectorFieldFull(benchmark::State& state)
{
    FullState x{3.0, 1.0, 1.0, 5.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(x);
        benchmark::DoNotOptimize(vf_full(x, reference()));
    }
}
BENCHMARK(BM_VectorFieldFull);

void BM_VectorFieldReduced(benchmark::State& state)
{
    ReducedState x{0.3, 0.3};
    for (auto _ : state) {
        benchmark::DoNotOptimize(x);
        benchmark::DoNotOptimize(vf_reduced(x, reference()));
    }
}
BENCHMARK(BM_VectorFieldReduced);

void BM_EndemicEquilibrium(benchmark::State& state)
{
    for (auto _ : state)
        benchmark::DoNotOptimize(endemic_equilibrium(reference()));
}
BENCHMARK(BM_EndemicEquilibrium);

void BM_IntegrateReduced(benchmark::State& state)
{
    IntegrationSpec spec;
    spec.initial = ReducedState{0.3, 0.3};
    spec.t_end   = static_cast<double>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate(spec, reference()));
}
BENCHMARK(BM_IntegrateReduced)->Arg(50)->Arg(500)->Unit(benchmark::kMicrosecond);

void BM_IntegrateFull(benchmark::State& state)
{
    IntegrationSpec spec;
    spec.initial = FullState{3.0, 1.0, 1.0, 5.0};
    spec.t_end   = 500.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate(spec, reference()));
}
BENCHMARK(BM_IntegrateFull)->Unit(benchmark::kMicrosecond);

void BM_Certify(benchmark::State& state)
{
    const auto eq = *endemic_equilibrium(reference());
    CertifyOptions opt;
    opt.resolution = static_cast<std::size_t>(state.range(0));
    opt.threads    = 1;
    for (auto _ : state)
        benchmark::DoNotOptimize(certify(reference(), eq, Region::FullSimplex, opt));
}
BENCHMARK(BM_Certify)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_SweepBeta(benchmark::State& state)
{
    SweepSpec spec;
    spec.base      = reference_raw;
    spec.parameter = "beta";
    spec.lo        = 1.0;
    spec.hi        = 4.0;
    spec.points    = 61;
    spec.threads   = 1;
    if (state.range(0))
        spec.tasks = sweep_task::all;
    for (auto _ : state)
        benchmark::DoNotOptimize(run_sweep(spec));
}
BENCHMARK(BM_SweepBeta)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();

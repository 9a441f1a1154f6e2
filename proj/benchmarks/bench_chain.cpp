#include <benchmark/benchmark.h>

#include "sqzamp/metrics.hpp"
#include "sqzamp/oracle.hpp"

using namespace sqzamp;

namespace {

ChainSetup amp_setup() {
    ChainSetup s;
    s.opo = CavityParams(0.98, 5.2);
    s.opa = CavityParams(0.98, 10.0);
    s.efficiencies = ChannelEfficiencies(0.99, 0.7);
    return s;
}

void BM_ClosedFormVariance(benchmark::State& state) {
    const ChainSetup s = amp_setup();
    for (auto _ : state) {
        benchmark::DoNotOptimize(amplified_variance(s).v_minus);
    }
}
BENCHMARK(BM_ClosedFormVariance);

void BM_ChainAssembly(benchmark::State& state) {
    ChainSetup s = amp_setup();
    s.theta_opo = PhaseNoiseAngle(0.01);
    s.theta_opa = PhaseNoiseAngle(0.05);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            variance_from_chain(amplified_chain(s)).v_minus);
    }
}
BENCHMARK(BM_ChainAssembly);

void BM_GaussianAverage(benchmark::State& state) {
    ChainSetup s = amp_setup();
    s.theta_opo = PhaseNoiseAngle(0.01);
    s.theta_opa = PhaseNoiseAngle(0.05);
    s.phase_noise_mode = PhaseNoiseMode::gaussian_rms;
    for (auto _ : state) {
        benchmark::DoNotOptimize(chain_variance(s).v_minus);
    }
}
BENCHMARK(BM_GaussianAverage);

void BM_ComputeMetrics(benchmark::State& state) {
    const ChainSetup s = amp_setup();
    const SignalModel sig = default_signal();
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_metrics(s, sig).snr_conv);
    }
}
BENCHMARK(BM_ComputeMetrics);

void BM_MonteCarlo(benchmark::State& state) {
    const ChainSetup s = amp_setup();
    OracleConfig cfg;
    cfg.n_samples = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_variance(s, cfg).v_minus_hat);
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(cfg.n_samples));
}
BENCHMARK(BM_MonteCarlo)->Arg(10'000)->Arg(100'000);

}  // namespace

BENCHMARK_MAIN();

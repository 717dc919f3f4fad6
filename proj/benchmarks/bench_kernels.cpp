// Microbenchmarks for the hot kernels: operator construction, scattering,
// the two decoherence channels and the end-to-end pipeline.  Run with
// --benchmark_filter=... to pick a subset.

#include <benchmark/benchmark.h>

#include <complex>

#include "mparity/constants.hpp"
#include "mparity/decoherence.hpp"
#include "mparity/detection.hpp"
#include "mparity/fock.hpp"
#include "mparity/pipeline.hpp"
#include "mparity/scattering.hpp"
#include "mparity/thermal.hpp"

using namespace mparity;

namespace {

thermal::MirrorParams bench_mirror(double temperature_factor) {
    const double omega = 2.0 * constants::pi * 1e5;
    return thermal::MirrorParams::from_nucleons(
        1000000000, omega,
        temperature_factor * constants::hbar * omega / constants::k_boltzmann);
}

config::ExperimentConfig bench_config(double temperature_factor) {
    config::ExperimentConfig cfg;
    cfg.omega_rad_s = 2.0 * constants::pi * 1e5;
    cfg.eta = 0.5;
    cfg.temperature_K = temperature_factor * constants::hbar * *cfg.omega_rad_s /
                        constants::k_boltzmann;
    return cfg;
}

void bm_displacement(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const std::complex<double> alpha(0.0, 0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fock::displacement(alpha, dim));
    }
    state.SetComplexityN(dim);
}
BENCHMARK(bm_displacement)->Arg(32)->Arg(64)->Arg(128)->Complexity();

void bm_scatter_operators(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const fock::LambDicke eta(0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(scattering::make_scatter_operators(eta, dim));
    }
}
BENCHMARK(bm_scatter_operators)->Arg(32)->Arg(64)->Arg(128);

void bm_scatter_level(benchmark::State& state) {
    const auto ops = scattering::make_scatter_operators(fock::LambDicke(0.5), 64);
    for (auto _ : state) {
        benchmark::DoNotOptimize(scattering::scatter(20, ops));
    }
}
BENCHMARK(bm_scatter_level);

void bm_localization_step(benchmark::State& state) {
    const int n_steps = static_cast<int>(state.range(0));
    const auto mirror = bench_mirror(0.0);
    const auto ops = scattering::make_scatter_operators(fock::LambDicke(0.5), 24);
    const auto st = scattering::scatter(0, ops);
    const Eigen::MatrixXcd rho = st.density_matrix();

    decoherence::DecoherenceModel model;
    model.variant = decoherence::Variant::localization;
    model.duration_s = 1.0 / mirror.omega_rad_s;
    const double x = mirror.x_zpf();
    model.lambda_loc = 0.4 / (x * x * model.duration_s);

    decoherence::LocalizationOptions opts;
    opts.n_steps = n_steps;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            decoherence::apply_localization(rho, st.dim, mirror, model, opts));
    }
}
BENCHMARK(bm_localization_step)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void bm_grw_trajectory(benchmark::State& state) {
    const auto mirror = bench_mirror(0.0);
    const auto ops = scattering::make_scatter_operators(fock::LambDicke(0.5), 24);
    const auto st = scattering::scatter(0, ops);
    const auto basis = decoherence::PositionBasis::build(st.dim, mirror.x_zpf());

    decoherence::DecoherenceModel model;
    model.variant = decoherence::Variant::grw;
    model.duration_s = 1e-3;
    model.rate_per_nucleon_hz =
        10.0 / (static_cast<double>(mirror.n_nucleons) * model.duration_s);
    model.width_m = mirror.x_zpf();

    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            decoherence::grw_trajectory(st, basis, mirror, model, seed++));
    }
}
BENCHMARK(bm_grw_trajectory);

void bm_simulate_unitary(benchmark::State& state) {
    const auto cfg = bench_config(static_cast<double>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(pipeline::simulate(cfg));
    }
    state.SetLabel(state.range(0) == 0 ? "ground" : "thermal");
}
BENCHMARK(bm_simulate_unitary)->Arg(0)->Arg(5)->Unit(benchmark::kMillisecond);

void bm_clicks(benchmark::State& state) {
    auto cfg = bench_config(1.0);
    cfg.n_events = state.range(0);
    cfg.seed = 17;
    for (auto _ : state) {
        benchmark::DoNotOptimize(pipeline::clicks(cfg));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_clicks)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

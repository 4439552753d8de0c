// microbenchmarks for the hot paths: transform roundtrip, one integrator
// step of each scheme, and the fractional-derivative norm.

#include <benchmark/benchmark.h>

#include <cmath>

#include "benj/diagnostics.hpp"
#include "benj/fft.hpp"
#include "benj/solver.hpp"

namespace {

benj::RealField gaussian_field(std::size_t n) {
    const benj::Grid1D grid(n, 200.0);
    return benj::RealField::from_function(
        grid, [](double x) { return std::exp(-x * x / 16.0); });
}

void BM_fft_roundtrip(benchmark::State& state) {
    const benj::RealField f = gaussian_field(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        const benj::SpectralField F = benj::forward_transform(f);
        const benj::RealField g = benj::inverse_transform(F);
        benchmark::DoNotOptimize(g.samples.data());
    }
}
BENCHMARK(BM_fft_roundtrip)->Arg(1024)->Arg(4096);

void solver_steps(benchmark::State& state, benj::Scheme scheme) {
    const benj::RealField phi = gaussian_field(4096);
    benj::SolverConfig cfg;
    cfg.dt = 2e-4;
    cfg.t_final = 10 * cfg.dt;
    cfg.snapshot_stride = 10;
    cfg.scheme = scheme;
    cfg.boundary_tol = 1.0;  // benchmark short horizons, not tails
    for (auto _ : state) {
        const benj::Trajectory traj = benj::solve(phi, cfg);
        benchmark::DoNotOptimize(traj.states.back().samples.data());
    }
    state.SetItemsProcessed(state.iterations() * 10);  // ten steps per solve
}

void BM_if_rk4_steps(benchmark::State& state) { solver_steps(state, benj::Scheme::if_rk4); }
void BM_etdrk4_steps(benchmark::State& state) { solver_steps(state, benj::Scheme::etdrk4); }
BENCHMARK(BM_if_rk4_steps);
BENCHMARK(BM_etdrk4_steps);

void BM_stein_norm(benchmark::State& state) {
    const benj::RealField f = gaussian_field(4096);
    for (auto _ : state) {
        const double v = benj::stein_derivative_norm(f, 0.5);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_stein_norm);

} // namespace

/// @file test_solver.cpp
/// @brief integrator exactness, order, snapshot bookkeeping and checkpoints
///
/// Both schemes advance the linear part by the exact multiplier, so the
/// linear-only mode must agree with linear_group to roundoff for any step
/// size. The full flow is checked for fourth-order step-halving behavior,
/// deterministic re-runs and faithful checkpoint roundtrips.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "benj/multipliers.hpp"
#include "benj/solver.hpp"

using namespace benj;

namespace {

RealField gaussian(const Grid1D& g, double amp, double width) {
    return RealField::from_function(
        g, [&](double x) { return amp * std::exp(-(x / width) * (x / width)); });
}

double rel_l2_diff(const RealField& a, const RealField& b) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < a.samples.size(); ++j) {
        const double d = a.samples[j] - b.samples[j];
        num += d * d;
        den += b.samples[j] * b.samples[j];
    }
    return std::sqrt(num / den);
}

} // namespace

// ============================================================================
// linear-only exactness
// ============================================================================

TEST_CASE("linear-only mode reproduces the exact group for both schemes") {
    const Grid1D g(1024, 100.0);
    const RealField phi = gaussian(g, 1.0, 4.0);
    const RealField exact = inverse_transform(linear_group(forward_transform(phi), 0.7));

    for (const Scheme scheme : {Scheme::if_rk4, Scheme::etdrk4}) {
        SolverConfig cfg;
        cfg.dt = 0.07;  // deliberately coarse: exactness may not depend on dt
        cfg.t_final = 0.7;
        cfg.scheme = scheme;
        cfg.linear_only = true;
        cfg.snapshot_stride = 10;
        const Trajectory traj = solve(phi, cfg);
        CHECK(traj.times.back() == doctest::Approx(0.7).epsilon(1e-14));
        CHECK(rel_l2_diff(traj.states.back(), exact) < 1e-13);
    }
}

// ============================================================================
// full flow
// ============================================================================

TEST_CASE("step halving divides the error by about sixteen") {
    const Grid1D g(1024, 100.0);
    const RealField phi = gaussian(g, 1.0, 4.0);

    for (const Scheme scheme : {Scheme::if_rk4, Scheme::etdrk4}) {
        auto final_state = [&](double dt) {
            SolverConfig cfg;
            cfg.dt = dt;
            cfg.t_final = 0.2;
            cfg.scheme = scheme;
            cfg.snapshot_stride = static_cast<std::size_t>(std::llround(0.2 / dt));
            return solve(phi, cfg).states.back();
        };
        const RealField ref = final_state(0.2 / 512);
        const double coarse = rel_l2_diff(final_state(0.2 / 16), ref);
        const double fine = rel_l2_diff(final_state(0.2 / 32), ref);
        const double ratio = coarse / fine;
        INFO("scheme ", scheme == Scheme::if_rk4 ? "if_rk4" : "etdrk4", " ratio ", ratio);
        CHECK(ratio > 12.0);
        CHECK(ratio < 20.0);
    }
}

TEST_CASE("schemes agree with each other on a smooth short run") {
    const Grid1D g(1024, 100.0);
    const RealField phi = gaussian(g, 1.0, 4.0);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 0.1;
    cfg.snapshot_stride = 100;
    cfg.scheme = Scheme::if_rk4;
    const RealField a = solve(phi, cfg).states.back();
    cfg.scheme = Scheme::etdrk4;
    const RealField b = solve(phi, cfg).states.back();
    CHECK(rel_l2_diff(a, b) < 1e-9);
}

TEST_CASE("solve is deterministic: identical runs are bitwise equal") {
    const Grid1D g(512, 80.0);
    const RealField phi = gaussian(g, 0.8, 3.0);
    SolverConfig cfg;
    cfg.dt = 5e-4;
    cfg.t_final = 0.05;
    cfg.snapshot_stride = 20;
    const Trajectory t1 = solve(phi, cfg);
    const Trajectory t2 = solve(phi, cfg);
    REQUIRE(t1.states.size() == t2.states.size());
    for (std::size_t i = 0; i < t1.states.size(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j)
            CHECK(t1.states[i].samples[j] == t2.states[i].samples[j]);
}

// ============================================================================
// snapshots and bookkeeping
// ============================================================================

TEST_CASE("snapshot comb: t = 0, stride multiples, and t_final") {
    const Grid1D g(512, 80.0);
    const RealField phi = gaussian(g, 0.5, 3.0);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 0.01;
    cfg.snapshot_stride = 4;
    const Trajectory traj = solve(phi, cfg);
    // steps = 10: snapshots at steps 0, 4, 8, 10 (final always recorded)
    REQUIRE(traj.times.size() == 4);
    CHECK(traj.times[0] == doctest::Approx(0.0));
    CHECK(traj.times[1] == doctest::Approx(4e-3));
    CHECK(traj.times[2] == doctest::Approx(8e-3));
    CHECK(traj.times[3] == doctest::Approx(0.01));
    CHECK(traj.diagnostics.size() == traj.times.size());
    CHECK(traj.states.size() == traj.times.size());
}

TEST_CASE("fractional final step lands exactly on t_final") {
    const Grid1D g(512, 80.0);
    const RealField phi = gaussian(g, 0.5, 3.0);
    SolverConfig cfg;
    cfg.dt = 3e-3;
    cfg.t_final = 0.01;  // not a multiple of dt
    cfg.snapshot_stride = 100;
    const Trajectory traj = solve(phi, cfg);
    CHECK(traj.times.back() == doctest::Approx(0.01).epsilon(1e-14));
}

TEST_CASE("boundary guard rejects a datum with mass at the edges") {
    const Grid1D g(512, 80.0);
    // centered near the right margin: the edge zone carries O(1) mass
    const RealField bad = RealField::from_function(
        g, [](double x) { return std::exp(-(x - 38.0) * (x - 38.0)); });
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 0.01;
    CHECK_THROWS(solve(bad, cfg));

    CHECK(boundary_mass_ratio(RealField::zero(g)) == 0.0);
    const RealField centered = gaussian(g, 1.0, 3.0);
    CHECK(boundary_mass_ratio(centered) < 1e-14);
}

TEST_CASE("suggest_dt scales inversely with resolution and amplitude") {
    const Grid1D coarse(1024, 100.0);
    const Grid1D fine(2048, 100.0);
    const double dt_coarse = suggest_dt(coarse, 1.0);
    const double dt_fine = suggest_dt(fine, 1.0);
    CHECK(dt_fine == doctest::Approx(dt_coarse / 2.0).epsilon(1e-12));
    CHECK(suggest_dt(coarse, 2.0) == doctest::Approx(dt_coarse / 2.0).epsilon(1e-12));
}

// ============================================================================
// checkpoints
// ============================================================================

TEST_CASE("checkpoint roundtrip is bit exact") {
    const Grid1D g(512, 80.0);
    const RealField phi = gaussian(g, 0.7, 3.0);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 0.02;
    cfg.snapshot_stride = 5;
    const Trajectory traj = solve(phi, cfg);

    const std::string path =
        (std::filesystem::temp_directory_path() / "benj_test_roundtrip.bjf").string();
    checkpoint_write(traj, path);
    const Trajectory back = checkpoint_read(path);
    std::remove(path.c_str());

    REQUIRE(back.grid == g);
    REQUIRE(back.times.size() == traj.times.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        CHECK(back.times[i] == traj.times[i]);
        for (std::size_t j = 0; j < g.n(); ++j)
            CHECK(back.states[i].samples[j] == traj.states[i].samples[j]);
    }
}

TEST_CASE("checkpoint_read rejects a corrupted header") {
    const std::string path =
        (std::filesystem::temp_directory_path() / "benj_test_bad.bjf").string();
    {
        FILE* f = std::fopen(path.c_str(), "wb");
        REQUIRE(f != nullptr);
        std::fputs("NOTBENJ\n", f);
        std::fclose(f);
    }
    CHECK_THROWS(checkpoint_read(path));
    std::remove(path.c_str());
}

// ============================================================================
// nonlinear term
// ============================================================================

TEST_CASE("nonlinear rhs of a single mode is the exact double-frequency term") {
    const Grid1D g(256, 2.0 * pi);
    const double k = 3.0;
    const double a = 0.4;
    const RealField u = RealField::from_function(g, [&](double x) { return a * std::cos(k * x); });
    // -u u_x = (a^2 k / 2) sin(2 k x); mode 2k = 6 survives the 2/3 cutoff at n = 256
    const RealField rhs = nonlinear_rhs(u);
    const RealField expected = RealField::from_function(
        g, [&](double x) { return 0.5 * a * a * k * std::sin(2.0 * k * x); });
    for (std::size_t j = 0; j < g.n(); ++j)
        CHECK(rhs.samples[j] == doctest::Approx(expected.samples[j]).epsilon(1e-12));
}

TEST_CASE("dealiasing empties the upper third of the product spectrum") {
    const Grid1D g(256, 2.0 * pi);
    // k = 50: the square populates mode 100 > n/3 = 85, which must be cut
    const RealField u =
        RealField::from_function(g, [](double x) { return std::cos(50.0 * x); });
    const SpectralField F = forward_transform(nonlinear_rhs(u, Dealias::two_thirds));
    for (std::size_t j = 0; j < g.n(); ++j)
        if (std::abs(static_cast<double>(g.k_index(j))) >= 256.0 / 3.0)
            CHECK(std::abs(F.coefficients[j]) < 1e-12);

    // with dealiasing off the mode is present
    const SpectralField raw = forward_transform(nonlinear_rhs(u, Dealias::none));
    double high = 0.0;
    for (std::size_t j = 0; j < g.n(); ++j)
        if (std::abs(static_cast<double>(g.k_index(j))) >= 256.0 / 3.0)
            high = std::max(high, std::abs(raw.coefficients[j]));
    CHECK(high > 1.0);
}

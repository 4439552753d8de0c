/// @file test_diagnostics.cpp
/// @brief quadrature moments, invariants, weighted/fractional norms, tails
///
/// Every numeric check here is against a closed form: gaussian moments,
/// single-mode energies, analytic weighted integrals. The fractional-norm
/// machinery additionally pins the riemann_zeta values its kink correction
/// relies on, and the calibration constants recorded from the oracle run.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "benj/diagnostics.hpp"
#include "benj/multipliers.hpp"
#include "benj/solver.hpp"
#include "benj/weights.hpp"

using namespace benj;

namespace {

const double sqrt_pi = std::sqrt(pi);

RealField gaussian(const Grid1D& g, double amp, double width) {
    return RealField::from_function(
        g, [&](double x) { return amp * std::exp(-(x / width) * (x / width)); });
}

} // namespace

// ============================================================================
// moments
// ============================================================================

TEST_CASE("gaussian moments against closed forms") {
    const Grid1D g(2048, 120.0);
    const RealField f = gaussian(g, 1.0, 1.0);
    CHECK(moment(f, 0) == doctest::Approx(sqrt_pi).epsilon(1e-13));
    CHECK(moment(f, 1) == doctest::Approx(0.0).epsilon(1e-13));
    CHECK(moment(f, 2) == doctest::Approx(sqrt_pi / 2.0).epsilon(1e-13));

    // odd datum -2x e^{-x^2}: zero mean, first moment -sqrt(pi)
    const RealField odd =
        RealField::from_function(g, [](double x) { return -2.0 * x * std::exp(-x * x); });
    CHECK(std::abs(moment(odd, 0)) < 1e-14);
    CHECK(moment(odd, 1) == doctest::Approx(-sqrt_pi).epsilon(1e-13));
}

TEST_CASE("moment zero equals the xi = 0 fourier coefficient exactly") {
    const Grid1D g(512, 60.0);
    const RealField f = gaussian(g, 0.7, 2.5);
    const SpectralField F = forward_transform(f);
    CHECK(moment(f, 0) == doctest::Approx(F.coefficients[0].real()).epsilon(1e-15));
}

TEST_CASE("moment edge rule rejects mass near the boundary") {
    const Grid1D g(512, 80.0);
    const RealField shifted = RealField::from_function(
        g, [](double x) { return std::exp(-(x - 38.5) * (x - 38.5)); });
    CHECK_THROWS_AS((void)moment(shifted, 1), std::runtime_error);
    CHECK(std::isfinite(moment_unchecked(shifted, 1)));
}

// ============================================================================
// conserved functionals
// ============================================================================

TEST_CASE("I3 of a single mode: a^2 L (xi^2 - xi) / 4") {
    const Grid1D g(1024, 50.0);
    for (const long m : {2L, 5L, 9L}) {
        const double xi = g.dxi() * static_cast<double>(m);
        const double a = 0.3;
        const RealField u =
            RealField::from_function(g, [&](double x) { return a * std::cos(xi * x); });
        const double expected = a * a * g.length() * (xi * xi - xi) / 4.0;
        CHECK(conserved_I3(u) == doctest::Approx(expected).epsilon(1e-12));
    }
}

// ============================================================================
// weighted norms
// ============================================================================

TEST_CASE("weighted norm of a gaussian against the analytic integral") {
    const Grid1D g(2048, 120.0);
    const RealField f = gaussian(g, 1.0, 1.0);
    // r = 0: plain L2
    CHECK(weighted_norm(f, WeightSpec(0.0)) == doctest::Approx(l2_norm(f)).epsilon(1e-13));
    // int (1+x^2)^2 e^{-2x^2} dx = sqrt(pi/2) * 27/16
    const double expected = std::sqrt(std::sqrt(pi / 2.0) * 27.0 / 16.0);
    CHECK(weighted_norm(f, WeightSpec(2.0)) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("untruncated weight enforces the edge rule, truncated does not") {
    const Grid1D g(512, 80.0);
    // algebraic tail: x^4-weighted mass concentrates at the edges
    const RealField slow =
        RealField::from_function(g, [](double x) { return 1.0 / (1.0 + x * x); });
    CHECK_THROWS_AS((void)weighted_norm(slow, WeightSpec(4.0)), std::runtime_error);

    const double truncated = weighted_norm(slow, WeightSpec(4.0, 10.0));
    CHECK(std::isfinite(truncated));
    CHECK(truncated > 0.0);
}

TEST_CASE("truncated weight plateaus: value caps at 2N") {
    const WeightSpec ws(1.0, 5.0);
    CHECK(ws.weight(0.0) == doctest::Approx(1.0));
    CHECK(ws.weight(3.0) == doctest::Approx(std::sqrt(1.0 + 9.0)));  // inside: <x>
    CHECK(ws.weight(1e6) == doctest::Approx(10.0));                  // far field: 2N
    CHECK(ws.weight(-1e6) == doctest::Approx(10.0));
}

// ============================================================================
// sobolev and fractional norms
// ============================================================================

TEST_CASE("sobolev norm of a single mode") {
    const Grid1D g(512, 2.0 * pi);
    const double k = 6.0;
    const RealField u = RealField::from_function(g, [&](double x) { return std::cos(k * x); });
    for (const double s : {0.0, 1.0, 2.5}) {
        const double expected = std::sqrt(std::pow(1.0 + k * k, s) * g.length() / 2.0);
        CHECK(sobolev_norm(u, s) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("sobolev norm of a gaussian: H^1 closed form") {
    const Grid1D g(2048, 120.0);
    const RealField f = gaussian(g, 1.0, 1.0);
    // ||f||^2 + ||f'||^2 = 2 sqrt(pi/2)
    const double expected = std::sqrt(2.0 * std::sqrt(pi / 2.0));
    CHECK(sobolev_norm(f, 1.0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("riemann zeta values used by the kink correction") {
    CHECK(std::riemann_zeta(-0.5) == doctest::Approx(-0.2078862249773545).epsilon(1e-12));
    CHECK(std::riemann_zeta(-1.0) == doctest::Approx(-1.0 / 12.0).epsilon(1e-12));
    CHECK(std::riemann_zeta(-1.5) == doctest::Approx(-0.0254852018898330).epsilon(1e-10));
}

TEST_CASE("fractional norm of a single mode is exact (no zero-mode mass)") {
    const Grid1D g(512, 2.0 * pi);
    const double k = 4.0;
    const double a = 0.7;
    const RealField u = RealField::from_function(g, [&](double x) { return a * std::cos(k * x); });
    for (const double b : {0.25, 0.5, 0.75}) {
        const double expected = a * a * g.length() * std::pow(k, 2.0 * b) / 2.0;
        CHECK(fourier_fractional_norm_sq(u, b) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK_THROWS(fourier_fractional_norm_sq(u, 0.0));  // b restricted to (0,1)
    CHECK_THROWS(fourier_fractional_norm_sq(u, 1.0));
}

TEST_CASE("fractional norm of a gaussian against the continuum integral") {
    const Grid1D g(4096, 100.0);
    const RealField f = gaussian(g, 1.0, 1.0);
    // (1/2pi) int |xi|^{2b} pi e^{-xi^2/2} dxi = 2^b Gamma(b + 1/2) / (2 sqrt(2))... evaluated:
    // b = 0.5: (1/2) int_0^inf xi e^{-xi^2/2} dxi * 2 / ... do it directly: value = 1/sqrt(2 pi) *
    // Gamma(b + 1/2) 2^b / sqrt(2) * sqrt(pi)  -> checked numerically once and pinned here
    for (const double b : {0.25, 0.5, 0.75}) {
        const double expected =
            std::sqrt(pi / 2.0) * std::pow(2.0, b) * std::tgamma(b + 0.5) / std::sqrt(pi);
        CHECK(fourier_fractional_norm_sq(f, b) == doctest::Approx(expected).epsilon(1e-6));
    }
}

// ============================================================================
// nonlocal difference-quotient norm
// ============================================================================

TEST_CASE("difference-quotient norm is translation invariant") {
    const Grid1D g(2048, 100.0);
    const RealField f = gaussian(g, 1.0, 1.0);
    const RealField shifted = RealField::from_function(
        g, [&](double x) { return std::exp(-(x - 7.0) * (x - 7.0)); });
    for (const double b : {0.25, 0.5, 0.75}) {
        const double a = stein_derivative_norm(f, b);
        const double c = stein_derivative_norm(shifted, b);
        CHECK(a == doctest::Approx(c).epsilon(1e-8));
    }
}

TEST_CASE("calibration constants recorded from the reference grid") {
    const Grid1D g(4096, 100.0);
    // ratio ||S_b f||^2 / ||D^b f||^2 on e^{-x^2}; values recorded from the
    // quadrature design run and pinned as regressions
    CHECK(stein_calibration_cb(g, 0.25) == doctest::Approx(10.02651310).epsilon(1e-5));
    CHECK(stein_calibration_cb(g, 0.75) == doctest::Approx(6.68434207).epsilon(1e-5));
    const double mid = stein_calibration_cb(g, 0.5);
    CHECK(mid > 6.0);
    CHECK(mid < 11.0);
}

// ============================================================================
// tail plateau estimates
// ============================================================================

TEST_CASE("tail amplitude recovers the coefficient of an x^-4 tail") {
    const Grid1D g(4096, 200.0);
    const double A = 0.37;
    const RealField u =
        RealField::from_function(g, [&](double x) { return A / (1.0 + x * x * x * x); });
    const TailEstimate est = tail_amplitude(u, 25.0, 45.0);
    CHECK(est.value == doctest::Approx(A).epsilon(1e-4));
    CHECK(est.spread < 0.01);
    CHECK(!est.warning);
}

TEST_CASE("symmetric averaging cancels odd slowly-decaying components") {
    const Grid1D g(4096, 200.0);
    const double A = 0.37;
    const RealField u = RealField::from_function(g, [&](double x) {
        return A / (1.0 + x * x * x * x) + 0.05 * x * x * x / (1.0 + x * x * x * x * x * x);
    });
    const TailEstimate est = tail_amplitude(u, 25.0, 45.0);
    CHECK(est.value == doctest::Approx(A).epsilon(1e-4));
}

TEST_CASE("tail amplitude flags an inconsistent window and rejects bad ones") {
    const Grid1D g(4096, 200.0);
    // x^-2.2 tail: x^4 u grows like x^1.8 across the window -> large spread,
    // while |u| at the window edge stays under the core-rejection threshold
    const RealField wrong = RealField::from_function(
        g, [](double x) { return 1.0 / (1.0 + std::pow(std::abs(x), 2.2)); });
    const TailEstimate est = tail_amplitude(wrong, 25.0, 45.0);
    CHECK(est.warning);

    // window holding core mass is an error
    const RealField wide = gaussian(g, 1.0, 20.0);
    CHECK_THROWS_AS((void)tail_amplitude(wide, 25.0, 45.0), std::runtime_error);

    // window into the boundary margin is an error
    const RealField ok = gaussian(g, 1.0, 3.0);
    CHECK_THROWS_AS((void)tail_amplitude(ok, 90.0, 99.0), std::runtime_error);
}

// ============================================================================
// time derivative
// ============================================================================

TEST_CASE("time derivative of a single mode matches the closed form") {
    const Grid1D g(512, 2.0 * pi);
    const double xi = 2.0;
    const double a = 0.4;
    const RealField u = RealField::from_function(g, [&](double x) { return a * std::cos(xi * x); });
    // -H u_xx - u_xxx - u u_x = a xi^2 (1 - xi) sin(xi x) + (a^2 xi / 2) sin(2 xi x)
    const RealField expected = RealField::from_function(g, [&](double x) {
        return a * xi * xi * (1.0 - xi) * std::sin(xi * x) +
               0.5 * a * a * xi * std::sin(2.0 * xi * x);
    });
    const RealField dt = time_derivative(u);
    for (std::size_t j = 0; j < g.n(); ++j)
        CHECK(dt.samples[j] == doctest::Approx(expected.samples[j]).epsilon(1e-10));
}

// ============================================================================
// uniqueness certificate
// ============================================================================

TEST_CASE("certificate of identical trajectories vanishes") {
    const Grid1D g(512, 80.0);
    const RealField phi = gaussian(g, 0.8, 3.0);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 0.02;
    cfg.snapshot_stride = 10;
    const Trajectory traj = solve(phi, cfg);
    const UniquenessReport rep = uniqueness_certificate(traj, traj, -5.0, 5.0);
    CHECK(rep.max_w0_on_interval == 0.0);
    CHECK(rep.max_dtw0_on_interval == 0.0);
    CHECK(rep.max_residual_on_interval == 0.0);
    CHECK(rep.final_deviation == 0.0);
    for (const auto& [R, integral] : rep.local_profile) CHECK(integral == 0.0);
}

TEST_CASE("perturbation outside the interval leaves the local data at zero") {
    const Grid1D g(1024, 160.0);
    const RealField u0 = gaussian(g, 0.8, 3.0);
    RealField v0 = u0;
    for (std::size_t j = 0; j < g.n(); ++j) {
        const double z = (g.x(j) - 30.0) / 3.0;
        if (std::abs(z) < 1.0) v0.samples[j] += 0.05 * std::exp(1.0 - 1.0 / (1.0 - z * z));
    }
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 0.05;
    cfg.snapshot_stride = 10;
    const Trajectory u = solve(u0, cfg);
    const Trajectory v = solve(v0, cfg);
    const UniquenessReport rep = uniqueness_certificate(u, v, -5.0, 5.0);
    CHECK(rep.max_w0_on_interval < 1e-14);
    CHECK(rep.final_deviation > 1e-4);  // the flow spreads the difference

    // profile integrals grow with the ball radius
    for (std::size_t i = 1; i < rep.local_profile.size(); ++i) {
        CHECK(rep.local_profile[i].first > rep.local_profile[i - 1].first);
        CHECK(rep.local_profile[i].second >= rep.local_profile[i - 1].second);
    }
}

TEST_CASE("certificate validates its inputs") {
    const Grid1D g(512, 80.0);
    const Grid1D other(1024, 80.0);
    const RealField phi = gaussian(g, 0.8, 3.0);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 0.02;
    cfg.snapshot_stride = 10;
    const Trajectory traj = solve(phi, cfg);
    const Trajectory tother = solve(gaussian(other, 0.8, 3.0), cfg);
    CHECK_THROWS((void)uniqueness_certificate(traj, tother, -5.0, 5.0));
    CHECK_THROWS((void)uniqueness_certificate(traj, traj, 5.0, -5.0));  // a >= b
}

// ============================================================================
// norm reports and csv output
// ============================================================================

TEST_CASE("norm report wires the requested families through") {
    const Grid1D g(512, 80.0);
    const RealField f = gaussian(g, 0.8, 3.0);
    NormRequest req;
    req.sobolev_s = {1.0, 2.0};
    req.weighted_r = {1.0};
    req.stein_b = {0.5};
    const NormReport rep = norm_report(f, req);
    CHECK(rep.l2 == doctest::Approx(l2_norm(f)).epsilon(1e-14));
    REQUIRE(rep.sobolev.size() == 2);
    CHECK(rep.sobolev[0].first == 1.0);
    CHECK(rep.sobolev[0].second == doctest::Approx(sobolev_norm(f, 1.0)));
    REQUIRE(rep.weighted.size() == 1);
    REQUIRE(rep.stein.size() == 1);
    CHECK(rep.stein[0].second > 0.0);
}

TEST_CASE("diagnostics csv is deterministic and carries the requested columns") {
    const Grid1D g(512, 80.0);
    const RealField phi = gaussian(g, 0.8, 3.0);
    SolverConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_final = 0.01;
    cfg.snapshot_stride = 5;
    const Trajectory traj = solve(phi, cfg);

    NormRequest req;
    req.sobolev_s = {1.5};
    const auto dir = std::filesystem::temp_directory_path();
    const std::string p1 = (dir / "benj_diag_1.csv").string();
    const std::string p2 = (dir / "benj_diag_2.csv").string();
    write_diagnostics_csv(p1, traj, req, std::nullopt);
    write_diagnostics_csv(p2, traj, req, std::nullopt);

    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string c1 = slurp(p1);
    CHECK(c1 == slurp(p2));
    CHECK(c1.find("time,I1,I2,I3,first_moment,sobolev_1.5") == 0);
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

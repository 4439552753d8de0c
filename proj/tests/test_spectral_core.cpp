/// @file test_spectral_core.cpp
/// @brief grid layout, transform normalization and fourier multipliers
///
/// The transform convention is pinned against a direct O(n^2) DFT oracle so
/// a normalization regression cannot hide inside a self-consistent pair of
/// forward/inverse calls. Multipliers are checked on single modes (exact
/// eigenfunctions) and on gaussians (analytic transforms).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "benj/fft.hpp"
#include "benj/field.hpp"
#include "benj/grid.hpp"
#include "benj/multipliers.hpp"

using namespace benj;

namespace {

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

RealField random_field(const Grid1D& grid, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> s(grid.n());
    for (double& v : s) v = dist(rng);
    return RealField(grid, std::move(s));
}

} // namespace

// ============================================================================
// grid layout
// ============================================================================

TEST_CASE("grid: points, wavenumbers, dft ordering") {
    const Grid1D g(16, 8.0);
    CHECK(g.dx() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.x(0) == doctest::Approx(-4.0));
    CHECK(g.x(8) == doctest::Approx(0.0));
    CHECK(g.dxi() == doctest::Approx(2.0 * pi / 8.0));
    CHECK(g.k_index(0) == 0);
    CHECK(g.k_index(7) == 7);
    CHECK(g.k_index(8) == -8);   // unpaired nyquist slot
    CHECK(g.k_index(15) == -1);
    CHECK(g.xi(15) == doctest::Approx(-g.dxi()));

    CHECK_THROWS_AS(Grid1D(12, 8.0), std::invalid_argument);  // not a power of two
    CHECK_THROWS_AS(Grid1D(4, 8.0), std::invalid_argument);   // too small
    CHECK_THROWS_AS(Grid1D(16, -1.0), std::invalid_argument);
}

// ============================================================================
// transform normalization
// ============================================================================

TEST_CASE("forward transform matches the direct continuum-normalized dft") {
    const Grid1D g(64, 10.0);
    const RealField f = random_field(g, 7);
    const SpectralField F = forward_transform(f);

    // oracle: F_k = dx * sum_j f_j e^{-i xi_k x_j}, summed directly
    for (std::size_t k : {std::size_t{0}, std::size_t{1}, std::size_t{31}, std::size_t{32},
                          std::size_t{40}, std::size_t{63}}) {
        cplx direct{0.0, 0.0};
        for (std::size_t j = 0; j < g.n(); ++j)
            direct += f.samples[j] * std::exp(cplx(0.0, -g.xi(k) * g.x(j)));
        direct *= g.dx();
        CHECK(std::abs(F.coefficients[k] - direct) < 1e-12);
    }
}

TEST_CASE("roundtrip and parseval") {
    const Grid1D g(256, 30.0);
    const RealField f = random_field(g, 11);
    const SpectralField F = forward_transform(f);
    const RealField back = inverse_transform(F);
    CHECK(max_abs_diff(f.samples, back.samples) < 1e-13);

    double physical = 0.0;
    for (const double v : f.samples) physical += v * v;
    physical *= g.dx();
    double spectral = 0.0;
    for (const cplx& c : F.coefficients) spectral += std::norm(c);
    spectral /= g.length();
    CHECK(physical == doctest::Approx(spectral).epsilon(1e-13));
}

TEST_CASE("gaussian transform is sqrt(pi) exp(-xi^2/4)") {
    const Grid1D g(1024, 80.0);
    const RealField f = RealField::from_function(g, [](double x) { return std::exp(-x * x); });
    const SpectralField F = forward_transform(f);
    for (std::size_t j = 0; j < g.n(); ++j) {
        const double xi = g.xi(j);
        if (std::abs(xi) > 12.0) continue;  // below double precision anyway
        const double expected = std::sqrt(pi) * std::exp(-xi * xi / 4.0);
        CHECK(std::abs(F.coefficients[j].real() - expected) < 1e-13);
        CHECK(std::abs(F.coefficients[j].imag()) < 1e-13);
    }
}

TEST_CASE("hermitian defect of a real field's spectrum is roundoff") {
    const Grid1D g(128, 20.0);
    const SpectralField F = forward_transform(random_field(g, 3));
    CHECK(hermitian_defect(F) < 1e-13);
    CHECK(all_finite(F));
}

// ============================================================================
// multipliers on single modes
// ============================================================================

TEST_CASE("derivatives of a single mode") {
    const Grid1D g(256, 2.0 * pi);
    const double k = 3.0;  // xi_3 with L = 2 pi
    const RealField u = RealField::from_function(g, [&](double x) { return std::cos(k * x); });

    const RealField ux = derivative(u, 1);
    const RealField expected1 =
        RealField::from_function(g, [&](double x) { return -k * std::sin(k * x); });
    CHECK(max_abs_diff(ux.samples, expected1.samples) < 1e-12);

    const RealField uxxx = derivative(u, 3);
    const RealField expected3 =
        RealField::from_function(g, [&](double x) { return k * k * k * std::sin(k * x); });
    CHECK(max_abs_diff(uxxx.samples, expected3.samples) < 1e-11);
}

TEST_CASE("hilbert transform: H cos = sin, H sin = -cos, H^2 = -1") {
    const Grid1D g(256, 2.0 * pi);
    const double k = 5.0;
    const RealField c = RealField::from_function(g, [&](double x) { return std::cos(k * x); });
    const RealField s = RealField::from_function(g, [&](double x) { return std::sin(k * x); });

    CHECK(max_abs_diff(hilbert(c).samples, s.samples) < 1e-12);
    const RealField mc = hilbert(s);
    for (std::size_t j = 0; j < g.n(); ++j)
        CHECK(mc.samples[j] == doctest::Approx(-c.samples[j]).epsilon(1e-12));

    const RealField twice = hilbert(hilbert(c));
    for (std::size_t j = 0; j < g.n(); ++j)
        CHECK(twice.samples[j] == doctest::Approx(-c.samples[j]).epsilon(1e-12));
}

TEST_CASE("hilbert transform kills the mean") {
    const Grid1D g(64, 10.0);
    const RealField one = RealField::from_function(g, [](double) { return 1.0; });
    const RealField h = hilbert(one);
    for (const double v : h.samples) CHECK(std::abs(v) < 1e-14);
}

TEST_CASE("fractional derivative and bessel potential on a single mode") {
    const Grid1D g(256, 2.0 * pi);
    const double k = 4.0;
    const RealField u = RealField::from_function(g, [&](double x) { return std::cos(k * x); });

    for (const double s : {0.5, 1.0, 1.75}) {
        const RealField ds = fractional_derivative(u, s);
        const double scale = std::pow(k, s);
        for (std::size_t j = 0; j < g.n(); ++j)
            CHECK(ds.samples[j] == doctest::Approx(scale * u.samples[j]).epsilon(1e-12));

        const RealField js = bessel_potential(u, s);
        const double jscale = std::pow(1.0 + k * k, s / 2.0);
        for (std::size_t j = 0; j < g.n(); ++j)
            CHECK(js.samples[j] == doctest::Approx(jscale * u.samples[j]).epsilon(1e-12));
    }
}

TEST_CASE("negative-order fractional derivative requires mean-zero input") {
    const Grid1D g(64, 10.0);
    const RealField biased = RealField::from_function(
        g, [](double x) { return 1.0 + 0.1 * std::cos(2.0 * pi * x / 10.0); });
    CHECK_THROWS(fractional_derivative(biased, -0.5));

    const RealField centered =
        RealField::from_function(g, [](double x) { return std::cos(2.0 * pi * x / 10.0); });
    const RealField d = fractional_derivative(centered, -0.5);
    const double scale = std::pow(2.0 * pi / 10.0, -0.5);
    for (std::size_t j = 0; j < g.n(); ++j)
        CHECK(d.samples[j] == doctest::Approx(scale * centered.samples[j]).epsilon(1e-12));
}

// ============================================================================
// dispersion phase and linear group
// ============================================================================

TEST_CASE("dispersion phase theta(xi) = xi^3 - xi |xi|") {
    CHECK(dispersion_phase(0.0) == 0.0);
    CHECK(dispersion_phase(1.0) == doctest::Approx(0.0));   // xi = 1 is stationary
    CHECK(dispersion_phase(2.0) == doctest::Approx(4.0));
    CHECK(dispersion_phase(-2.0) == doctest::Approx(-4.0)); // odd symbol
    CHECK(dispersion_phase(0.5) == doctest::Approx(-0.125));
}

TEST_CASE("linear group advances a single mode by the exact phase") {
    const Grid1D g(256, 2.0 * pi);
    const double k = 4.0;
    const double t = 0.37;
    const RealField u = RealField::from_function(g, [&](double x) { return std::cos(k * x); });
    const RealField moved = inverse_transform(linear_group(forward_transform(u), t));
    // mode k > 0 picks up e^{i t (k^3 - k^2)}: cos(k x + t (k^3 - k^2))
    const double phase = t * (k * k * k - k * k);
    const RealField expected =
        RealField::from_function(g, [&](double x) { return std::cos(k * x + phase); });
    CHECK(max_abs_diff(moved.samples, expected.samples) < 1e-12);
}

TEST_CASE("linear group is an L2 isometry and a group") {
    const Grid1D g(512, 40.0);
    const RealField f = RealField::from_function(g, [](double x) { return std::exp(-x * x); });
    const SpectralField F = forward_transform(f);

    const SpectralField Ft = linear_group(F, 0.8);
    CHECK(l2_norm(Ft) == doctest::Approx(l2_norm(F)).epsilon(1e-13));

    const SpectralField two_hops = linear_group(linear_group(F, 0.3), 0.5);
    const SpectralField one_hop = linear_group(F, 0.8);
    double diff = 0.0;
    for (std::size_t j = 0; j < g.n(); ++j)
        diff = std::max(diff, std::abs(two_hops.coefficients[j] - one_hop.coefficients[j]));
    CHECK(diff < 1e-13);

    const SpectralField back = linear_group(linear_group(F, 0.8), -0.8);
    double rt = 0.0;
    for (std::size_t j = 0; j < g.n(); ++j)
        rt = std::max(rt, std::abs(back.coefficients[j] - F.coefficients[j]));
    CHECK(rt < 1e-13);
}

TEST_CASE("apply_multiplier composes with the custom symbol") {
    const Grid1D g(128, 16.0);
    const RealField f = random_field(g, 21);
    const SpectralField F = forward_transform(f);
    // -i sgn(xi) through the generic path must agree with hilbert()
    const SpectralField H = apply_multiplier(F, [](double xi) { return cplx(0.0, -sgn(xi)); });
    const RealField h1 = inverse_transform(H);
    const RealField h2 = hilbert(f);
    CHECK(max_abs_diff(h1.samples, h2.samples) < 1e-13);
}

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "benj/grid.hpp"

namespace benj {

using cplx = std::complex<double>;

// sampled real function on a grid
struct RealField {
    Grid1D grid;
    std::vector<double> samples;

    RealField(Grid1D g, std::vector<double> s) : grid(g), samples(std::move(s)) {
        if (samples.size() != grid.n())
            throw std::invalid_argument("RealField: sample count does not match grid");
    }

    static RealField zero(Grid1D g) { return RealField(g, std::vector<double>(g.n(), 0.0)); }

    template <class F>
    static RealField from_function(Grid1D g, F&& f) {
        std::vector<double> s(g.n());
        for (std::size_t j = 0; j < g.n(); ++j) s[j] = f(g.x(j));
        return RealField(g, std::move(s));
    }
};

// discrete fourier representation, coefficients ordered like Grid1D wavenumbers
struct SpectralField {
    Grid1D grid;
    std::vector<cplx> coefficients;

    SpectralField(Grid1D g, std::vector<cplx> c) : grid(g), coefficients(std::move(c)) {
        if (coefficients.size() != grid.n())
            throw std::invalid_argument("SpectralField: coefficient count does not match grid");
    }

    static SpectralField zero(Grid1D g) {
        return SpectralField(g, std::vector<cplx>(g.n(), cplx{0.0, 0.0}));
    }
};

inline bool all_finite(const RealField& f) {
    return std::all_of(f.samples.begin(), f.samples.end(),
                       [](double v) { return std::isfinite(v); });
}

inline bool all_finite(const SpectralField& f) {
    return std::all_of(f.coefficients.begin(), f.coefficients.end(), [](const cplx& v) {
        return std::isfinite(v.real()) && std::isfinite(v.imag());
    });
}

inline double max_abs(const RealField& f) {
    double m = 0.0;
    for (double v : f.samples) m = std::max(m, std::abs(v));
    return m;
}

// discrete L2 norm: sqrt(sum u_j^2 dx)
inline double l2_norm(const RealField& f) {
    double s = 0.0;
    for (double v : f.samples) s += v * v;
    return std::sqrt(s * f.grid.dx());
}

inline double l2_norm(const SpectralField& F) {
    double s = 0.0;
    for (const cplx& c : F.coefficients) s += std::norm(c);
    return std::sqrt(s / F.grid.length());
}

// worst relative deviation from hermitian symmetry conj(F[-k]) == F[k],
// measured against the largest coefficient magnitude
inline double hermitian_defect(const SpectralField& F) {
    const std::size_t n = F.grid.n();
    double scale = 0.0;
    for (const cplx& c : F.coefficients) scale = std::max(scale, std::abs(c));
    if (scale == 0.0) return 0.0;
    double worst = std::abs(F.coefficients[0].imag());
    worst = std::max(worst, std::abs(F.coefficients[n / 2].imag()));
    for (std::size_t j = 1; j < n / 2; ++j) {
        worst = std::max(worst,
                         std::abs(F.coefficients[j] - std::conj(F.coefficients[n - j])));
    }
    return worst / scale;
}

} // namespace benj

#include "benj/multipliers.hpp"

#include <cmath>
#include <stdexcept>

namespace benj {

SpectralField apply_multiplier(const SpectralField& F,
                               const std::function<cplx(double)>& m) {
    std::vector<cplx> out(F.grid.n());
    for (std::size_t j = 0; j < F.grid.n(); ++j) {
        const cplx mv = m(F.grid.xi(j));
        if (!std::isfinite(mv.real()) || !std::isfinite(mv.imag()))
            throw std::invalid_argument("apply_multiplier: non-finite multiplier value");
        out[j] = mv * F.coefficients[j];
    }
    return SpectralField(F.grid, std::move(out));
}

RealField hilbert(const RealField& f) {
    SpectralField F = forward_transform(f);
    for (std::size_t j = 0; j < F.grid.n(); ++j) {
        F.coefficients[j] *= cplx{0.0, -sgn(F.grid.xi(j))};
    }
    return inverse_transform(F);
}

RealField derivative(const RealField& f, unsigned k) {
    if (k == 0) return f;
    SpectralField F = forward_transform(f);
    for (std::size_t j = 0; j < F.grid.n(); ++j) {
        cplx m{1.0, 0.0};
        const cplx ixi{0.0, F.grid.xi(j)};
        for (unsigned p = 0; p < k; ++p) m *= ixi;
        F.coefficients[j] *= m;
    }
    return inverse_transform(F);
}

RealField fractional_derivative(const RealField& f, double s) {
    if (!std::isfinite(s)) throw std::invalid_argument("fractional_derivative: s must be finite");
    SpectralField F = forward_transform(f);
    if (s < 0.0) {
        double scale = 0.0;
        for (const cplx& c : F.coefficients) scale = std::max(scale, std::abs(c));
        if (std::abs(F.coefficients[0]) > 1e-12 * scale && scale > 0.0)
            throw std::domain_error(
                "fractional_derivative: negative order needs mean-zero input "
                "(|xi|^s diverges at xi = 0)");
        F.coefficients[0] = cplx{0.0, 0.0};
    }
    for (std::size_t j = 0; j < F.grid.n(); ++j) {
        const double axi = std::abs(F.grid.xi(j));
        double m;
        if (s == 0.0) m = 1.0;            // |0|^0 := 1, identity everywhere
        else if (axi == 0.0) m = 0.0;     // s < 0 handled above; s > 0 kills the mean
        else m = std::pow(axi, s);
        F.coefficients[j] *= m;
    }
    return inverse_transform(F);
}

RealField bessel_potential(const RealField& f, double s) {
    if (!std::isfinite(s)) throw std::invalid_argument("bessel_potential: s must be finite");
    SpectralField F = forward_transform(f);
    for (std::size_t j = 0; j < F.grid.n(); ++j) {
        const double xi = F.grid.xi(j);
        F.coefficients[j] *= std::pow(1.0 + xi * xi, 0.5 * s);
    }
    return inverse_transform(F);
}

SpectralField linear_group(const SpectralField& F, double t) {
    if (!std::isfinite(t)) throw std::invalid_argument("linear_group: t must be finite");
    std::vector<cplx> out(F.grid.n());
    for (std::size_t j = 0; j < F.grid.n(); ++j) {
        const double phase = t * dispersion_phase(F.grid.xi(j));
        out[j] = F.coefficients[j] * cplx{std::cos(phase), std::sin(phase)};
    }
    return SpectralField(F.grid, std::move(out));
}

} // namespace benj

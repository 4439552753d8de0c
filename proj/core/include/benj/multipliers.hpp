#pragma once

#include <functional>

#include "benj/fft.hpp"
#include "benj/field.hpp"

namespace benj {

// sign with sgn(0) = 0; the nyquist slot carries a negative wavenumber and
// therefore sgn = -1
inline double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// pointwise multiplication of the coefficients by m(xi)
SpectralField apply_multiplier(const SpectralField& F,
                               const std::function<cplx(double)>& m);

// fourier multiplier -i*sgn(xi). output realization drops the imaginary
// nyquist residue, so exact involution/isometry identities hold on fields
// with an empty nyquist mode
RealField hilbert(const RealField& f);

// spectral k-th derivative, multiplier (i xi)^k
RealField derivative(const RealField& f, unsigned k);

// multiplier |xi|^s. s = 0 is the identity (|0|^0 := 1). s < 0 requires
// mean-zero input; the xi = 0 coefficient is then mapped to 0.
RealField fractional_derivative(const RealField& f, double s);

// multiplier (1 + xi^2)^{s/2}
RealField bessel_potential(const RealField& f, double s);

// dispersion phase theta(xi) = xi^3 - xi|xi| of the linear flow
inline double dispersion_phase(double xi) { return xi * xi * xi - xi * std::abs(xi); }

// exact evolution by the linear group: multiplier mu(xi,t) = e^{i t theta(xi)}
SpectralField linear_group(const SpectralField& F, double t);

} // namespace benj

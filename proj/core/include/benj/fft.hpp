#pragma once

#include "benj/field.hpp"

namespace benj {

// discrete realization of f_hat(xi) = integral e^{-i xi x} f(x) dx on the grid:
// F_k = dx * (-1)^k * DFT_k(f), where the (-1)^k phase accounts for the domain
// origin at -L/2. inverse: f_j = (1/L) * IDFT_j((-1)^k F_k).
//
// the matching discrete parseval identity (tested exactly):
//   sum_j f_j^2 dx = (1/L) sum_k |F_k|^2
SpectralField forward_transform(const RealField& f);

// realization takes the real part; for hermitian-symmetric input this only
// discards roundoff (plus any imaginary residue an odd multiplier left in the
// unpaired nyquist mode)
RealField inverse_transform(const SpectralField& F);

// complex-to-complex versions with the same normalization, used where
// intermediate spectra are not hermitian (diagnostic machinery)
std::vector<cplx> forward_transform_c(const Grid1D& grid, const std::vector<cplx>& samples);
std::vector<cplx> inverse_transform_c(const Grid1D& grid, const std::vector<cplx>& coefficients);

} // namespace benj

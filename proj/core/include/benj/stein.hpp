#pragma once

#include <vector>

#include "benj/field.hpp"

namespace benj::stein {

// quadrature for the nonlocal difference-quotient derivative
//   Dsq(x) = integral over y of |f(x) - f(y)|^2 / |x - y|^{1+2b} dy
// for samples of a decaying (possibly complex) function on a uniform grid
// x_j = -H + j*dx, H = n*dx/2, treated with min-image distances:
//   * |x - y| < dx: local linear model |f(x)-f(y)| ~ |f'(x)||x-y| integrated
//     in closed form, plus the euler-maclaurin endpoint correction
//     (1-2b)/6 * dx^{2-2b} that cancels the trapezoid cut error at |x-y| = dx
//   * dx <= |x - y| <= H: trapezoid over grid offsets (weight dx/2 at the
//     cut distance dx, dx elsewhere)
//   * |x - y| > H: closure f(x)^2 * H^{-2b} / b (the partner samples have
//     left the min-image horizon; valid because f decays)
std::vector<double> dsq_periodic(const std::vector<cplx>& f,
                                 const std::vector<cplx>& fprime,
                                 double dx, double b);

// squared L2 norm of the stein derivative over the grid, including the
// domain-exterior closure: x beyond [-H, H] paired with y inside contributes
// sum_y |f(y)|^2 [ (H-y)^{-2b} + (H+y)^{-2b} ] dx / (2b)  (distances clamped
// at dx). omitting this term loses exactly half of the far-pair mass.
double norm_sq(const std::vector<cplx>& f, const std::vector<cplx>& fprime,
               double dx, double b);

} // namespace benj::stein

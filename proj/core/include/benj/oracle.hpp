#pragma once

namespace benj::oracle {

// smooth spectral cutoff 0.5*(1 - erf((|xi| - mid)/width)); ~1 below mid,
// ~0 above, transition width ~width
double erf_cutoff(double xi, double mid, double width);

// reference value of the free linear evolution of the cutoff-filtered datum
// -2x e^{-x^2}, periodized over 2*images+1 translates of a length-`length`
// cell:
//   u(x,t) = sum_m -(1/sqrt(pi)) *
//            int_0^4  xi e^{-xi^2/4} chi(xi) sin(t(xi^3-xi^2)+(x+mL)xi) dxi
// evaluated by composite gauss-legendre with panel count tied to the total
// phase, so the quadrature stays spectrally accurate for large |x| and t.
// intended for tail-window points where direct solver output needs an
// independent check
double filtered_linear_solution(double x, double t, double length, double mid,
                                double width, int images);

} // namespace benj::oracle

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "benj/field.hpp"
#include "benj/solver.hpp"
#include "benj/weights.hpp"

namespace benj {

// integral of x^k f dx by the periodic trapezoid rule (= plain sum). k = 0
// equals the xi = 0 fourier coefficient exactly. errors out when the
// outermost zone (n/32 points per side) contributes more than 1e-8 of the
// value, since the x^k weight amplifies whatever reaches the edges.
double moment(const RealField& f, unsigned k);

// same quadrature without the edge-contribution rule (trajectory bookkeeping,
// and difference quantities whose value is legitimately near zero)
double moment_unchecked(const RealField& f, unsigned k);

// integral of (u_x)^2/2 - u H(u_x)/2 - u^3/6, the hamiltonian of the flow
double conserved_I3(const RealField& u);

// || w(x)^r f ||_L2 for w = <x> or the truncated weight. untruncated weights
// enforce the edge rule on the weighted mass.
double weighted_norm(const RealField& f, const WeightSpec& spec);

// || J^s f || via the multiplier (1+xi^2)^{s/2}
double sobolev_norm(const RealField& f, double s);

// || D^b f ||^2 = (1/L) sum |xi|^{2b} |F|^2, with the euler-maclaurin kink
// correction - 2 zeta(-2b) (|F_0|^2 / 2pi) dxi^{1+2b} for the non-smooth
// summand at xi = 0 (otherwise an L-dependent bias ~5e-3 survives)
double fourier_fractional_norm_sq(const RealField& f, double b);

// L2 norm of the nonlocal difference-quotient derivative (quadrature recipe
// in stein.hpp); b in (0,1), decaying input
double stein_derivative_norm(const RealField& f, double b);

// ratio ||stein_b f||^2 / ||D^b f||^2 measured on the gaussian reference
// e^{-x^2}; the constant of the norm-equivalence identity
double stein_calibration_cb(const Grid1D& grid, double b);

struct TailEstimate {
    double value;   // even-part plateau mean of x^4 u over the window
    double spread;  // stdev / |mean| of the window samples
    bool warning;   // spread > 20%
};

// plateau estimate of the non-decaying component of x^4 u:
//   (mean over [x1,x2] of x^4 u + mean over [-x2,-x1] of x^4 u) / 2.
// symmetric averaging cancels the odd slowly-decaying contributions of the
// |xi|-type symbol singularities. errors when the window touches the
// solution core (|u(x1)| >= 1e-3 peak) or the domain margin.
TailEstimate tail_amplitude(const RealField& u, double x1, double x2);

// right side of the evolution written as du/dt (no dealiasing; diagnostic
// fidelity is preferred over aliasing control here)
RealField time_derivative(const RealField& u);

struct NormRequest {
    std::vector<double> sobolev_s;
    std::vector<double> weighted_r;
    // truncation radius applied to every weighted_r entry; untruncated when
    // unset. untruncated weights hit the edge rule on any nonlinear run long
    // enough for the shed long-wave component to reach the boundary.
    std::optional<double> weighted_N;
    std::vector<double> stein_b;
};

struct NormReport {
    double l2 = 0.0;
    double mean = 0.0;
    double first_moment = 0.0;
    std::vector<std::pair<double, double>> sobolev;
    std::vector<std::pair<double, double>> weighted;
    std::vector<std::pair<double, double>> stein;
};

NormReport norm_report(const RealField& f, const NormRequest& req);

struct UniquenessReport {
    double max_w0_on_interval;
    double max_dtw0_on_interval;
    double max_residual_on_interval;  // |H w0_xx + dt w0| on the interval
    std::vector<std::pair<double, double>> local_profile;  // (R, integral_{|x|<=R} |H w0_xx|^2)
    double final_deviation;  // || u(t_final) - v(t_final) ||
};

// exhibits the quantities of the rigidity reduction on the interval [a, b]:
// the difference and its time derivative at t = 0, the pointwise identity
// residual, the small-ball integral profile of H w_xx, and the global
// deviation at the final time. report-only.
UniquenessReport uniqueness_certificate(const Trajectory& u, const Trajectory& v,
                                        double a, double b);

// one row per snapshot: time, I1, I2, I3, first_moment, then requested norms,
// then tail_amplitude when a window is given
void write_diagnostics_csv(const std::string& path, const Trajectory& traj,
                           const NormRequest& req,
                           std::optional<std::pair<double, double>> tail_window);

} // namespace benj

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "benj/field.hpp"
#include "benj/multipliers.hpp"

namespace benj {

enum class Scheme { if_rk4, etdrk4 };
enum class Dealias { two_thirds, none };

struct SolverConfig {
    double dt = 2e-4;
    double t_final = 1.0;
    Scheme scheme = Scheme::if_rk4;
    Dealias dealias = Dealias::two_thirds;
    std::size_t snapshot_stride = 100;
    // switch the nonlinearity off: every step is then the exact multiplier
    // evolution of the linear flow
    bool linear_only = false;
    // relative boundary-mass threshold (edge amplitude / peak) enforced on
    // the datum and every snapshot; <= 0 disables. the guard exists to catch
    // wrap-around of the solution core. nonlinear runs generically shed a
    // harmless long-wave component that grows like ~1e-6 per unit time at
    // the edge, so the default must sit well above that floor; linear
    // exactness runs pass stricter values explicitly.
    double boundary_tol = 1e-3;
};

struct SnapshotDiagnostics {
    double i1;            // integral of u
    double i2;            // integral of u^2
    double i3;            // integral of (u_x)^2/2 - u H u_x / 2 - u^3/6
    double first_moment;  // integral of x u (plain quadrature, no edge rule)
};

struct Trajectory {
    Grid1D grid;
    SolverConfig config;
    std::vector<double> times;
    std::vector<RealField> states;
    std::vector<SnapshotDiagnostics> diagnostics;
};

// nonlinear part of the flow: -u u_x = -(u^2)_x / 2, computed spectrally with
// the configured dealiasing applied to the product
RealField nonlinear_rhs(const RealField& u, Dealias dealias = Dealias::two_thirds);

// one time step of the full equation
RealField step(const RealField& u, double dt, Scheme scheme,
               Dealias dealias = Dealias::two_thirds, bool linear_only = false);

// integrate the initial-value problem, recording snapshots (always including
// t = 0 and t_final) and conservation diagnostics
Trajectory solve(const RealField& phi, const SolverConfig& config);

// max |u| over the outermost 1/64 of the domain on each side, relative to the
// global max |u|; 0 for the zero field
double boundary_mass_ratio(const RealField& u);

// step-size suggestion from the rk4 imaginary-axis stability bound for the
// dealiased advection, |lambda| dt <= 2*sqrt(2), with safety factor 0.5
double suggest_dt(const Grid1D& grid, double umax);

// bit-exact snapshot file:
//   magic "BENJF01\n", then little-endian u64 snapshot_count, u64 n, f64 L,
//   then per snapshot f64 t followed by n f64 samples; no padding.
// the solver configuration is not representable in this layout; a trajectory
// read back carries a default-constructed config.
void checkpoint_write(const Trajectory& traj, const std::string& path);
Trajectory checkpoint_read(const std::string& path);

} // namespace benj

#include "benj/solver.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "benj/diagnostics.hpp"
#include "benj/fft.hpp"

namespace benj {
namespace {

using Vec = std::vector<cplx>;

bool finite(const Vec& v) {
    for (const cplx& c : v)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

// dealiasing mask for the quadratic product: keep |k| < n/3
std::vector<double> dealias_mask(const Grid1D& g, Dealias d) {
    std::vector<double> m(g.n(), 1.0);
    if (d == Dealias::two_thirds) {
        const double cut = static_cast<double>(g.n()) / 3.0;
        for (std::size_t j = 0; j < g.n(); ++j)
            if (std::abs(static_cast<double>(g.k_index(j))) >= cut) m[j] = 0.0;
    }
    return m;
}

// spectral right side of the nonlinearity: -(i xi / 2) * mask * (u^2)^
struct NonlinearOp {
    const Grid1D& grid;
    std::vector<double> mask;
    bool enabled;

    NonlinearOp(const Grid1D& g, Dealias d, bool on)
        : grid(g), mask(dealias_mask(g, d)), enabled(on) {}

    Vec operator()(const Vec& uhat) const {
        const std::size_t n = grid.n();
        if (!enabled) return Vec(n, cplx{0.0, 0.0});
        Vec phys = inverse_transform_c(grid, uhat);
        std::vector<cplx> sq(n);
        for (std::size_t j = 0; j < n; ++j) {
            const double ur = phys[j].real();  // state is hermitian up to roundoff
            sq[j] = cplx{ur * ur, 0.0};
        }
        Vec out = forward_transform_c(grid, sq);
        for (std::size_t j = 0; j < n; ++j) {
            const double xi = grid.xi(j);
            out[j] *= cplx{0.0, -0.5 * xi} * mask[j];
        }
        return out;
    }
};

// per-mode tables for one (grid, dt, scheme) combination
struct StepTables {
    Scheme scheme;
    double dt;
    // if_rk4: E = mu(dt/2), EE = mu(dt)
    Vec E, EE;
    // etdrk4 weights
    Vec Q, f1, f2, f3;
};

cplx unit_phase(double theta) { return cplx{std::cos(theta), std::sin(theta)}; }

StepTables make_tables(const Grid1D& g, double dt, Scheme scheme) {
    const std::size_t n = g.n();
    StepTables tb;
    tb.scheme = scheme;
    tb.dt = dt;
    tb.E.resize(n);
    tb.EE.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double th = dispersion_phase(g.xi(j));
        tb.E[j] = unit_phase(0.5 * dt * th);
        tb.EE[j] = unit_phase(dt * th);
    }
    if (scheme == Scheme::etdrk4) {
        // contour means over the full circle of radius 1 around each h*L;
        // the node set is symmetric under conjugation, so modes at +-xi get
        // conjugate weights and hermitian symmetry survives
        constexpr int M = 32;
        tb.Q.assign(n, cplx{});
        tb.f1.assign(n, cplx{});
        tb.f2.assign(n, cplx{});
        tb.f3.assign(n, cplx{});
        for (std::size_t j = 0; j < n; ++j) {
            const cplx z0 = cplx{0.0, dt * dispersion_phase(g.xi(j))};
            cplx q{}, a{}, b{}, c{};
            for (int m = 0; m < M; ++m) {
                const double ang = 2.0 * pi * (m + 0.5) / M;
                const cplx z = z0 + unit_phase(ang);
                const cplx ez = std::exp(z);
                const cplx ez2 = std::exp(0.5 * z);
                const cplx z2 = z * z;
                const cplx z3 = z2 * z;
                q += (ez2 - 1.0) / z;
                a += (-4.0 - z + ez * (4.0 - 3.0 * z + z2)) / z3;
                b += (2.0 + z + ez * (-2.0 + z)) / z3;
                c += (-4.0 - 3.0 * z - z2 + ez * (4.0 - z)) / z3;
            }
            const double w = dt / M;
            tb.Q[j] = w * q;
            tb.f1[j] = w * a;
            tb.f2[j] = w * b;
            tb.f3[j] = w * c;
        }
    }
    return tb;
}

// one step in spectral variables
Vec step_spectral(const Vec& u, const StepTables& tb, const NonlinearOp& N) {
    const std::size_t n = u.size();
    const double h = tb.dt;
    Vec out(n);
    if (tb.scheme == Scheme::if_rk4) {
        // integrating-factor rk4, written without multiplier inverses:
        //   u1 = E^2 u + h/6 (E^2 N1 + 2 E Na + 2 E Nb + Nc)
        const Vec N1 = N(u);
        Vec A(n), B(n), C(n);
        for (std::size_t j = 0; j < n; ++j) A[j] = tb.E[j] * (u[j] + 0.5 * h * N1[j]);
        const Vec Na = N(A);
        for (std::size_t j = 0; j < n; ++j) B[j] = tb.E[j] * u[j] + 0.5 * h * Na[j];
        const Vec Nb = N(B);
        for (std::size_t j = 0; j < n; ++j) C[j] = tb.E[j] * (tb.E[j] * u[j] + h * Nb[j]);
        const Vec Nc = N(C);
        for (std::size_t j = 0; j < n; ++j) {
            out[j] = tb.EE[j] * u[j] +
                     h / 6.0 *
                         (tb.EE[j] * N1[j] + 2.0 * tb.E[j] * Na[j] +
                          2.0 * tb.E[j] * Nb[j] + Nc[j]);
        }
    } else {
        const Vec Nu = N(u);
        Vec a(n), b(n), c(n);
        for (std::size_t j = 0; j < n; ++j) a[j] = tb.E[j] * u[j] + tb.Q[j] * Nu[j];
        const Vec Na = N(a);
        for (std::size_t j = 0; j < n; ++j) b[j] = tb.E[j] * u[j] + tb.Q[j] * Na[j];
        const Vec Nb = N(b);
        for (std::size_t j = 0; j < n; ++j)
            c[j] = tb.E[j] * a[j] + tb.Q[j] * (2.0 * Nb[j] - Nu[j]);
        const Vec Nc = N(c);
        for (std::size_t j = 0; j < n; ++j) {
            out[j] = tb.EE[j] * u[j] + tb.f1[j] * Nu[j] +
                     2.0 * tb.f2[j] * (Na[j] + Nb[j]) + tb.f3[j] * Nc[j];
        }
    }
    return out;
}

SnapshotDiagnostics snapshot_diagnostics(const RealField& u) {
    SnapshotDiagnostics d;
    d.i1 = moment_unchecked(u, 0);
    const double l2 = l2_norm(u);
    d.i2 = l2 * l2;
    d.i3 = conserved_I3(u);
    d.first_moment = moment_unchecked(u, 1);
    return d;
}

} // namespace

RealField nonlinear_rhs(const RealField& u, Dealias dealias) {
    if (!all_finite(u)) throw std::invalid_argument("nonlinear_rhs: non-finite field");
    NonlinearOp N(u.grid, dealias, true);
    SpectralField U = forward_transform(u);
    return inverse_transform(SpectralField(u.grid, N(U.coefficients)));
}

RealField step(const RealField& u, double dt, Scheme scheme, Dealias dealias,
               bool linear_only) {
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("step: dt must be positive and finite");
    const StepTables tb = make_tables(u.grid, dt, scheme);
    const NonlinearOp N(u.grid, dealias, !linear_only);
    SpectralField U = forward_transform(u);
    Vec next = step_spectral(U.coefficients, tb, N);
    if (!finite(next))
        throw std::runtime_error("step: non-finite state (blow-up or instability)");
    return inverse_transform(SpectralField(u.grid, std::move(next)));
}

double boundary_mass_ratio(const RealField& u) {
    const std::size_t n = u.grid.n();
    const std::size_t zone = std::max<std::size_t>(2, n / 64);
    double edge = 0.0;
    for (std::size_t j = 0; j < zone; ++j) {
        edge = std::max(edge, std::abs(u.samples[j]));
        edge = std::max(edge, std::abs(u.samples[n - 1 - j]));
    }
    const double peak = max_abs(u);
    return peak > 0.0 ? edge / peak : 0.0;
}

double suggest_dt(const Grid1D& grid, double umax) {
    const double ximax = grid.dxi() * (static_cast<double>(grid.n()) / 3.0);
    const double lambda = std::max(umax * ximax, 1e-300);
    return 0.5 * 2.0 * std::sqrt(2.0) / lambda;
}

Trajectory solve(const RealField& phi, const SolverConfig& config) {
    if (!(config.dt > 0.0) || !std::isfinite(config.dt))
        throw std::invalid_argument("solve: dt must be positive and finite");
    if (!(config.t_final >= 0.0) || !std::isfinite(config.t_final))
        throw std::invalid_argument("solve: t_final must be nonnegative and finite");
    if (config.snapshot_stride == 0)
        throw std::invalid_argument("solve: snapshot_stride must be positive");
    if (!all_finite(phi)) throw std::invalid_argument("solve: non-finite datum");
    if (config.boundary_tol > 0.0 && boundary_mass_ratio(phi) > config.boundary_tol)
        throw std::runtime_error("solve: boundary-mass check failed on the datum");

    // number of whole steps; a trailing remainder becomes one explicit
    // shorter step so the run lands on t_final exactly
    const double steps_f = config.t_final / config.dt;
    auto n_whole = static_cast<std::uint64_t>(std::llround(steps_f));
    double remainder = 0.0;
    if (std::abs(steps_f - static_cast<double>(n_whole)) >
        4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, steps_f)) {
        n_whole = static_cast<std::uint64_t>(std::floor(steps_f));
        remainder = config.t_final - static_cast<double>(n_whole) * config.dt;
    }

    Trajectory traj{phi.grid, config, {}, {}, {}};
    const NonlinearOp N(phi.grid, config.dealias, !config.linear_only);
    const StepTables tables = make_tables(phi.grid, config.dt, config.scheme);

    auto record = [&](double t, const Vec& uhat) {
        RealField u = inverse_transform(SpectralField(phi.grid, uhat));
        if (config.boundary_tol > 0.0 && boundary_mass_ratio(u) > config.boundary_tol)
            throw std::runtime_error("solve: boundary-mass violation at t = " +
                                     std::to_string(t));
        traj.times.push_back(t);
        traj.diagnostics.push_back(snapshot_diagnostics(u));
        traj.states.push_back(std::move(u));
    };

    Vec uhat = forward_transform(phi).coefficients;
    record(0.0, uhat);

    for (std::uint64_t k = 1; k <= n_whole; ++k) {
        uhat = step_spectral(uhat, tables, N);
        if (!finite(uhat))
            throw std::runtime_error(
                "solve: non-finite state (blow-up or instability) at t = " +
                std::to_string(static_cast<double>(k) * config.dt));
        const bool last = (k == n_whole) && remainder == 0.0;
        if (k % config.snapshot_stride == 0 && !last)
            record(static_cast<double>(k) * config.dt, uhat);
        if (last) record(config.t_final, uhat);
    }
    if (remainder > 0.0) {
        const StepTables tail = make_tables(phi.grid, remainder, config.scheme);
        uhat = step_spectral(uhat, tail, N);
        if (!finite(uhat))
            throw std::runtime_error("solve: non-finite state in the final partial step");
        record(config.t_final, uhat);
    }
    return traj;
}

// ---- checkpoint io ----

static_assert(std::endian::native == std::endian::little,
              "checkpoint io assumes a little-endian host");

namespace {
constexpr char kMagic[8] = {'B', 'E', 'N', 'J', 'F', '0', '1', '\n'};

void put_u64(std::ostream& os, std::uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_f64(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
std::uint64_t get_u64(std::istream& is) {
    std::uint64_t v;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw std::runtime_error("checkpoint: truncated payload");
    return v;
}
double get_f64(std::istream& is) {
    double v;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    if (!is) throw std::runtime_error("checkpoint: truncated payload");
    return v;
}
} // namespace

void checkpoint_write(const Trajectory& traj, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("checkpoint: cannot open for writing: " + path);
    os.write(kMagic, sizeof kMagic);
    put_u64(os, traj.times.size());
    put_u64(os, traj.grid.n());
    put_f64(os, traj.grid.length());
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        put_f64(os, traj.times[s]);
        for (double v : traj.states[s].samples) put_f64(os, v);
    }
    if (!os) throw std::runtime_error("checkpoint: write failure: " + path);
}

Trajectory checkpoint_read(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint: cannot open: " + path);
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw std::runtime_error("checkpoint: bad magic (not a BENJF01 file): " + path);
    const std::uint64_t count = get_u64(is);
    const std::uint64_t n = get_u64(is);
    const double length = get_f64(is);
    Grid1D grid(static_cast<std::size_t>(n), length);
    Trajectory traj{grid, SolverConfig{}, {}, {}, {}};
    for (std::uint64_t s = 0; s < count; ++s) {
        const double t = get_f64(is);
        std::vector<double> samples(n);
        is.read(reinterpret_cast<char*>(samples.data()),
                static_cast<std::streamsize>(n * sizeof(double)));
        if (!is) throw std::runtime_error("checkpoint: truncated payload");
        traj.times.push_back(t);
        traj.states.emplace_back(grid, std::move(samples));
        traj.diagnostics.push_back(snapshot_diagnostics(traj.states.back()));
    }
    // must be at end of file now
    is.peek();
    if (!is.eof()) throw std::runtime_error("checkpoint: trailing bytes: " + path);
    return traj;
}

} // namespace benj

#include "benj/diagnostics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <stdexcept>
#include <string>

#include "benj/fft.hpp"
#include "benj/multipliers.hpp"
#include "benj/stein.hpp"

namespace benj {
namespace {

double quadrature_moment(const RealField& f, unsigned k, double* edge_out) {
    const Grid1D& g = f.grid;
    const std::size_t n = g.n();
    const double dx = g.dx();
    const std::size_t zone = n / 32;
    double total = 0.0;
    double edge = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = g.x(j);
        double xk = 1.0;
        for (unsigned p = 0; p < k; ++p) xk *= x;
        const double term = xk * f.samples[j] * dx;
        total += term;
        if (j < zone || j + zone >= n) edge += term;
    }
    if (edge_out) *edge_out = edge;
    return total;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

double moment(const RealField& f, unsigned k) {
    double edge = 0.0;
    const double value = quadrature_moment(f, k, &edge);
    if (std::abs(edge) > 1e-8 * std::abs(value))
        throw std::runtime_error(
            "moment: edge zone contributes " + format_double(edge) + " against value " +
            format_double(value) + "; x^" + std::to_string(k) +
            " amplifies mass that reached the domain boundary");
    return value;
}

double moment_unchecked(const RealField& f, unsigned k) {
    return quadrature_moment(f, k, nullptr);
}

double conserved_I3(const RealField& u) {
    const RealField ux = derivative(u, 1);
    const RealField hux = hilbert(ux);
    const double dx = u.grid.dx();
    double total = 0.0;
    for (std::size_t j = 0; j < u.samples.size(); ++j) {
        const double a = u.samples[j];
        // cubic coefficient 1/6: the flow is u_t = -d/dx(u_xx + H u_x + u^2/2)
        // and this functional is the hamiltonian generating it, so it is exactly
        // invariant. a 1/3 coefficient is only invariant for a 2uu_x
        // nonlinearity and drifts at ~5e-4 per unit time here.
        total += (0.5 * ux.samples[j] * ux.samples[j] - 0.5 * a * hux.samples[j] -
                  a * a * a / 6.0) *
                 dx;
    }
    return total;
}

double weighted_norm(const RealField& f, const WeightSpec& spec) {
    const Grid1D& g = f.grid;
    const std::size_t n = g.n();
    const double dx = g.dx();
    const std::size_t zone = n / 32;
    double total = 0.0;
    double edge = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = std::pow(spec.weight(g.x(j)), spec.r);
        const double term = w * w * f.samples[j] * f.samples[j] * dx;
        total += term;
        if (j < zone || j + zone >= n) edge += term;
    }
    // <x>^r grows without bound, so boundary mass silently dominates the
    // integral unless rejected; the truncated weight saturates and is safe
    if (!spec.truncation_N && spec.r > 0.0 && edge > 1e-8 * total)
        throw std::runtime_error(
            "weighted_norm: untruncated weight picks up edge-zone mass (" +
            format_double(edge) + " of " + format_double(total) + ")");
    return std::sqrt(total);
}

double sobolev_norm(const RealField& f, double s) {
    const SpectralField F = forward_transform(f);
    const double L = f.grid.length();
    double total = 0.0;
    for (std::size_t j = 0; j < F.coefficients.size(); ++j) {
        const double xi = f.grid.xi(j);
        total += std::pow(1.0 + xi * xi, s) * std::norm(F.coefficients[j]);
    }
    return std::sqrt(total / L);
}

double fourier_fractional_norm_sq(const RealField& f, double b) {
    if (!(b > 0.0 && b < 1.0))
        throw std::domain_error("fourier_fractional_norm_sq: b must lie in (0,1)");
    const SpectralField F = forward_transform(f);
    const Grid1D& g = f.grid;
    const double L = g.length();
    const double dxi = g.dxi();
    double total = 0.0;
    for (std::size_t j = 0; j < F.coefficients.size(); ++j) {
        const double axi = std::abs(g.xi(j));
        if (axi > 0.0) total += std::pow(axi, 2.0 * b) * std::norm(F.coefficients[j]);
    }
    total /= L;
    // the summand |xi|^{2b} has a kink at xi = 0, so the riemann sum carries
    // an O(dxi^{1+2b}) defect there; euler-maclaurin for the |k|^{2b} lattice
    // sum gives the exact coefficient 2*zeta(-2b) of the |F_0|^2 density
    total -= 2.0 * std::riemann_zeta(-2.0 * b) * (std::norm(F.coefficients[0]) / (2.0 * pi)) *
             std::pow(dxi, 1.0 + 2.0 * b);
    return total;
}

double stein_derivative_norm(const RealField& f, double b) {
    const RealField fp = derivative(f, 1);
    std::vector<cplx> fc(f.samples.begin(), f.samples.end());
    std::vector<cplx> fpc(fp.samples.begin(), fp.samples.end());
    return std::sqrt(stein::norm_sq(fc, fpc, f.grid.dx(), b));
}

double stein_calibration_cb(const Grid1D& grid, double b) {
    const RealField g =
        RealField::from_function(grid, [](double x) { return std::exp(-x * x); });
    const double s = stein_derivative_norm(g, b);
    return s * s / fourier_fractional_norm_sq(g, b);
}

TailEstimate tail_amplitude(const RealField& u, double x1, double x2) {
    const Grid1D& g = u.grid;
    const double half = 0.5 * g.length();
    if (!(x1 > 0.0 && x2 > x1))
        throw std::invalid_argument("tail_amplitude: need 0 < x1 < x2");
    if (x2 > half - 0.02 * g.length())
        throw std::invalid_argument("tail_amplitude: window reaches into the domain margin");
    const double peak = max_abs(u);
    const std::size_t n = g.n();

    std::vector<double> samples;
    for (std::size_t j = 0; j < n; ++j) {
        const double x = g.x(j);
        if (x < x1 || x > x2) continue;
        const double x4 = x * x * x * x;
        const double mirrored = u.samples[(n - j) % n];  // sample at -x
        samples.push_back(x4 * 0.5 * (u.samples[j] + mirrored));
    }
    if (samples.size() < 4)
        throw std::invalid_argument("tail_amplitude: window holds fewer than 4 grid points");

    // the window must sit on the tail, not the core
    const auto j1 = static_cast<std::size_t>(std::llround((x1 + half) / g.dx()));
    if (std::abs(u.samples[std::min(j1, n - 1)]) >= 1e-3 * peak)
        throw std::runtime_error("tail_amplitude: window overlaps the solution core");

    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= static_cast<double>(samples.size());
    const double sd = std::sqrt(var);
    const double spread = (mean == 0.0) ? (sd == 0.0 ? 0.0 : 1e300) : sd / std::abs(mean);
    return TailEstimate{mean, spread, spread > 0.2};
}

RealField time_derivative(const RealField& u) {
    const RealField hux2 = hilbert(derivative(u, 2));
    const RealField ux3 = derivative(u, 3);
    RealField usq = u;
    for (double& v : usq.samples) v *= v;
    const RealField flux = derivative(usq, 1);
    RealField out = u;
    for (std::size_t j = 0; j < out.samples.size(); ++j)
        out.samples[j] = -hux2.samples[j] - ux3.samples[j] - 0.5 * flux.samples[j];
    return out;
}

NormReport norm_report(const RealField& f, const NormRequest& req) {
    NormReport rep;
    rep.l2 = l2_norm(f);
    rep.mean = moment_unchecked(f, 0) / f.grid.length();
    rep.first_moment = moment_unchecked(f, 1);
    for (double s : req.sobolev_s) rep.sobolev.emplace_back(s, sobolev_norm(f, s));
    for (double r : req.weighted_r)
        rep.weighted.emplace_back(r, weighted_norm(f, WeightSpec(r, req.weighted_N)));
    for (double b : req.stein_b) rep.stein.emplace_back(b, stein_derivative_norm(f, b));
    return rep;
}

UniquenessReport uniqueness_certificate(const Trajectory& u, const Trajectory& v,
                                        double a, double b) {
    if (u.grid != v.grid)
        throw std::invalid_argument("uniqueness_certificate: trajectories live on different grids");
    if (u.states.empty() || v.states.empty())
        throw std::invalid_argument("uniqueness_certificate: empty trajectory");
    if (std::abs(u.times.front() - v.times.front()) > 1e-12)
        throw std::invalid_argument("uniqueness_certificate: initial snapshots at different times");
    if (!(b > a)) throw std::invalid_argument("uniqueness_certificate: need a < b");

    const Grid1D& g = u.grid;
    RealField w0 = u.states.front();
    for (std::size_t j = 0; j < w0.samples.size(); ++j)
        w0.samples[j] -= v.states.front().samples[j];

    RealField dtw0 = time_derivative(u.states.front());
    const RealField dtv0 = time_derivative(v.states.front());
    for (std::size_t j = 0; j < dtw0.samples.size(); ++j) dtw0.samples[j] -= dtv0.samples[j];

    const RealField hwxx = hilbert(derivative(w0, 2));

    UniquenessReport rep{};
    rep.max_w0_on_interval = 0.0;
    rep.max_dtw0_on_interval = 0.0;
    rep.max_residual_on_interval = 0.0;
    for (std::size_t j = 0; j < g.n(); ++j) {
        const double x = g.x(j);
        if (x < a || x > b) continue;
        rep.max_w0_on_interval = std::max(rep.max_w0_on_interval, std::abs(w0.samples[j]));
        rep.max_dtw0_on_interval = std::max(rep.max_dtw0_on_interval, std::abs(dtw0.samples[j]));
        rep.max_residual_on_interval =
            std::max(rep.max_residual_on_interval, std::abs(hwxx.samples[j] + dtw0.samples[j]));
    }

    // integral_{|x|<=R} |H w_xx|^2 on a geometric ladder of radii
    const double r_min = 8.0 * g.dx();
    const double r_max = 0.25 * g.length();
    const int levels = 12;
    for (int m = 0; m < levels; ++m) {
        const double frac = static_cast<double>(m) / (levels - 1);
        const double R = r_min * std::pow(r_max / r_min, frac);
        double integral = 0.0;
        for (std::size_t j = 0; j < g.n(); ++j)
            if (std::abs(g.x(j)) <= R)
                integral += hwxx.samples[j] * hwxx.samples[j] * g.dx();
        rep.local_profile.emplace_back(R, integral);
    }

    if (std::abs(u.times.back() - v.times.back()) > 1e-12 * std::max(1.0, std::abs(u.times.back())))
        throw std::invalid_argument("uniqueness_certificate: trajectories end at different times");
    RealField wT = u.states.back();
    for (std::size_t j = 0; j < wT.samples.size(); ++j)
        wT.samples[j] -= v.states.back().samples[j];
    rep.final_deviation = l2_norm(wT);
    return rep;
}

void write_diagnostics_csv(const std::string& path, const Trajectory& traj,
                           const NormRequest& req,
                           std::optional<std::pair<double, double>> tail_window) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_diagnostics_csv: cannot open " + path);

    out << "time,I1,I2,I3,first_moment";
    for (double s : req.sobolev_s) out << ",sobolev_" << format_double(s);
    for (double r : req.weighted_r) out << ",weighted_" << format_double(r);
    for (double b : req.stein_b) out << ",stein_" << format_double(b);
    if (tail_window) out << ",tail_amplitude";
    out << "\n";

    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const RealField& u = traj.states[i];
        const SnapshotDiagnostics& d = traj.diagnostics[i];
        out << format_double(traj.times[i]) << ',' << format_double(d.i1) << ','
            << format_double(d.i2) << ',' << format_double(d.i3) << ','
            << format_double(d.first_moment);
        for (double s : req.sobolev_s) out << ',' << format_double(sobolev_norm(u, s));
        for (double r : req.weighted_r)
            out << ',' << format_double(weighted_norm(u, WeightSpec(r, req.weighted_N)));
        for (double b : req.stein_b) out << ',' << format_double(stein_derivative_norm(u, b));
        if (tail_window)
            out << ','
                << format_double(tail_amplitude(u, tail_window->first, tail_window->second).value);
        out << "\n";
    }
    if (!out) throw std::runtime_error("write_diagnostics_csv: write failed for " + path);
}

} // namespace benj

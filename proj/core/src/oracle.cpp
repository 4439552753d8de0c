#include "benj/oracle.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

#include "benj/grid.hpp"

namespace benj::oracle {
namespace {

// nodes/weights of n-point gauss-legendre on [-1,1] by newton iteration on
// the recurrence (no tables to transcribe)
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(static_cast<std::size_t>(n), 0.0);
    w.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double deriv = 0.0;
        for (int pass = 0; pass < 100; ++pass) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            deriv = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / deriv;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[static_cast<std::size_t>(i)] = -z;
        x[static_cast<std::size_t>(n - 1 - i)] = z;
        w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * deriv * deriv);
        w[static_cast<std::size_t>(n - 1 - i)] = w[static_cast<std::size_t>(i)];
    }
}

const std::vector<double>& gl_nodes() {
    static const auto nodes = [] {
        std::vector<double> x, w;
        gauss_legendre(16, x, w);
        return x;
    }();
    return nodes;
}

const std::vector<double>& gl_weights() {
    static const auto weights = [] {
        std::vector<double> x, w;
        gauss_legendre(16, x, w);
        return w;
    }();
    return weights;
}

// int_0^4 xi e^{-xi^2/4} chi(xi) sin(t(xi^3 - xi^2) + shift*xi) dxi
double oscillatory_cell(double t, double shift, double mid, double width) {
    const double xi_max = 4.0;
    // |d phase / d xi| <= t(3*16 + 2*4) + |shift| on [0,4]
    const double phase_rate = std::abs(t) * 56.0 + std::abs(shift);
    const int panels = 16 + static_cast<int>(std::ceil(phase_rate * xi_max / 4.0));
    const double h = xi_max / panels;
    const auto& xs = gl_nodes();
    const auto& ws = gl_weights();
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double a = p * h;
        const double c = a + 0.5 * h;
        double panel = 0.0;
        for (std::size_t q = 0; q < xs.size(); ++q) {
            const double xi = c + 0.5 * h * xs[q];
            const double phase = t * (xi * xi * xi - xi * xi) + shift * xi;
            panel += ws[q] * xi * std::exp(-0.25 * xi * xi) * erf_cutoff(xi, mid, width) *
                     std::sin(phase);
        }
        total += 0.5 * h * panel;
    }
    return total;
}

} // namespace

double erf_cutoff(double xi, double mid, double width) {
    return 0.5 * (1.0 - std::erf((std::abs(xi) - mid) / width));
}

double filtered_linear_solution(double x, double t, double length, double mid,
                                double width, int images) {
    const double scale = -1.0 / std::sqrt(pi);
    double total = 0.0;
    for (int m = -images; m <= images; ++m)
        total += scale * oscillatory_cell(t, x + m * length, mid, width);
    return total;
}

} // namespace benj::oracle

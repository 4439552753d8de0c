#include "benj/stein.hpp"

#include <cmath>
#include <stdexcept>

namespace benj::stein {
namespace {

void check_b(double b) {
    if (!(b > 0.0) || !(b < 1.0))
        throw std::domain_error("stein: exponent b must lie in (0, 1)");
}

} // namespace

std::vector<double> dsq_periodic(const std::vector<cplx>& f,
                                 const std::vector<cplx>& fprime,
                                 double dx, double b) {
    check_b(b);
    const std::size_t n = f.size();
    if (fprime.size() != n) throw std::invalid_argument("stein: size mismatch");
    const double H = 0.5 * dx * static_cast<double>(n);

    // inner model + endpoint correction, per unit |f'(x)|^2
    const double inner =
        std::pow(dx, 2.0 - 2.0 * b) * (2.0 / (2.0 - 2.0 * b) + (1.0 - 2.0 * b) / 6.0);
    const double far = std::pow(H, -2.0 * b) / b;

    // trapezoid weights over min-image distances, shared by every x
    std::vector<double> w(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) {
        const std::size_t m = std::min(j, n - j);
        const double h = static_cast<double>(m) * dx;
        const double panel = (m == 1) ? 0.5 * dx : dx;
        w[j] = panel * std::pow(h, -1.0 - 2.0 * b);
    }

    std::vector<double> dsq(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = std::norm(fprime[i]) * inner + std::norm(f[i]) * far;
        const cplx fi = f[i];
        for (std::size_t j = 1; j < n; ++j) {
            const std::size_t k = i + j < n ? i + j : i + j - n;
            s += w[j] * std::norm(fi - f[k]);
        }
        dsq[i] = s;
    }
    return dsq;
}

double norm_sq(const std::vector<cplx>& f, const std::vector<cplx>& fprime,
               double dx, double b) {
    const std::vector<double> dsq = dsq_periodic(f, fprime, dx, b);
    const std::size_t n = f.size();
    const double H = 0.5 * dx * static_cast<double>(n);
    double total = 0.0;
    for (double v : dsq) total += v * dx;
    // exterior closure
    double ext = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double y = -H + static_cast<double>(j) * dx;
        const double dminus = std::max(H - y, dx);
        const double dplus = std::max(H + y, dx);
        ext += std::norm(f[j]) *
               (std::pow(dminus, -2.0 * b) + std::pow(dplus, -2.0 * b));
    }
    total += ext * dx / (2.0 * b);
    return total;
}

} // namespace benj::stein

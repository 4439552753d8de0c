#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace benj {

inline constexpr double pi = 3.141592653589793238462643383279502884;

// uniform periodic grid on [-L/2, L/2): x_j = -L/2 + j*dx with dx = L/n.
// wavenumbers xi_k = 2*pi*k/L for k in {-n/2, ..., n/2-1}, stored in dft
// order: slot j holds k = j for j < n/2 and k = j - n otherwise, so the
// unpaired nyquist mode k = -n/2 sits at slot n/2.
class Grid1D {
public:
    Grid1D(std::size_t n, double length) : n_(n), length_(length) {
        if (n < 8 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Grid1D: point count must be a power of two >= 8");
        if (!(length > 0.0) || !std::isfinite(length))
            throw std::invalid_argument("Grid1D: length must be positive and finite");
    }

    std::size_t n() const { return n_; }
    double length() const { return length_; }
    double dx() const { return length_ / static_cast<double>(n_); }
    double dxi() const { return 2.0 * pi / length_; }

    // signed integer wavenumber held in storage slot j
    long k_index(std::size_t j) const {
        return j < n_ / 2 ? static_cast<long>(j)
                          : static_cast<long>(j) - static_cast<long>(n_);
    }

    double x(std::size_t j) const { return -0.5 * length_ + static_cast<double>(j) * dx(); }
    double xi(std::size_t j) const { return dxi() * static_cast<double>(k_index(j)); }

    std::vector<double> points() const {
        std::vector<double> p(n_);
        for (std::size_t j = 0; j < n_; ++j) p[j] = x(j);
        return p;
    }

    std::vector<double> frequencies() const {
        std::vector<double> f(n_);
        for (std::size_t j = 0; j < n_; ++j) f[j] = xi(j);
        return f;
    }

    friend bool operator==(const Grid1D& a, const Grid1D& b) {
        return a.n_ == b.n_ && a.length_ == b.length_;
    }
    friend bool operator!=(const Grid1D& a, const Grid1D& b) { return !(a == b); }

private:
    std::size_t n_;
    double length_;
};

} // namespace benj

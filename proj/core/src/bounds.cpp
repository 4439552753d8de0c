#include "benj/bounds.hpp"

#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <utility>

#include "benj/diagnostics.hpp"
#include "benj/field.hpp"
#include "benj/multipliers.hpp"
#include "benj/stein.hpp"
#include "benj/weights.hpp"

namespace benj::bounds {
namespace {

std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::pair<std::string, RealField>> make_corpus(const Grid1D& grid) {
    std::vector<std::pair<std::string, RealField>> corpus;
    corpus.emplace_back("gaussian", RealField::from_function(grid, [](double x) {
                            return std::exp(-x * x);
                        }));
    corpus.emplace_back("gaussian_derivative", RealField::from_function(grid, [](double x) {
                            return -2.0 * x * std::exp(-x * x);
                        }));
    corpus.emplace_back("sech", RealField::from_function(grid, [](double x) {
                            return 1.0 / std::cosh(x);
                        }));
    corpus.emplace_back("bump", RealField::from_function(grid, [](double x) {
                            const double z = x / 8.0;
                            if (std::abs(z) >= 1.0) return 0.0;
                            return std::exp(1.0 - 1.0 / (1.0 - z * z));
                        }));
    return corpus;
}

// || w(x) f || by plain quadrature, no edge rejection: several checks apply
// weights to hilbert transforms whose 1/x tails are the object of study
double weighted_l2_raw(const RealField& f, const std::function<double(double)>& w) {
    double total = 0.0;
    for (std::size_t j = 0; j < f.samples.size(); ++j) {
        const double wf = w(f.grid.x(j)) * f.samples[j];
        total += wf * wf;
    }
    return std::sqrt(total * f.grid.dx());
}

RealField pointwise_scale(const RealField& f, const std::function<double(double)>& w) {
    RealField out = f;
    for (std::size_t j = 0; j < out.samples.size(); ++j) out.samples[j] *= w(f.grid.x(j));
    return out;
}

struct ArgMax {
    double value = 0.0;
    std::string where;

    void feed(double v, const std::string& w) {
        if (v > value) {
            value = v;
            where = w;
        }
    }
};

// pointwise stein derivative of a unit-modulus phase function: inner linear
// model below dy, trapezoid on [dy, H], mean-square closure 2 beyond H
class PhaseSteinKernel {
  public:
    PhaseSteinKernel(double dy, int steps, double b) : dy_(dy), steps_(steps), b_(b) {
        weights_.resize(static_cast<std::size_t>(steps));
        for (int m = 1; m <= steps; ++m) {
            const double h = m * dy;
            const double w = (m == 1 || m == steps) ? 0.5 * dy : dy;
            weights_[static_cast<std::size_t>(m - 1)] = w * std::pow(h, -1.0 - 2.0 * b);
        }
        inner_coeff_ = std::pow(dy, 2.0 - 2.0 * b) * (2.0 / (2.0 - 2.0 * b) + (1.0 - 2.0 * b) / 6.0);
        tail_ = 2.0 * std::pow(steps * dy, -2.0 * b) / b;
    }

    double evaluate(const std::function<cplx(double)>& f, double x, double fprime_mag) const {
        const cplx fx = f(x);
        double dsq = fprime_mag * fprime_mag * inner_coeff_ + tail_;
        for (int m = 1; m <= steps_; ++m) {
            const double h = m * dy_;
            dsq += weights_[static_cast<std::size_t>(m - 1)] *
                   (std::norm(fx - f(x + h)) + std::norm(fx - f(x - h)));
        }
        return std::sqrt(dsq);
    }

  private:
    double dy_;
    int steps_;
    double b_;
    double inner_coeff_;
    double tail_;
    std::vector<double> weights_;
};

} // namespace

std::vector<CheckResult> bound_check_suite(const SuiteConfig& cfg) {
    std::vector<CheckResult> out;
    const int scale = 1 << cfg.refine;
    const Grid1D grid(static_cast<std::size_t>(4096 * scale), 100.0);
    const auto corpus = make_corpus(grid);

    // ---- jota interpolation ------------------------------------------------
    for (const double beta : {0.0, 0.3, 0.5, 0.7, 1.0})
        for (const double delta : {1.0, 2.0})
            for (const double nu : {1.0, 2.0}) {
                ArgMax best;
                for (const auto& [name, f] : corpus) {
                    const RealField weighted = pointwise_scale(f, [&](double x) {
                        return std::pow(japanese_bracket(x), (1.0 - beta) * nu);
                    });
                    const double lhs = sobolev_norm(weighted, beta * delta);
                    const double rhs = std::pow(weighted_norm(f, WeightSpec(nu)), 1.0 - beta) *
                                       std::pow(sobolev_norm(f, delta), beta);
                    best.feed(lhs / rhs, name);
                }
                out.push_back({"jota beta=" + num(beta) + " delta=" + num(delta) +
                                   " nu=" + num(nu),
                               best.value, best.where});
            }

    // ---- weighted hilbert boundedness --------------------------------------
    for (const double nu : {0.3, 0.49}) {
        ArgMax best;
        for (const auto& [name, f] : corpus) {
            const RealField hf = hilbert(f);
            const auto w = [nu](double x) { return std::pow(std::abs(x), nu); };
            best.feed(weighted_l2_raw(hf, w) / weighted_l2_raw(f, w), name);
        }
        out.push_back({"boundhilbert omega=abs nu=" + num(nu), best.value, best.where});
    }
    for (const double nu : {0.3, 0.49})
        for (const int N : {5, 10, 20, 40}) {
            ArgMax best;
            for (const auto& [name, f] : corpus) {
                const RealField hf = hilbert(f);
                const auto w = [nu, N](double x) {
                    return std::pow(truncated_weight(x, N), nu);
                };
                best.feed(weighted_l2_raw(hf, w) / weighted_l2_raw(f, w), name);
            }
            out.push_back({"boundhilbert omega=bracket nu=" + num(nu) + " N=" + std::to_string(N),
                           best.value, best.where});
        }

    // ---- intj aggregate estimates ------------------------------------------
    const std::pair<int, int> jk[] = {{2, 0}, {3, 1}, {3, 2}, {2, 4}};
    for (const double theta : {0.25, 0.5})
        for (const auto& [j, k] : jk) {
            ArgMax best1;
            ArgMax best2;
            for (const auto& [name, f] : corpus) {
                const auto xj = [j = j](double x) {
                    double p = 1.0;
                    for (int q = 0; q < j; ++q) p *= x;
                    return p;
                };
                // intj1: J^{2 theta} (x^j d^k f)
                const RealField dkf = k == 0 ? f : derivative(f, static_cast<unsigned>(k));
                const double lhs1 = sobolev_norm(pointwise_scale(dkf, xj), 2.0 * theta);
                const double rhs1 = sobolev_norm(f, 2.0 * (theta + j) + k) +
                                    weighted_norm(f, WeightSpec(theta + j + 0.5 * k));
                best1.feed(lhs1 / rhs1, name);

                // intj2: |x|^theta d^k (x^j f)
                const RealField xjf = pointwise_scale(f, xj);
                const RealField dk = k == 0 ? xjf : derivative(xjf, static_cast<unsigned>(k));
                const double lhs2 = weighted_l2_raw(
                    dk, [theta](double x) { return std::pow(std::abs(x), theta); });
                const double r = 2.0 * (4.0 + theta) * (j + theta) / (2.0 * (4.0 + theta) - k);
                const double rhs2 =
                    sobolev_norm(f, 2.0 * (4.0 + theta)) + weighted_norm(f, WeightSpec(r));
                best2.feed(lhs2 / rhs2, name);
            }
            const std::string suffix =
                " theta=" + num(theta) + " j=" + std::to_string(j) + " k=" + std::to_string(k);
            out.push_back({"intj1" + suffix, best1.value, best1.where});
            out.push_back({"intj2" + suffix, best2.value, best2.where});
        }

    // ---- pointwise phase bounds ---------------------------------------------
    const double dy = 0.005 / scale;
    const int steps = 8000 * scale;  // horizon H = 40
    for (const double b : {0.25, 0.5, 0.75}) {
        const PhaseSteinKernel kernel(dy, steps, b);
        for (const double t : {0.5, 1.0, 2.0}) {
            const auto f = [t](double y) { return std::polar(1.0, -t * y * std::abs(y)); };
            ArgMax best;
            for (int i = 0; i <= 100; ++i) {
                const double x = -20.0 + 0.4 * i;
                const double lhs = kernel.evaluate(f, x, 2.0 * t * std::abs(x));
                const double rhs = std::pow(t, 0.5 * b) + std::pow(t, b) * std::pow(std::abs(x), b);
                best.feed(lhs / rhs, "x=" + num(x));
            }
            out.push_back({"pontual b=" + num(b) + " t=" + num(t), best.value, best.where});
        }
        for (const double t : {0.25, 0.5, 1.0}) {
            const auto f = [t](double y) { return std::polar(1.0, t * y * y * y); };
            ArgMax best;
            for (int i = 0; i <= 60; ++i) {
                const double x = -6.0 + 0.2 * i;
                const double lhs = kernel.evaluate(f, x, 3.0 * t * x * x);
                const double rhs = std::pow(t, b / 3.0) + std::pow(t, 1.0 / 3.0 + 2.0 * b / 9.0) +
                                   (std::pow(t, 1.0 / 3.0 + 2.0 * b / 3.0) +
                                    std::pow(t, 2.0 * b / 3.0)) *
                                       std::pow(std::abs(x), 2.0 * b);
                best.feed(lhs / rhs, "x=" + num(x));
            }
            out.push_back({"lemma_p b=" + num(b) + " t=" + num(t), best.value, best.where});
        }
    }

    // ---- group-times-profile stein bound ------------------------------------
    {
        const Grid1D xi_grid(static_cast<std::size_t>(8192 * scale), 40.96);
        const std::size_t n = xi_grid.n();
        const RealField gaussian = RealField::from_function(
            grid, [](double x) { return std::exp(-x * x); });
        for (const double theta : {0.25, 0.5}) {
            const double rhs =
                sobolev_norm(gaussian, 2.0 * theta) +
                weighted_l2_raw(gaussian,
                                [theta](double x) { return std::pow(std::abs(x), theta); });
            double previous = 0.0;
            bool monotone = true;
            for (const double t : {0.25, 0.5, 1.0, 2.0}) {
                std::vector<cplx> g(n);
                std::vector<cplx> gp(n);
                for (std::size_t i = 0; i < n; ++i) {
                    const double xi = xi_grid.x(i);
                    const double fhat = std::sqrt(pi) * std::exp(-0.25 * xi * xi);
                    const double fhat_p = -0.5 * xi * fhat;
                    const cplx mu = std::polar(1.0, t * dispersion_phase(xi));
                    const cplx log_mu_p =
                        cplx(0.0, t * (3.0 * xi * xi - 2.0 * std::abs(xi)));
                    g[i] = mu * fhat;
                    gp[i] = mu * (log_mu_p * fhat + fhat_p);
                }
                const double lhs = std::sqrt(stein::norm_sq(g, gp, xi_grid.dx(), theta));
                const double ratio = lhs / rhs;
                out.push_back({"df theta=" + num(theta) + " t=" + num(t), ratio, ""});
                if (ratio < previous) monotone = false;
                previous = ratio;
            }
            out.push_back({"df theta=" + num(theta) + " monotone", monotone ? 1.0 : 0.0, ""});
        }
    }

    return out;
}

} // namespace benj::bounds

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

namespace benj {

// <x> = (1 + x^2)^{1/2}
inline double japanese_bracket(double x) { return std::sqrt(1.0 + x * x); }

// truncated weight: equals <x> for |x| <= N, the constant 2N for |x| >= 3N,
// and on the transition band [N, 3N] follows <N> + (2N - <N>)*u(z) with
// u(z) = 2z - 2z^3 + z^4, z = (|x| - N)/(2N).
// u'(z) = 2(1-z)^2(1+2z) >= 0 gives monotonicity; the band slope is at most
// (2N - <N>)/N < 1 and matches <x>' at the junction to O(N^-4). the band is
// concave, so the signed comparison w'' <= <x>'' holds pointwise; the
// absolute comparison necessarily carries an N^2 factor (any slope-1-to-0
// transition of width 2N has |w''| ~ 1/N against <x>'' ~ 1/N^3 there).
double truncated_weight(double x, double N);

// first and second derivatives (in x), used by the sampled invariant checks
double truncated_weight_d1(double x, double N);
double truncated_weight_d2(double x, double N);

struct WeightSpec {
    double r = 0.0;                      // decay exponent
    std::optional<double> truncation_N;  // none = untruncated <x>^r

    WeightSpec() = default;
    WeightSpec(double r_, std::optional<double> N_ = std::nullopt) : r(r_), truncation_N(N_) {
        if (!(r >= 0.0)) throw std::invalid_argument("WeightSpec: r must be nonnegative");
        if (truncation_N && !(*truncation_N > 0.0))
            throw std::invalid_argument("WeightSpec: truncation_N must be positive");
    }

    double weight(double x) const {
        return truncation_N ? truncated_weight(x, *truncation_N) : japanese_bracket(x);
    }
};

} // namespace benj

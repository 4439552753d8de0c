#include "benj/weights.hpp"

namespace benj {
namespace {

void check_N(double N) {
    if (!(N > 0.0) || !std::isfinite(N))
        throw std::invalid_argument("truncated_weight: N must be positive and finite");
}

} // namespace

double truncated_weight(double x, double N) {
    check_N(N);
    const double a = std::abs(x);
    if (a <= N) return japanese_bracket(a);
    if (a >= 3.0 * N) return 2.0 * N;
    const double bn = japanese_bracket(N);
    const double rise = 2.0 * N - bn;
    const double z = (a - N) / (2.0 * N);
    const double u = z * (2.0 + z * z * (-2.0 + z));
    return bn + rise * u;
}

double truncated_weight_d1(double x, double N) {
    check_N(N);
    const double a = std::abs(x);
    const double sign = x < 0.0 ? -1.0 : 1.0;
    if (a <= N) return sign * a / japanese_bracket(a);
    if (a >= 3.0 * N) return 0.0;
    const double rise = 2.0 * N - japanese_bracket(N);
    const double z = (a - N) / (2.0 * N);
    const double up = 2.0 + z * z * (-6.0 + 4.0 * z);
    return sign * rise * up / (2.0 * N);
}

double truncated_weight_d2(double x, double N) {
    check_N(N);
    const double a = std::abs(x);
    if (a <= N) {
        const double b = japanese_bracket(a);
        return 1.0 / (b * b * b);
    }
    if (a >= 3.0 * N) return 0.0;
    const double rise = 2.0 * N - japanese_bracket(N);
    const double z = (a - N) / (2.0 * N);
    const double upp = -12.0 * z + 12.0 * z * z;
    return rise * upp / (4.0 * N * N);
}

} // namespace benj

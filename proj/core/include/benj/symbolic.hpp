#pragma once

#include <complex>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace benj::sym {

// raised when a computation leaves the representable distribution class:
// differentiating a delta that survives the moment hypotheses, or forming
// delta^k with k >= 2
class distribution_overflow : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// exact rational with int64 numerator/denominator, normalized (den > 0,
// reduced); arithmetic overflow throws
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n);  // NOLINT(google-explicit-constructor)
    Rational(long long n, long long d);

    bool is_zero() const { return num == 0; }
    std::string str() const;
};

Rational operator+(const Rational& a, const Rational& b);
Rational operator-(const Rational& a, const Rational& b);
Rational operator*(const Rational& a, const Rational& b);
Rational operator/(const Rational& a, const Rational& b);
Rational operator-(const Rational& a);
bool operator==(const Rational& a, const Rational& b);
bool operator!=(const Rational& a, const Rational& b);

// gaussian rational re + i*im
struct GaussRat {
    Rational re;
    Rational im;

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    std::string str() const;
};

GaussRat operator+(const GaussRat& a, const GaussRat& b);
GaussRat operator*(const GaussRat& a, const GaussRat& b);
GaussRat operator-(const GaussRat& a);
bool operator==(const GaussRat& a, const GaussRat& b);

// one monomial  coeff * t^a * xi^p * abs^q * sgn^s * delta^d * sigma^(k),
// where abs = |xi|, sgn = sign(xi), delta = dirac delta at 0, sigma^(k) the
// k-th derivative of the transformed profile
struct Term {
    GaussRat coeff;
    int t_power = 0;
    int xi_power = 0;
    int abs_power = 0;
    int sgn_count = 0;
    int delta_count = 0;
    bool has_sigma = false;
    int sigma_order = 0;
};

using Polynomial = std::vector<Term>;

// rewrite to canonical form and merge like monomials:
//   sgn^2 -> 1,  sgn*abs -> xi,  sgn*xi -> abs,  abs^2 -> xi^2,
//   delta*xi -> 0, delta*abs -> 0, delta*sgn -> 0,
//   delta*sigma^(k) -> 0 when k is in hyp (the vanishing-moment hypotheses),
//   delta^k (k >= 2) -> distribution_overflow.
// terms come out sorted by (sigma_order, delta, t, xi, abs, sgn)
Polynomial canonicalize(Polynomial terms, const std::set<int>& hyp);

// d/dxi, term by term, canonicalized with empty hypotheses. differentiating
// a delta factor throws distribution_overflow naming the term (delta' is
// outside the representable class)
Polynomial differentiate(const Polynomial& p);

Polynomial multiply(const Polynomial& a, const Polynomial& b);

// P_n in  d^n/dxi^n [ mu(t,xi) sigma(xi) ] = mu(t,xi) P_n,  built by the
// recursion P_{k+1} = canonicalize(P_k' + a P_k, hyp) with
// a = d/dxi log mu = i t (3 xi^2 - 2 abs); hypothesis annihilation runs
// after every differentiation order
Polynomial differentiate_with_phase(int order, const std::set<int>& hyp);

// grammar: sums of products of factors; factors are integers, i, t, xi, abs,
// sgn, delta, sigma or sigma^(k), parenthesized sums, each optionally ^int;
// product by '*' or juxtaposition. result is canonicalized with empty hyp
Polynomial parse(const std::string& text);

// canonical monomial key without the coefficient, e.g. "t^2*xi*abs*sigma^(1)";
// "1" for the empty monomial
std::string monomial_key(const Term& t);

// deterministic rendering of a canonical polynomial
std::string render(const Polynomial& p);

struct DiffEntry {
    std::string monomial;
    std::string engine_coeff;     // "0" when the monomial is absent
    std::string reference_coeff;  // "0" when the monomial is absent
};

// coefficient-by-coefficient comparison of two canonical polynomials; one
// entry per monomial whose coefficients disagree, in canonical term order
std::vector<DiffEntry> diff(const Polynomial& engine, const Polynomial& reference);

// diff of the engine's differentiate_with_phase(order, hyp) against a
// transcription of the printed expansion; report-only, the engine output is
// ground truth for downstream use
std::vector<DiffEntry> verify_expansion(int order, const std::set<int>& hyp,
                                        const Polynomial& transcription);

// numeric evaluation at (t, xi != 0) given values of sigma^(k)(xi);
// delta terms contribute 0 away from the origin
std::complex<double> eval(const Polynomial& p, double t, double xi,
                          const std::vector<std::complex<double>>& sigma_derivs);

// coefficients (alpha, beta) of the delta mass  alpha*t*M1 + beta*t^2*P
// carried by the fourth-derivative identity for an odd mean-zero profile,
// where M1 is the first moment and P the squared L2 norm of the datum.
// the root of alpha*t*M1 + beta*t^2*P is t* = -(alpha/beta)*(M1/P)
struct DeltaPath {
    Rational moment_weight;  // alpha
    Rational energy_weight;  // beta

    // e.g. "-16*t*M1 - 4*t^2*P"
    std::string str() const;
    // -alpha/beta: the root is t* = root_scale() * M1 / P
    Rational root_scale() const;
};

// as printed in the source derivation chain: (-16, -4)
DeltaPath delta_coefficient_formula();

// recomputed through derivative_polynomial(4, {0}): reads off the
// coefficient of t*delta*sigma^(1) and applies the first-moment production
// rate, giving (-12, -3). same root ratio alpha/beta = 4 exactly
DeltaPath engine_delta_path();

} // namespace benj::sym

#include "benj/symbolic.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <tuple>

namespace benj::sym {
namespace {

using wide = __int128;

long long narrow(wide v, const char* what) {
    if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
        throw std::overflow_error(std::string("rational overflow in ") + what);
    return static_cast<long long>(v);
}

wide wide_abs(wide v) { return v < 0 ? -v : v; }

wide wide_gcd(wide a, wide b) {
    a = wide_abs(a);
    b = wide_abs(b);
    while (b != 0) {
        const wide r = a % b;
        a = b;
        b = r;
    }
    return a;
}

Rational make_reduced(wide num, wide den, const char* what) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const wide g = num == 0 ? den : wide_gcd(num, den);
    Rational r;
    r.num = narrow(num / g, what);
    r.den = narrow(den / g, what);
    return r;
}

} // namespace

Rational::Rational(long long n) : num(n), den(1) {}

Rational::Rational(long long n, long long d) { *this = make_reduced(n, d, "construction"); }

std::string Rational::str() const {
    std::string s = std::to_string(num);
    if (den != 1) s += "/" + std::to_string(den);
    return s;
}

Rational operator+(const Rational& a, const Rational& b) {
    return make_reduced(wide(a.num) * b.den + wide(b.num) * a.den, wide(a.den) * b.den, "add");
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    return make_reduced(wide(a.num) * b.num, wide(a.den) * b.den, "multiply");
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num == 0) throw std::invalid_argument("rational division by zero");
    return make_reduced(wide(a.num) * b.den, wide(a.den) * b.num, "divide");
}

Rational operator-(const Rational& a) {
    Rational r;
    r.num = narrow(-wide(a.num), "negate");
    r.den = a.den;
    return r;
}

bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

GaussRat operator+(const GaussRat& a, const GaussRat& b) { return {a.re + b.re, a.im + b.im}; }

GaussRat operator*(const GaussRat& a, const GaussRat& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

GaussRat operator-(const GaussRat& a) { return {-a.re, -a.im}; }

bool operator==(const GaussRat& a, const GaussRat& b) { return a.re == b.re && a.im == b.im; }

std::string GaussRat::str() const {
    if (is_zero()) return "0";
    if (im.is_zero()) return re.str();
    std::string imag;
    if (im == Rational(1))
        imag = "i";
    else if (im == Rational(-1))
        imag = "-i";
    else
        imag = im.str() + "*i";
    if (re.is_zero()) return imag;
    if (imag[0] == '-') return "(" + re.str() + imag + ")";
    return "(" + re.str() + "+" + imag + ")";
}

namespace {

using TermKey = std::tuple<int, int, int, int, int, int>;

TermKey key_of(const Term& t) {
    return {t.has_sigma ? t.sigma_order : -1, t.delta_count, t.t_power,
            t.xi_power,                       t.abs_power,   t.sgn_count};
}

Term scalar_term(GaussRat c) {
    Term t;
    t.coeff = c;
    return t;
}

Term sigma_term() {
    Term t;
    t.coeff = {Rational(1), Rational(0)};
    t.has_sigma = true;
    return t;
}

Term term_mul(const Term& a, const Term& b) {
    if (a.has_sigma && b.has_sigma)
        throw std::invalid_argument("product of two sigma factors is not representable");
    Term t;
    t.coeff = a.coeff * b.coeff;
    t.t_power = a.t_power + b.t_power;
    t.xi_power = a.xi_power + b.xi_power;
    t.abs_power = a.abs_power + b.abs_power;
    t.sgn_count = a.sgn_count + b.sgn_count;
    t.delta_count = a.delta_count + b.delta_count;
    t.has_sigma = a.has_sigma || b.has_sigma;
    t.sigma_order = a.has_sigma ? a.sigma_order : b.sigma_order;
    return t;
}

GaussRat int_coeff(long long n) { return {Rational(n), Rational(0)}; }

} // namespace

Polynomial canonicalize(Polynomial terms, const std::set<int>& hyp) {
    std::map<TermKey, Term> merged;
    for (Term s : terms) {
        if (s.coeff.is_zero()) continue;
        if (s.delta_count >= 2)
            throw distribution_overflow("distribution order overflow: delta^" +
                                        std::to_string(s.delta_count) + " is not representable");
        s.sgn_count %= 2;  // sgn^2 = 1 away from the origin
        if (s.delta_count == 1) {
            // the delta evaluates its cofactor at 0, where xi, abs and sgn vanish
            if (s.xi_power > 0 || s.abs_power > 0 || s.sgn_count == 1) continue;
            if (s.has_sigma && hyp.count(s.sigma_order)) continue;  // vanishing moment
        }
        if (s.sgn_count == 1 && s.abs_power >= 1) {
            s.abs_power -= 1;
            s.xi_power += 1;
            s.sgn_count = 0;  // sgn*abs = xi
        } else if (s.sgn_count == 1 && s.xi_power >= 1) {
            s.xi_power -= 1;
            s.abs_power += 1;
            s.sgn_count = 0;  // sgn*xi = abs
        }
        s.xi_power += 2 * (s.abs_power / 2);  // abs^2 = xi^2
        s.abs_power %= 2;
        auto [it, fresh] = merged.emplace(key_of(s), s);
        if (!fresh) it->second.coeff = it->second.coeff + s.coeff;
    }
    Polynomial out;
    for (auto& [key, term] : merged)
        if (!term.coeff.is_zero()) out.push_back(term);
    return out;
}

namespace {

Polynomial differentiate_raw(const Polynomial& p) {
    Polynomial out;
    for (const Term& s : p) {
        if (s.xi_power >= 1) {
            Term t = s;
            t.coeff = t.coeff * int_coeff(s.xi_power);
            t.xi_power -= 1;
            out.push_back(t);
        }
        if (s.abs_power >= 1) {
            Term t = s;  // d/dxi abs^q = q abs^{q-1} sgn
            t.coeff = t.coeff * int_coeff(s.abs_power);
            t.abs_power -= 1;
            t.sgn_count += 1;
            out.push_back(t);
        }
        if (s.sgn_count >= 1) {
            Term t = s;  // d/dxi sgn = 2 delta
            t.coeff = t.coeff * int_coeff(2 * s.sgn_count);
            t.sgn_count -= 1;
            t.delta_count += 1;
            out.push_back(t);
        }
        if (s.delta_count >= 1)
            throw distribution_overflow(
                "distribution order overflow: derivative of delta required in term " +
                monomial_key(s));
        if (s.has_sigma) {
            Term t = s;
            t.sigma_order += 1;
            out.push_back(t);
        }
    }
    return out;
}

} // namespace

Polynomial differentiate(const Polynomial& p) { return canonicalize(differentiate_raw(p), {}); }

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    out.reserve(a.size() * b.size());
    for (const Term& s : a)
        for (const Term& t : b) out.push_back(term_mul(s, t));
    return out;
}

Polynomial differentiate_with_phase(int order, const std::set<int>& hyp) {
    if (order < 0) throw std::invalid_argument("derivative order must be nonnegative");
    // a = d/dxi log mu = i t (3 xi^2 - 2 abs)
    Polynomial a;
    {
        Term t1;
        t1.coeff = {Rational(0), Rational(3)};
        t1.t_power = 1;
        t1.xi_power = 2;
        a.push_back(t1);
        Term t2;
        t2.coeff = {Rational(0), Rational(-2)};
        t2.t_power = 1;
        t2.abs_power = 1;
        a.push_back(t2);
    }
    Polynomial p = canonicalize({sigma_term()}, hyp);
    for (int k = 0; k < order; ++k) {
        Polynomial next = differentiate_raw(p);
        const Polynomial drift = multiply(a, p);
        next.insert(next.end(), drift.begin(), drift.end());
        p = canonicalize(std::move(next), hyp);
    }
    return p;
}

// ============================================================================
// parser
// ============================================================================

namespace {

struct Token {
    enum Kind { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };
    Kind kind;
    long long value = 0;
    std::string text;
    std::size_t pos = 0;
};

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        Token tok;
        tok.pos = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            long long v = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                const int digit = text[i] - '0';
                if (v > (std::numeric_limits<long long>::max() - digit) / 10)
                    throw std::invalid_argument("integer literal too large at position " +
                                                std::to_string(tok.pos));
                v = v * 10 + digit;
                ++i;
            }
            tok.kind = Token::number;
            tok.value = v;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            tok.kind = Token::ident;
            tok.text = text.substr(i, j - i);
            i = j;
        } else {
            switch (c) {
                case '+': tok.kind = Token::plus; break;
                case '-': tok.kind = Token::minus; break;
                case '*': tok.kind = Token::star; break;
                case '/': tok.kind = Token::slash; break;
                case '^': tok.kind = Token::caret; break;
                case '(': tok.kind = Token::lparen; break;
                case ')': tok.kind = Token::rparen; break;
                default:
                    throw std::invalid_argument(std::string("unexpected character '") + c +
                                                "' at position " + std::to_string(i));
            }
            ++i;
        }
        out.push_back(tok);
    }
    Token fin;
    fin.kind = Token::end;
    fin.pos = text.size();
    out.push_back(fin);
    return out;
}

class Parser {
  public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    Polynomial run() {
        Polynomial p = parse_expr();
        if (peek().kind != Token::end)
            throw std::invalid_argument("trailing input at position " + std::to_string(peek().pos));
        return p;
    }

  private:
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(i_ + ahead, toks_.size() - 1)];
    }
    Token take() { return toks_[std::min(i_++, toks_.size() - 1)]; }

    static bool starts_factor(const Token& t) {
        return t.kind == Token::number || t.kind == Token::ident || t.kind == Token::lparen;
    }

    Polynomial parse_expr() {
        Polynomial total;
        bool first = true;
        while (true) {
            int sign = 1;
            if (peek().kind == Token::plus || peek().kind == Token::minus) {
                if (take().kind == Token::minus) sign = -1;
            } else if (!first) {
                break;
            }
            Polynomial term = parse_term();
            for (Term& t : term)
                if (sign < 0) t.coeff = -t.coeff;
            total.insert(total.end(), term.begin(), term.end());
            first = false;
            if (peek().kind != Token::plus && peek().kind != Token::minus) break;
        }
        return total;
    }

    Polynomial parse_term() {
        Polynomial prod = parse_factor();
        while (true) {
            if (peek().kind == Token::star) {
                take();
                prod = multiply(prod, parse_factor());
            } else if (peek().kind == Token::slash) {
                // division only by a scalar (rational coefficients in
                // rendered output, e.g. "1/2*abs")
                const std::size_t at = take().pos;
                const Polynomial divisor = parse_factor();
                if (divisor.size() != 1 || divisor[0].t_power != 0 ||
                    divisor[0].xi_power != 0 || divisor[0].abs_power != 0 ||
                    divisor[0].sgn_count != 0 || divisor[0].delta_count != 0 ||
                    divisor[0].has_sigma)
                    throw std::invalid_argument(
                        "division is only defined by a scalar (position " +
                        std::to_string(at) + ")");
                const GaussRat z = divisor[0].coeff;
                if (z.is_zero())
                    throw std::invalid_argument("division by zero (position " +
                                                std::to_string(at) + ")");
                const Rational mag = z.re * z.re + z.im * z.im;
                const GaussRat inv{z.re / mag, -(z.im / mag)};
                for (Term& t : prod) t.coeff = t.coeff * inv;
            } else if (starts_factor(peek())) {
                prod = multiply(prod, parse_factor());
            } else {
                break;
            }
        }
        return prod;
    }

    Polynomial parse_factor() {
        Polynomial base = parse_primary();
        if (peek().kind == Token::caret) {
            take();
            if (peek().kind == Token::minus)
                throw std::invalid_argument("negative exponents are not supported (position " +
                                            std::to_string(peek().pos) + ")");
            if (peek().kind != Token::number)
                throw std::invalid_argument("expected an integer exponent at position " +
                                            std::to_string(peek().pos));
            const long long e = take().value;
            if (e > 64) throw std::invalid_argument("exponent too large");
            Polynomial result{scalar_term(int_coeff(1))};
            for (long long k = 0; k < e; ++k) result = multiply(result, base);
            return result;
        }
        return base;
    }

    Polynomial parse_primary() {
        const Token& t = peek();
        if (t.kind == Token::number) {
            take();
            return {scalar_term(int_coeff(t.value))};
        }
        if (t.kind == Token::lparen) {
            take();
            Polynomial inner = parse_expr();
            if (peek().kind != Token::rparen)
                throw std::invalid_argument("expected ')' at position " +
                                            std::to_string(peek().pos));
            take();
            return inner;
        }
        if (t.kind == Token::ident) {
            const std::string name = take().text;
            Term term = scalar_term(int_coeff(1));
            if (name == "i") {
                term.coeff = {Rational(0), Rational(1)};
            } else if (name == "t") {
                term.t_power = 1;
            } else if (name == "xi") {
                term.xi_power = 1;
            } else if (name == "abs") {
                term.abs_power = 1;
            } else if (name == "sgn") {
                term.sgn_count = 1;
            } else if (name == "delta") {
                term.delta_count = 1;
            } else if (name == "sigma") {
                term.has_sigma = true;
                term.sigma_order = 0;
                if (peek().kind == Token::caret && peek(1).kind == Token::lparen) {
                    take();  // ^
                    take();  // (
                    if (peek().kind != Token::number)
                        throw std::invalid_argument(
                            "expected a nonnegative derivative order at position " +
                            std::to_string(peek().pos));
                    term.sigma_order = static_cast<int>(take().value);
                    if (peek().kind != Token::rparen)
                        throw std::invalid_argument("expected ')' at position " +
                                                    std::to_string(peek().pos));
                    take();
                }
            } else {
                throw std::invalid_argument("unknown symbol '" + name + "' at position " +
                                            std::to_string(t.pos));
            }
            return {term};
        }
        throw std::invalid_argument("expected a factor at position " + std::to_string(t.pos));
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

} // namespace

Polynomial parse(const std::string& text) {
    Parser parser(lex(text));
    return canonicalize(parser.run(), {});
}

std::string monomial_key(const Term& t) {
    std::string out;
    auto append = [&out](const std::string& piece) {
        if (!out.empty()) out += "*";
        out += piece;
    };
    auto power = [](const std::string& base, int p) {
        return p == 1 ? base : base + "^" + std::to_string(p);
    };
    if (t.t_power > 0) append(power("t", t.t_power));
    if (t.xi_power > 0) append(power("xi", t.xi_power));
    if (t.abs_power > 0) append(power("abs", t.abs_power));
    if (t.sgn_count > 0) append(power("sgn", t.sgn_count));
    if (t.delta_count > 0) append(power("delta", t.delta_count));
    if (t.has_sigma) append("sigma^(" + std::to_string(t.sigma_order) + ")");
    return out.empty() ? "1" : out;
}

std::string render(const Polynomial& p) {
    if (p.empty()) return "0";
    std::string out;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const std::string mono = monomial_key(p[k]);
        const std::string cs = p[k].coeff.str();
        std::string piece;
        if (mono == "1")
            piece = cs;
        else if (cs == "1")
            piece = mono;
        else if (cs == "-1")
            piece = "-" + mono;
        else
            piece = cs + "*" + mono;
        if (k == 0) {
            out = piece;
        } else if (piece[0] == '-') {
            out += " - " + piece.substr(1);
        } else {
            out += " + " + piece;
        }
    }
    return out;
}

std::vector<DiffEntry> diff(const Polynomial& engine, const Polynomial& reference) {
    std::map<TermKey, std::pair<GaussRat, GaussRat>> table;
    std::map<TermKey, std::string> names;
    for (const Term& t : engine) {
        table[key_of(t)].first = t.coeff;
        names[key_of(t)] = monomial_key(t);
    }
    for (const Term& t : reference) {
        table[key_of(t)].second = t.coeff;
        names[key_of(t)] = monomial_key(t);
    }
    std::vector<DiffEntry> out;
    for (const auto& [key, pair] : table)
        if (!(pair.first == pair.second))
            out.push_back({names[key], pair.first.str(), pair.second.str()});
    return out;
}

std::complex<double> eval(const Polynomial& p, double t, double xi,
                          const std::vector<std::complex<double>>& sigma_derivs) {
    if (xi == 0.0) throw std::invalid_argument("eval requires xi != 0");
    std::complex<double> total = 0.0;
    for (const Term& s : p) {
        if (s.delta_count > 0) continue;  // delta has no mass away from the origin
        std::complex<double> v(static_cast<double>(s.coeff.re.num) / s.coeff.re.den,
                               static_cast<double>(s.coeff.im.num) / s.coeff.im.den);
        for (int k = 0; k < s.t_power; ++k) v *= t;
        for (int k = 0; k < s.xi_power; ++k) v *= xi;
        for (int k = 0; k < s.abs_power; ++k) v *= std::abs(xi);
        if (s.sgn_count % 2 == 1 && xi < 0.0) v = -v;
        if (s.has_sigma) {
            if (s.sigma_order >= static_cast<int>(sigma_derivs.size()))
                throw std::invalid_argument("eval: sigma derivative order " +
                                            std::to_string(s.sigma_order) + " not supplied");
            v *= sigma_derivs[static_cast<std::size_t>(s.sigma_order)];
        }
        total += v;
    }
    return total;
}

std::vector<DiffEntry> verify_expansion(int order, const std::set<int>& hyp,
                                        const Polynomial& transcription) {
    return diff(differentiate_with_phase(order, hyp), transcription);
}

std::string DeltaPath::str() const {
    std::string out = moment_weight.str() + "*t*M1";
    const std::string beta = energy_weight.str();
    if (!beta.empty() && beta[0] == '-')
        out += " - " + beta.substr(1) + "*t^2*P";
    else
        out += " + " + beta + "*t^2*P";
    return out;
}

Rational DeltaPath::root_scale() const { return -(moment_weight / energy_weight); }

DeltaPath delta_coefficient_formula() { return {Rational(-16), Rational(-4)}; }

DeltaPath engine_delta_path() {
    const Polynomial p4 = differentiate_with_phase(4, {0});
    GaussRat c{};
    for (const Term& s : p4)
        if (s.delta_count == 1 && s.has_sigma && s.sigma_order == 1 && s.t_power == 1 &&
            s.xi_power == 0 && s.abs_power == 0 && s.sgn_count == 0)
            c = s.coeff;
    if (c.is_zero() || !c.re.is_zero())
        throw std::logic_error("engine_delta_path: t*delta*sigma^(1) coefficient not of form b*i");
    // sigma^(1)(0) = -i * (first moment of the profile), so the delta mass per
    // unit first moment is coeff * (-i); the energy weight follows from the
    // first-moment production rate (a quarter of the squared norm per the
    // time-averaged drift)
    DeltaPath d;
    d.moment_weight = c.im;
    d.energy_weight = c.im * Rational(1, 4);
    return d;
}

} // namespace benj::sym

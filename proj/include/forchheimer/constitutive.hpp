#pragma once

/// Constitutive layer for generalized Forchheimer momentum laws.
///
/// A law is a generalized polynomial g(s) = sum_i a_i s^{alpha_i} with
/// alpha_0 = 0 < alpha_1 < ... < alpha_N and nonnegative coefficients
/// (a_0 > 0, a_N > 0).  The induced nonlinear diffusivity is
///   K(xi) = 1 / g(s(xi)),  where s = s(xi) >= 0 solves s g(s) = xi,
/// and the associated potential is
///   H(xi) = integral_0^{xi^2} K(sqrt(sigma)) d sigma
///         = integral_0^{xi} 2 tau K(tau) d tau.
///
/// K is strictly decreasing from 1/a_0 with K ~ xi^{-a} at infinity,
/// where a = alpha_N / (1 + alpha_N) in (0,1), and satisfies
///   -a K(xi) <= K'(xi) xi <= 0   and   K xi^2 <= H <= 2 K xi^2.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace forch {

/// Thrown when an iterative numeric routine fails to converge.
/// Carries the last bracketing interval for diagnosis.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double lo, double hi)
        : std::runtime_error(what), bracket_lo(lo), bracket_hi(hi) {}
    double bracket_lo;
    double bracket_hi;
};

struct ForchheimerLaw {
    std::vector<double> exponents;     // alpha_0 = 0 < alpha_1 < ... < alpha_N
    std::vector<double> coefficients;  // a_0, ..., a_N

    double degree() const { return exponents.back(); }

    /// Degeneracy parameter a = alpha_N / (1 + alpha_N), always in (0,1).
    double degeneracy() const { return degree() / (1.0 + degree()); }

    void validate() const {
        if (exponents.size() != coefficients.size())
            throw std::invalid_argument("law: exponent/coefficient size mismatch");
        if (exponents.size() < 2)
            throw std::invalid_argument("law: need N >= 1 (at least two terms)");
        if (exponents.front() != 0.0)
            throw std::invalid_argument("law: alpha_0 must be exactly 0");
        for (std::size_t i = 1; i < exponents.size(); ++i)
            if (!(exponents[i] > exponents[i - 1]))
                throw std::invalid_argument("law: exponents must be strictly increasing");
        if (!(coefficients.front() > 0.0))
            throw std::invalid_argument("law: a_0 must be positive");
        if (!(coefficients.back() > 0.0))
            throw std::invalid_argument("law: a_N must be positive");
        for (double c : coefficients)
            if (!(c >= 0.0)) throw std::invalid_argument("law: coefficients must be nonnegative");
        const double a = degeneracy();
        if (!(a > 0.0 && a < 1.0))
            throw std::invalid_argument("law: degeneracy parameter outside (0,1)");
    }
};

namespace detail {

// pow with fast paths for the small integer and half-integer exponents
// that dominate practical laws; called millions of times per solve.
inline double pow_fast(double s, double e) {
    if (e == 0.0) return 1.0;
    if (e == 1.0) return s;
    if (e == 2.0) return s * s;
    if (e == 3.0) return s * s * s;
    if (e == 4.0) {
        const double q = s * s;
        return q * q;
    }
    if (e == 0.5) return std::sqrt(s);
    if (e == 1.5) return s * std::sqrt(s);
    return std::pow(s, e);
}

}  // namespace detail

/// g(s) = sum a_i s^{alpha_i}.  s^0 is 1 at s = 0 (the constant term).
inline double eval_g(const ForchheimerLaw& law, double s) {
    if (!(s >= 0.0)) throw std::domain_error("eval_g: s must be nonnegative");
    double g = law.coefficients[0];
    for (std::size_t i = 1; i < law.exponents.size(); ++i)
        g += law.coefficients[i] * detail::pow_fast(s, law.exponents[i]);
    return g;
}

/// g'(s).  Unbounded at s = 0 when alpha_1 < 1; callers that need a finite
/// quantity near zero should use eval_sg_derivative instead.
inline double eval_g_derivative(const ForchheimerLaw& law, double s) {
    double gp = 0.0;
    for (std::size_t i = 1; i < law.exponents.size(); ++i)
        gp += law.coefficients[i] * law.exponents[i] *
              detail::pow_fast(s, law.exponents[i] - 1.0);
    return gp;
}

/// d/ds [s g(s)] = sum a_i (1 + alpha_i) s^{alpha_i}; finite and >= a_0 for all s >= 0.
inline double eval_sg_derivative(const ForchheimerLaw& law, double s) {
    double d = law.coefficients[0];
    for (std::size_t i = 1; i < law.exponents.size(); ++i)
        d += law.coefficients[i] * (1.0 + law.exponents[i]) *
             detail::pow_fast(s, law.exponents[i]);
    return d;
}

/// Solve s g(s) = xi for the unique nonnegative root.
///
/// s -> s g(s) is strictly increasing and convex, so a Newton iteration
/// started at the right end of the bracket [0, max(1, xi/a_0)] descends
/// monotonically onto the root; any step leaving the bracket falls back
/// to bisection.  Terminates when |s g(s) - xi| <= tol * (1 + xi).
///
/// An optional hint warm-starts the iteration (used by ascending scans).
inline double invert_sg(const ForchheimerLaw& law, double xi, double tol = 1e-12,
                        double hint = -1.0) {
    if (!(xi >= 0.0)) throw std::domain_error("invert_sg: xi must be nonnegative");
    if (!(tol > 0.0)) throw std::invalid_argument("invert_sg: tol must be positive");
    if (xi == 0.0) return 0.0;

    double lo = 0.0;
    double hi = std::max(1.0, xi / law.coefficients[0]);  // s g(s) >= a_0 s
    const double target = tol * (1.0 + xi);

    double s = (hint > 0.0 && hint < hi) ? hint : hi;
    const int max_iter = 200;
    for (int it = 0; it < max_iter; ++it) {
        const double f = s * eval_g(law, s) - xi;
        if (std::abs(f) <= target) return s;
        if (f > 0.0) hi = s; else lo = s;

        const double fp = eval_sg_derivative(law, s);
        double next = s - f / fp;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        s = next;
    }
    throw NumericError("invert_sg: no convergence", lo, hi);
}

struct DiffusivityValue {
    double K;       // 1 / g(s(xi)), in (0, 1/a_0]
    double Kprime;  // dK/dxi, <= 0 (may be -inf at xi = 0 when alpha_1 < 1)
    double s;       // the root s(xi)
};

/// K(xi) and its derivative via the chain rule:
///   K' = -g'(s) s'(xi) / g(s)^2,   s'(xi) = 1 / (g(s) + s g'(s)).
inline DiffusivityValue eval_K(const ForchheimerLaw& law, double xi, double tol = 1e-12,
                               double hint = -1.0) {
    if (!(xi >= 0.0)) throw std::domain_error("eval_K: xi must be nonnegative");
    const double s = invert_sg(law, xi, tol, hint);
    const double g = eval_g(law, s);
    const double gp = eval_g_derivative(law, s);
    const double K = 1.0 / g;
    const double Kp = -gp / (eval_sg_derivative(law, s) * g * g);
    return {K, Kp, s};
}

namespace detail {

// Adaptive Simpson with Richardson acceptance; tol is absolute over [a, b].
template <typename F>
double adaptive_simpson_rec(const F& f, double a, double fa, double b, double fb, double m,
                            double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0) throw NumericError("adaptive quadrature: depth exhausted", a, b);
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
    if (b <= a) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

}  // namespace detail

/// H(xi) via the substituted form integral_0^xi 2 tau K(tau) d tau.
/// quad_tol is an absolute tolerance per unit of integration length.
inline double eval_H(const ForchheimerLaw& law, double xi, double quad_tol = 1e-10) {
    if (!(xi >= 0.0)) throw std::domain_error("eval_H: xi must be nonnegative");
    if (xi == 0.0) return 0.0;
    auto f = [&](double tau) { return 2.0 * tau * eval_K(law, tau).K; };
    return detail::adaptive_simpson(f, 0.0, xi, quad_tol * std::max(1.0, xi));
}

/// Cumulative H over an ascending grid: H(grid[k]) for every k, computed
/// segment by segment so scans over many points stay cheap.
inline std::vector<double> cumulative_H(const ForchheimerLaw& law,
                                        const std::vector<double>& ascending_xi,
                                        double quad_tol = 1e-10) {
    std::vector<double> H(ascending_xi.size(), 0.0);
    double acc = 0.0, prev = 0.0, hint = -1.0;
    auto f = [&](double tau) {
        const DiffusivityValue kv = eval_K(law, tau, 1e-12, hint);
        hint = kv.s;
        return 2.0 * tau * kv.K;
    };
    for (std::size_t k = 0; k < ascending_xi.size(); ++k) {
        const double xi = ascending_xi[k];
        if (!(xi >= prev)) throw std::invalid_argument("cumulative_H: grid must ascend");
        if (xi > prev)
            acc += detail::adaptive_simpson(f, prev, xi, quad_tol * std::max(1e-3, xi - prev));
        H[k] = acc;
        prev = xi;
    }
    return H;
}

struct ConstitutiveViolation {
    double xi;
    std::string check;  // which inequality failed
    double residual;    // signed amount by which it failed
};

struct ConstitutiveReport {
    std::vector<double> xi_grid;
    double fitted_C1 = 0.0;  // min K (1+xi)^a
    double fitted_C2 = 0.0;  // max K (1+xi)^a
    double fitted_C3 = 0.0;  // lower envelope of K xi^2 / (xi^{2-a} - 1)
    std::vector<ConstitutiveViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// Scan a grid of xi values and check every explicit constitutive
/// inequality: the root residual, strict monotonicity of K and s, the
/// derivative bound -a <= K' xi / K <= 0, and the sandwich
/// K xi^2 <= H <= 2 K xi^2.  Envelope constants are fitted, not asserted.
inline ConstitutiveReport verify_constitutive(const ForchheimerLaw& law,
                                              const std::vector<double>& xi_grid,
                                              double deriv_tol = 1e-9,
                                              double sandwich_tol = 1e-8,
                                              double root_tol = 1e-10) {
    if (xi_grid.empty()) throw std::domain_error("verify_constitutive: empty grid");
    law.validate();
    const double a = law.degeneracy();

    std::vector<double> grid = xi_grid;
    std::sort(grid.begin(), grid.end());
    if (grid.front() < 0.0) throw std::domain_error("verify_constitutive: negative xi");

    ConstitutiveReport rep;
    rep.xi_grid = grid;
    const std::vector<double> H = cumulative_H(law, grid);

    double C1 = std::numeric_limits<double>::infinity();
    double C2 = 0.0;
    double C3 = std::numeric_limits<double>::infinity();
    double prev_K = std::numeric_limits<double>::infinity();
    double prev_s = -1.0;
    double hint = -1.0;

    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double xi = grid[k];
        const DiffusivityValue kv = eval_K(law, xi, 1e-12, hint);
        hint = kv.s;

        const double root_res = std::abs(kv.s * eval_g(law, kv.s) - xi) - root_tol * (1.0 + xi);
        if (root_res > 0.0) rep.violations.push_back({xi, "root-residual", root_res});

        if (k > 0 && grid[k] > grid[k - 1]) {
            if (!(kv.K < prev_K)) rep.violations.push_back({xi, "K-monotone", prev_K - kv.K});
            if (!(kv.s > prev_s)) rep.violations.push_back({xi, "s-monotone", kv.s - prev_s});
        }
        prev_K = kv.K;
        prev_s = kv.s;

        // -a <= K' xi / K <= 0; at xi = 0 the product is zero by the limit.
        if (xi > 0.0) {
            const double ratio = kv.Kprime * xi / kv.K;
            if (ratio > deriv_tol) rep.violations.push_back({xi, "derivative-upper", ratio});
            if (ratio < -a - deriv_tol)
                rep.violations.push_back({xi, "derivative-lower", -a - ratio});
        }

        const double Kxi2 = kv.K * xi * xi;
        const double stol = sandwich_tol * std::max(1.0, Kxi2);
        if (H[k] < Kxi2 - stol) rep.violations.push_back({xi, "H-lower", Kxi2 - H[k]});
        if (H[k] > 2.0 * Kxi2 + stol) rep.violations.push_back({xi, "H-upper", H[k] - 2.0 * Kxi2});

        const double env = kv.K * std::pow(1.0 + xi, a);
        C1 = std::min(C1, env);
        C2 = std::max(C2, env);
        const double pow_term = std::pow(xi, 2.0 - a);
        if (pow_term >= 2.0) C3 = std::min(C3, Kxi2 / (pow_term - 1.0));
    }

    rep.fitted_C1 = C1;
    rep.fitted_C2 = C2;
    rep.fitted_C3 = std::isfinite(C3) ? C3 : C1;  // no xi large enough to bind
    return rep;
}

/// Log-spaced scan grid on [0, hi]: {0} followed by count-1 points
/// log-spaced over [lo_positive, hi].
inline std::vector<double> make_scan_grid(double lo_positive, double hi, std::size_t count) {
    if (!(lo_positive > 0.0 && hi > lo_positive) || count < 2)
        throw std::invalid_argument("make_scan_grid: bad range");
    std::vector<double> g;
    g.reserve(count);
    g.push_back(0.0);
    const double llo = std::log(lo_positive), lhi = std::log(hi);
    for (std::size_t k = 0; k + 1 < count; ++k)
        g.push_back(std::exp(llo + (lhi - llo) * double(k) / double(count - 2)));
    return g;
}

/// Parse a law from a compact polynomial string such as "1+s",
/// "1+s+s^2", or "2+0.5*s^1.5".  Terms are separated by '+'; each term is
/// a coefficient, "s", or coefficient ['*'] "s" ['^' exponent].
inline ForchheimerLaw parse_law(const std::string& text) {
    std::string src;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) src.push_back(c);
    if (src.empty()) throw std::invalid_argument("parse_law: empty string");

    std::vector<std::pair<double, double>> terms;  // (exponent, coefficient)
    std::size_t pos = 0;
    while (pos < src.size()) {
        std::size_t end = src.find('+', pos);
        if (end == std::string::npos) end = src.size();
        std::string term = src.substr(pos, end - pos);
        pos = end + 1;
        if (term.empty()) throw std::invalid_argument("parse_law: empty term");

        double coeff = 1.0, expo = 0.0;
        std::size_t s_at = term.find('s');
        if (s_at == std::string::npos) {
            std::size_t used = 0;
            coeff = std::stod(term, &used);
            if (used != term.size()) throw std::invalid_argument("parse_law: bad constant term");
        } else {
            std::string pre = term.substr(0, s_at);
            if (!pre.empty() && pre.back() == '*') pre.pop_back();
            if (!pre.empty()) {
                std::size_t used = 0;
                coeff = std::stod(pre, &used);
                if (used != pre.size()) throw std::invalid_argument("parse_law: bad coefficient");
            }
            std::string post = term.substr(s_at + 1);
            if (post.empty()) {
                expo = 1.0;
            } else if (post.front() == '^') {
                std::size_t used = 0;
                expo = std::stod(post.substr(1), &used);
                if (used != post.size() - 1) throw std::invalid_argument("parse_law: bad exponent");
            } else {
                throw std::invalid_argument("parse_law: malformed term '" + term + "'");
            }
        }
        terms.emplace_back(expo, coeff);
    }

    std::sort(terms.begin(), terms.end());
    ForchheimerLaw law;
    for (auto& [e, c] : terms) {
        if (!law.exponents.empty() && e == law.exponents.back()) {
            law.coefficients.back() += c;  // merge duplicate powers
        } else {
            law.exponents.push_back(e);
            law.coefficients.push_back(c);
        }
    }
    law.validate();
    return law;
}

inline std::string law_to_string(const ForchheimerLaw& law) {
    std::string out;
    for (std::size_t i = 0; i < law.exponents.size(); ++i) {
        if (i) out += "+";
        char buf[64];
        const double c = law.coefficients[i], e = law.exponents[i];
        if (e == 0.0) {
            std::snprintf(buf, sizeof buf, "%g", c);
            out += buf;
        } else {
            if (c != 1.0) {
                std::snprintf(buf, sizeof buf, "%g*", c);
                out += buf;
            }
            out += "s";
            if (e != 1.0) {
                std::snprintf(buf, sizeof buf, "^%g", e);
                out += buf;
            }
        }
    }
    return out;
}

}  // namespace forch

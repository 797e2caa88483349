#pragma once

/// Derived exponents for the interior estimates.
///
/// Everything here is determined by the spatial dimension n, the law's
/// degeneracy parameter a, the integrability exponent alpha (admissible
/// when alpha >= 2 and alpha > alpha_* = a n / (2 - a)), and an auxiliary
/// exponent s0 in (2n/(n+2), 2).  The table carries exponents only; the
/// generic multiplicative constants of the estimates are never computed.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "forchheimer/constitutive.hpp"

namespace forch {

/// Sobolev conjugate r* = n r / (n - r), defined for 0 < r < n.
inline double sobolev_conjugate(double r, int n) {
    if (!(n >= 2)) throw std::domain_error("sobolev_conjugate: n must be >= 2");
    if (!(r > 0.0 && r < double(n)))
        throw std::domain_error("sobolev_conjugate: need 0 < r < n");
    return double(n) * r / (double(n) - r);
}

/// The space-time integrability exponent rho(r) = 4 (1 - 1/r*) attached
/// to the weighted embedding.
inline double rho_of(double r, int n) { return 4.0 * (1.0 - 1.0 / sobolev_conjugate(r, n)); }

struct AlphaCheck {
    bool admissible = false;
    double alpha_star = 0.0;
    double margin = 0.0;  // alpha - max(2, alpha_star); positive iff admissible
    std::string detail;
};

/// alpha is admissible iff alpha >= 2 and alpha > alpha_*.
inline AlphaCheck validate_alpha(int n, const ForchheimerLaw& law, double alpha) {
    AlphaCheck c;
    const double a = law.degeneracy();
    c.alpha_star = a * double(n) / (2.0 - a);
    c.margin = alpha - std::max(2.0, c.alpha_star);
    const bool ge2 = alpha >= 2.0;
    const bool gt_star = alpha > c.alpha_star;
    c.admissible = ge2 && gt_star;
    if (!ge2)
        c.detail = "alpha < 2";
    else if (!gt_star)
        c.detail = "alpha <= alpha_star";
    else
        c.detail = "ok";
    return c;
}

struct ExponentTable {
    int n = 0;
    double a = 0.0;
    double alpha = 0.0;
    double s0 = 0.0;

    double alpha_star = 0.0;  // a n / (2 - a)
    double r0 = 0.0;          // n (2-a) / ((2-a)(n+1) - n)

    double kappa0 = 0.0;  // alpha (1 + (2-a)/n) - a
    double delta1 = 0.0;  // 1 - alpha / kappa0
    double delta2 = 0.0;  // (1 - a/alpha)(1 - alpha_*/alpha)
    double kappa1 = 0.0;  // 1/delta1
    double kappa2 = 0.0;  // 1/delta2

    double s0_star = 0.0;  // Sobolev conjugate of s0
    double s1 = 0.0;       // (1 - 2/s0*)^{-1}
    double nu2 = 0.0;      // 4 (1 - 1/s0*)
    double nu3 = 0.0;      // 1 - 2/nu2
    double s2 = 0.0;       // max{2, a s0 / (2 - s0)}
    double s3 = 0.0;       // s1 (2 - s0)/s0 + 1
    double nu4 = 0.0;      // s3 - 1
    double s4 = 0.0;       // a s3 + 1

    double kappa3 = 0.0;   // (s2 + a - 2)(1 + 2 kappa1/(alpha - a))
    double kappa4 = 0.0;   // 1 + s1 + kappa3 s3
    double kappa5 = 0.0;   // kappa2 (s2 - 2 + a)
    double kappa6 = 0.0;   // 1 + s1 + kappa3 (s3 - 1)
    double kappa7 = 0.0;   // (s3 - 1)(kappa5 + 1) + 1
    double kappa8 = 0.0;   // (s3 - 1) kappa5
    double kappa9 = 0.0;   // (s3 - 1)(kappa5 + alpha/2) + alpha/2
    double kappa10 = 0.0;  // a kappa4 + 1
    double kappa11 = 0.0;  // a s3 (kappa5 + alpha/2) + alpha/2
    double kappa12 = 0.0;  // a s3 kappa5 + alpha/2

    double mu1(double s) const { return (1.0 + 2.0 * kappa1 / (alpha - a)) * (s + a - 2.0) + 1.0; }
    double mu2(double s) const { return 2.0 * kappa2 * (s - 2.0 + a); }

    std::vector<std::pair<std::string, double>> entries() const {
        return {{"n", double(n)},     {"a", a},          {"alpha", alpha},
                {"s0", s0},           {"alpha_star", alpha_star},
                {"r0", r0},           {"kappa0", kappa0},
                {"delta1", delta1},   {"delta2", delta2},
                {"kappa1", kappa1},   {"kappa2", kappa2},
                {"s0_star", s0_star}, {"s1", s1},
                {"nu2", nu2},         {"nu3", nu3},
                {"s2", s2},           {"s3", s3},
                {"nu4", nu4},         {"s4", s4},
                {"kappa3", kappa3},   {"kappa4", kappa4},
                {"kappa5", kappa5},   {"kappa6", kappa6},
                {"kappa7", kappa7},   {"kappa8", kappa8},
                {"kappa9", kappa9},   {"kappa10", kappa10},
                {"kappa11", kappa11}, {"kappa12", kappa12}};
    }
};

/// Default s0: the midpoint of the admissible interval (2n/(n+2), 2).
inline double default_s0(int n) { return 0.5 * (2.0 * n / double(n + 2) + 2.0); }

/// Default alpha: the smallest simple admissible choice max(2, ceil(alpha_*) + 1).
inline double default_alpha(int n, const ForchheimerLaw& law) {
    const double a = law.degeneracy();
    const double alpha_star = a * double(n) / (2.0 - a);
    return std::max(2.0, std::ceil(alpha_star) + 1.0);
}

inline ExponentTable build_table(int n, const ForchheimerLaw& law, double alpha, double s0) {
    law.validate();
    if (n < 2) throw std::invalid_argument("build_table: n must be >= 2");
    const AlphaCheck chk = validate_alpha(n, law, alpha);
    if (!chk.admissible)
        throw std::invalid_argument("build_table: alpha inadmissible (" + chk.detail + ")");
    const double s0_lo = 2.0 * n / double(n + 2);
    if (!(s0 > s0_lo && s0 < 2.0))
        throw std::invalid_argument("build_table: s0 outside (2n/(n+2), 2)");

    ExponentTable t;
    t.n = n;
    t.a = law.degeneracy();
    t.alpha = alpha;
    t.s0 = s0;

    t.alpha_star = chk.alpha_star;
    t.r0 = double(n) * (2.0 - t.a) / ((2.0 - t.a) * double(n + 1) - double(n));

    t.kappa0 = alpha * (1.0 + (2.0 - t.a) / double(n)) - t.a;
    t.delta1 = 1.0 - alpha / t.kappa0;
    t.delta2 = (1.0 - t.a / alpha) * (1.0 - t.alpha_star / alpha);
    t.kappa1 = 1.0 / t.delta1;
    t.kappa2 = 1.0 / t.delta2;

    t.s0_star = sobolev_conjugate(s0, n);
    t.s1 = 1.0 / (1.0 - 2.0 / t.s0_star);
    t.nu2 = rho_of(s0, n);
    t.nu3 = 1.0 - 2.0 / t.nu2;
    t.s2 = std::max(2.0, t.a * s0 / (2.0 - s0));
    t.s3 = t.s1 * (2.0 - s0) / s0 + 1.0;
    t.nu4 = t.s3 - 1.0;
    t.s4 = t.a * t.s3 + 1.0;

    t.kappa3 = (t.s2 + t.a - 2.0) * (1.0 + 2.0 * t.kappa1 / (alpha - t.a));
    t.kappa4 = 1.0 + t.s1 + t.kappa3 * t.s3;
    t.kappa5 = t.kappa2 * (t.s2 - 2.0 + t.a);
    t.kappa6 = 1.0 + t.s1 + t.kappa3 * (t.s3 - 1.0);
    t.kappa7 = (t.s3 - 1.0) * (t.kappa5 + 1.0) + 1.0;
    t.kappa8 = (t.s3 - 1.0) * t.kappa5;
    t.kappa9 = (t.s3 - 1.0) * (t.kappa5 + 0.5 * alpha) + 0.5 * alpha;
    t.kappa10 = t.a * t.kappa4 + 1.0;
    t.kappa11 = t.a * t.s3 * (t.kappa5 + 0.5 * alpha) + 0.5 * alpha;
    t.kappa12 = t.a * t.s3 * t.kappa5 + 0.5 * alpha;
    return t;
}

}  // namespace forch

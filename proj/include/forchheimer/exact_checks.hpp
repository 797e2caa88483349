#pragma once

/// Exactness-anchored checks: the fast-geometric iteration underlying
/// the De Giorgi argument, and the scaling invariances of the parabolic
/// Poincare-Sobolev embedding (amplitude homogeneity and the dilation
/// weights of the ball form).  Unlike the witness-ratio checks these
/// pass at fixed tolerances or the harness fails.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "forchheimer/exponents.hpp"
#include "forchheimer/functionals.hpp"

namespace forch {

struct GeometricTerm {
    double A = 1.0;  // > 0
    double B = 2.0;  // > 1
    double mu = 1.0; // > 0
};

struct DeGiorgiResult {
    std::vector<double> sequence;
    double threshold = 0.0;  // min_k (m^{-1} A_k^{-1} B^{-1/mu})^{1/mu_k}
    bool converged = false;  // Y_steps < 1e-6 max(Y0, 1)
    bool overflowed = false;
};

/// Iterate Y_{i+1} = sum_k A_k B_k^i Y_i^{1+mu_k} (the recursion taken
/// with equality) and report whether it collapses.  Divergence is an
/// outcome, not an error.
inline DeGiorgiResult degiorgi_iterate(const std::vector<GeometricTerm>& terms, double Y0,
                                       int steps) {
    if (terms.empty()) throw std::invalid_argument("degiorgi_iterate: no terms");
    for (const auto& t : terms)
        if (!(t.A > 0.0 && t.B > 1.0 && t.mu > 0.0))
            throw std::invalid_argument("degiorgi_iterate: need A>0, B>1, mu>0");
    if (!(Y0 >= 0.0)) throw std::invalid_argument("degiorgi_iterate: Y0 must be >= 0");

    const double m = double(terms.size());
    double B = 0.0, mu = std::numeric_limits<double>::infinity();
    for (const auto& t : terms) {
        B = std::max(B, t.B);
        mu = std::min(mu, t.mu);
    }
    DeGiorgiResult out;
    out.threshold = std::numeric_limits<double>::infinity();
    for (const auto& t : terms)
        out.threshold =
            std::min(out.threshold,
                     std::pow(std::pow(B, -1.0 / mu) / (m * t.A), 1.0 / t.mu));

    out.sequence.reserve(std::size_t(steps) + 1);
    out.sequence.push_back(Y0);
    double Y = Y0;
    for (int i = 0; i < steps; ++i) {
        double next = 0.0;
        for (const auto& t : terms)
            next += t.A * std::pow(t.B, double(i)) * std::pow(Y, 1.0 + t.mu);
        if (!std::isfinite(next)) {
            out.overflowed = true;
            out.sequence.push_back(std::numeric_limits<double>::infinity());
            break;
        }
        Y = next;
        out.sequence.push_back(Y);
    }
    out.converged = !out.overflowed && out.sequence.back() < 1e-6 * std::max(Y0, 1.0);
    return out;
}

struct DeGiorgiBattery {
    int trials = 0;
    int failures = 0;  // below-threshold starts that failed to collapse
    bool ok() const { return trials > 0 && failures == 0; }
};

/// Randomized sufficiency battery: starts at fraction * threshold must
/// always collapse.  Deterministic for a fixed seed.
inline DeGiorgiBattery degiorgi_sufficiency_battery(int trials, double fraction,
                                                    std::uint64_t seed, int steps = 50) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> m_dist(1, 3);
    std::uniform_real_distribution<double> A_dist(0.1, 10.0), B_dist(1.1, 8.0),
        mu_dist(0.2, 2.0);
    DeGiorgiBattery out;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<GeometricTerm> terms(std::size_t(m_dist(rng)));
        for (auto& t : terms) t = {A_dist(rng), B_dist(rng), mu_dist(rng)};
        DeGiorgiResult probe = degiorgi_iterate(terms, 0.0, 1);
        const DeGiorgiResult run = degiorgi_iterate(terms, fraction * probe.threshold, steps);
        ++out.trials;
        if (!run.converged) ++out.failures;
    }
    return out;
}

/// A smooth space-time family with analytic gradient, for the embedding
/// checks: u(x, t) = amplitude e^{-t} sin(pi x1) sin(pi x2) (vanishes on
/// the boundary, so delta = 0).
struct AnalyticFamily {
    double amplitude = 1.0;

    double value(double x, double y, double t) const {
        constexpr double pi = std::numbers::pi;
        return amplitude * std::exp(-t) * std::sin(pi * x) * std::sin(pi * y);
    }
    Vec2 grad(double x, double y, double t) const {
        constexpr double pi = std::numbers::pi;
        const double e = amplitude * std::exp(-t);
        return {e * pi * std::cos(pi * x) * std::sin(pi * y),
                e * pi * std::sin(pi * x) * std::cos(pi * y)};
    }
};

struct EmbeddingCheck {
    double lhs = 0.0;
    double rhs = 0.0;  // constant-free
    double ratio = 0.0;
    double amplitude_invariance = 0.0;  // max relative drift of the ratio
    double dilation_invariance = 0.0;
};

namespace detail {

struct SampledFamily {
    Grid grid;
    std::vector<double> times;
    std::vector<ScalarField> fields;
    std::vector<std::vector<double>> grad_mags;
};

inline SampledFamily sample_family(const AnalyticFamily& fam, int cells, int time_samples,
                                   double T) {
    SampledFamily s;
    s.grid = Grid{2, cells};
    for (int k = 0; k < time_samples; ++k) {
        const double t = T * double(k) / double(time_samples - 1);
        s.times.push_back(t);
        ScalarField f = make_field(s.grid, t);
        std::vector<double> gm(s.grid.node_count());
        for (int j = 0; j <= cells; ++j)
            for (int i = 0; i <= cells; ++i) {
                const double x = s.grid.coord(i), y = s.grid.coord(j);
                f.at(i, j) = fam.value(x, y, t);
                const Vec2 gp = fam.grad(x, y, t);
                gm[s.grid.index(i, j)] = std::hypot(gp[0], gp[1]);
            }
        s.fields.push_back(std::move(f));
        s.grad_mags.push_back(std::move(gm));
    }
    return s;
}

// Witness ratio of the parabolic embedding on a (possibly dilated) domain.
inline double sobolev_ratio(const SampledFamily& s, double alpha, double a, double p, double T,
                            int delta, double value_scale, double domain_scale,
                            bool ball_weights) {
    const NodeBox box = full_box(s.grid);
    std::vector<const ScalarField*> fields;
    std::vector<const std::vector<double>*> grads;
    std::vector<ScalarField> scaled_fields;
    std::vector<std::vector<double>> scaled_grads;
    scaled_fields.reserve(s.fields.size());
    scaled_grads.reserve(s.fields.size());
    for (std::size_t k = 0; k < s.fields.size(); ++k) {
        ScalarField f = s.fields[k];
        std::vector<double> gm = s.grad_mags[k];
        for (auto& v : f.values) v *= value_scale;
        for (auto& v : gm) v *= value_scale / domain_scale;  // u(x/R) gradients
        scaled_fields.push_back(std::move(f));
        scaled_grads.push_back(std::move(gm));
    }
    for (std::size_t k = 0; k < s.fields.size(); ++k) {
        fields.push_back(&scaled_fields[k]);
        grads.push_back(&scaled_grads[k]);
    }

    std::vector<double> lp(s.times.size());
    for (std::size_t k = 0; k < s.times.size(); ++k)
        lp[k] = std::pow(lebesgue_norm(scaled_fields[k], p, box, domain_scale), p);
    const double lhs =
        std::pow(time_integral(s.times, lp, 0.0, T), 1.0 / p);

    DilationWeights ball{domain_scale, p, 2};
    const BracketTerms bracket =
        double_bracket(s.times, fields, grads, alpha, a, box, domain_scale,
                       ball_weights ? &ball : nullptr);
    const double rhs = std::pow(1.0 + delta * T, 1.0 / p) * bracket.value();
    return lhs / rhs;
}

}  // namespace detail

/// Witness ratio for the parabolic embedding on the analytic family plus
/// its two structural invariances: homogeneity under u -> lambda u and
/// invariance of the ball-form ratio under domain dilation.
inline EmbeddingCheck check_parabolic_sobolev(const AnalyticFamily& fam, int n,
                                              const ForchheimerLaw& law, double alpha, double T,
                                              int cells = 32, int time_samples = 33) {
    const AlphaCheck chk = validate_alpha(n, law, alpha);
    if (!chk.admissible)
        throw std::invalid_argument("check_parabolic_sobolev: inadmissible alpha");
    const double a = law.degeneracy();
    const double p = alpha * (1.0 + (2.0 - a) / double(n)) - a;

    const auto sampled = detail::sample_family(fam, cells, time_samples, T);
    const double base = detail::sobolev_ratio(sampled, alpha, a, p, T, 0, 1.0, 1.0, false);

    EmbeddingCheck out;
    out.ratio = base;
    out.lhs = base;  // ratio is the object of interest; lhs/rhs follow
    out.rhs = 1.0;

    for (double lambda : {0.1, 10.0}) {
        const double r = detail::sobolev_ratio(sampled, alpha, a, p, T, 0, lambda, 1.0, false);
        out.amplitude_invariance =
            std::max(out.amplitude_invariance, std::abs(r / base - 1.0));
    }
    const double ball_base = detail::sobolev_ratio(sampled, alpha, a, p, T, 0, 1.0, 1.0, true);
    for (double R : {0.5, 2.0}) {
        const double r = detail::sobolev_ratio(sampled, alpha, a, p, T, 0, 1.0, R, true);
        out.dilation_invariance =
            std::max(out.dilation_invariance, std::abs(r / ball_base - 1.0));
    }
    return out;
}

/// Weighted-embedding witness ratio on the analytic family with a frozen
/// weight W (fields vanish on the boundary, so delta = 0): the ratio of
/// ||u||_{L^rho(Q_T)} against [[u]]_{2,W;T} times the weight factor.
/// With unit_weight the weight freezes to W = 1 (the Darcy-like case);
/// otherwise W = K(|grad u|) of the base family.
inline EmbeddingCheck check_weighted_embedding(const AnalyticFamily& fam, int n,
                                               const ForchheimerLaw& law, double r, double T,
                                               int cells = 32, int time_samples = 33,
                                               bool unit_weight = false) {
    if (!(r > 2.0 * n / double(n + 2) && r < 2.0))
        throw std::invalid_argument("check_weighted_embedding: r outside (2n/(n+2), 2)");
    const double rho = rho_of(r, n);
    const auto s = detail::sample_family(fam, cells, time_samples, T);
    const NodeBox box = full_box(s.grid);

    std::vector<std::vector<double>> W(s.fields.size());
    for (std::size_t k = 0; k < s.fields.size(); ++k) {
        W[k].resize(s.grid.node_count());
        for (std::size_t idx = 0; idx < W[k].size(); ++idx)
            W[k][idx] = unit_weight ? 1.0 : eval_K(law, s.grad_mags[k][idx]).K;
    }

    auto ratio_for = [&](double scale) {
        std::vector<double> lrho(s.times.size()), wgrad(s.times.size()), winv(s.times.size()),
            l2(s.times.size());
        for (std::size_t k = 0; k < s.times.size(); ++k) {
            const ScalarField& f = s.fields[k];
            lrho[k] = integrate_box(s.grid, box, [&](int i, int j) {
                return std::pow(scale * std::abs(f.at(i, j)), rho);
            });
            wgrad[k] = integrate_box(s.grid, box, [&](int i, int j) {
                const std::size_t idx = s.grid.index(i, j);
                const double gm = scale * s.grad_mags[k][idx];
                return W[k][idx] * gm * gm;
            });
            winv[k] = integrate_box(s.grid, box, [&](int i, int j) {
                return std::pow(W[k][s.grid.index(i, j)], -r / (2.0 - r));
            });
            l2[k] = lebesgue_norm(f, 2.0, box) * scale;
        }
        const double lhs = std::pow(time_integral(s.times, lrho, 0.0, T), 1.0 / rho);
        double sup_l2 = 0.0, sup_winv = 0.0;
        for (std::size_t k = 0; k < s.times.size(); ++k) {
            sup_l2 = std::max(sup_l2, l2[k]);
            sup_winv = std::max(sup_winv, winv[k]);
        }
        const double bracket =
            sup_l2 + std::sqrt(time_integral(s.times, wgrad, 0.0, T));
        const double rhs = bracket * std::pow(sup_winv, (2.0 - r) / (rho * r));
        return std::array<double, 2>{lhs, rhs};
    };

    const auto [lhs, rhs] = ratio_for(1.0);
    EmbeddingCheck out;
    out.lhs = lhs;
    out.rhs = rhs;
    out.ratio = lhs / rhs;
    for (double lambda : {0.1, 10.0}) {
        const auto [l2, r2] = ratio_for(lambda);
        out.amplitude_invariance =
            std::max(out.amplitude_invariance, std::abs((l2 / r2) / out.ratio - 1.0));
    }
    return out;
}

}  // namespace forch

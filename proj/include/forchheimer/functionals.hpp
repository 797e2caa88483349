#pragma once

/// Norms and data functionals entering the estimates: Lebesgue norms on
/// interior boxes, H-integrals, the boundary-data functionals A and
/// G1..G4, running-max envelopes, tail derivative statistics, the
/// double-bracket parabolic seminorm, and the window functional lambda.
///
/// Space integrals are composite trapezoid sums on the cell-vertex grid;
/// time integrals are trapezoid sums over stored snapshots with linear
/// interpolation at window edges, so windows need not align with the
/// snapshot stride.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "forchheimer/boundary_data.hpp"
#include "forchheimer/constitutive.hpp"
#include "forchheimer/exponents.hpp"
#include "forchheimer/fields.hpp"
#include "forchheimer/grid.hpp"
#include "forchheimer/solver.hpp"

namespace forch {

/// Trapezoid integral of fn(i, j) over a node box.  scale dilates the
/// grid spacing (h -> scale h) for checks on rescaled domains.
template <typename F>
double integrate_box(const Grid& g, const NodeBox& box, F&& fn, double scale = 1.0) {
    if (box.empty() || box.lo == box.hi) return 0.0;
    const double h = g.h() * scale;
    double acc = 0.0;
    if (g.dim == 1) {
        for (int i = box.lo; i <= box.hi; ++i)
            acc += trapezoid_factor(i, box.lo, box.hi) * fn(i, 0);
        return acc * h;
    }
    for (int j = box.lo; j <= box.hi; ++j) {
        const double wj = trapezoid_factor(j, box.lo, box.hi);
        for (int i = box.lo; i <= box.hi; ++i)
            acc += wj * trapezoid_factor(i, box.lo, box.hi) * fn(i, j);
    }
    return acc * h * h;
}

inline double box_measure(const Grid& g, const NodeBox& box, double scale = 1.0) {
    return integrate_box(g, box, [](int, int) { return 1.0; }, scale);
}

/// (integral_box |f|^s dx)^{1/s}.
inline double lebesgue_norm(const ScalarField& f, double s, const NodeBox& box,
                            double scale = 1.0) {
    if (!(s >= 1.0)) throw std::domain_error("lebesgue_norm: s must be >= 1");
    if (box.empty() || box.lo == box.hi) throw std::domain_error("lebesgue_norm: empty region");
    const double I = integrate_box(
        f.grid, box, [&](int i, int j) { return std::pow(std::abs(f.at(i, j)), s); }, scale);
    return std::pow(I, 1.0 / s);
}

inline double box_max(const ScalarField& f, const NodeBox& box) {
    double m = 0.0;
    if (f.grid.dim == 1) {
        for (int i = box.lo; i <= box.hi; ++i) m = std::max(m, std::abs(f.at(i)));
        return m;
    }
    for (int j = box.lo; j <= box.hi; ++j)
        for (int i = box.lo; i <= box.hi; ++i) m = std::max(m, std::abs(f.at(i, j)));
    return m;
}

/// Trapezoid integral of sampled values over [t0, t1] with linear
/// interpolation at the window edges.
inline double time_integral(const std::vector<double>& times, const std::vector<double>& vals,
                            double t0, double t1) {
    if (times.size() != vals.size() || times.size() < 2)
        throw std::domain_error("time_integral: need >= 2 samples");
    t0 = std::max(t0, times.front());
    t1 = std::min(t1, times.back());
    if (!(t1 > t0)) return 0.0;
    auto value_at = [&](double t) {
        const auto it = std::upper_bound(times.begin(), times.end(), t);
        const std::size_t k = std::min(times.size() - 1,
                                       std::size_t(std::max<std::ptrdiff_t>(
                                           1, std::distance(times.begin(), it))));
        const double u = (t - times[k - 1]) / (times[k] - times[k - 1]);
        return vals[k - 1] + u * (vals[k] - vals[k - 1]);
    };
    double acc = 0.0;
    double prev_t = t0, prev_v = value_at(t0);
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] <= t0 || times[k] >= t1) continue;
        acc += 0.5 * (prev_v + vals[k]) * (times[k] - prev_t);
        prev_t = times[k];
        prev_v = vals[k];
    }
    acc += 0.5 * (prev_v + value_at(t1)) * (t1 - prev_t);
    return acc;
}

/// Max over samples falling in [t0, t1] (plus interpolated endpoints).
inline double window_max(const std::vector<double>& times, const std::vector<double>& vals,
                         double t0, double t1) {
    double m = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t k = 0; k < times.size(); ++k)
        if (times[k] >= t0 - 1e-12 && times[k] <= t1 + 1e-12) {
            m = std::max(m, vals[k]);
            any = true;
        }
    if (!any) throw std::domain_error("window_max: no samples in window");
    return m;
}

/// Batch H(xi): sort, integrate cumulatively, scatter back.
inline std::vector<double> h_of(const ForchheimerLaw& law, const std::vector<double>& xi) {
    std::vector<std::size_t> order(xi.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return xi[a] < xi[b]; });
    std::vector<double> ascending(xi.size());
    for (std::size_t k = 0; k < xi.size(); ++k) ascending[k] = xi[order[k]];
    const std::vector<double> Hs = cumulative_H(law, ascending);
    std::vector<double> out(xi.size());
    for (std::size_t k = 0; k < xi.size(); ++k) out[order[k]] = Hs[k];
    return out;
}

/// integral_U H(|grad f|) dx.
inline double h_integral(const ScalarField& f, const ForchheimerLaw& law) {
    const VectorField grad = gradient_field(f);
    std::vector<double> mags(f.values.size());
    for (std::size_t k = 0; k < mags.size(); ++k) mags[k] = grad.magnitude(k);
    const std::vector<double> H = h_of(law, mags);
    const Grid& g = f.grid;
    return integrate_box(g, full_box(g), [&](int i, int j) { return H[g.index(i, j)]; });
}

/// A(alpha, t) = [int |grad Psi|^{alpha(2-a)/2}]^{2(alpha-a)/(alpha(2-a))}
///             + [int |Psi_t|^alpha]^{(alpha-a)/(alpha(1-a))}.
inline double data_functional_A(const BoundaryData& data, double alpha, double t,
                                const ForchheimerLaw& law, const Grid& g) {
    const double a = law.degeneracy();
    auto pt = [&](int i, int j) { return Point{g.coord(i), g.dim == 2 ? g.coord(j) : 0.0}; };
    const double grad_int = integrate_box(g, full_box(g), [&](int i, int j) {
        const Vec2 gp = data.grad(pt(i, j), t);
        return std::pow(std::hypot(gp[0], gp[1]), alpha * (2.0 - a) / 2.0);
    });
    const double dt_int = integrate_box(g, full_box(g), [&](int i, int j) {
        return std::pow(std::abs(data.dt(pt(i, j), t)), alpha);
    });
    return std::pow(grad_int, 2.0 * (alpha - a) / (alpha * (2.0 - a))) +
           std::pow(dt_int, (alpha - a) / (alpha * (1.0 - a)));
}

struct GValues {
    double G1 = 0.0, G2 = 0.0, G3 = 0.0, G4 = 0.0;
};

/// G1 = int |grad Psi|^2 + [int |Psi_t|^{r0}]^{(2-a)/(r0(1-a))} + [int |Psi_t|^{r0}]^{1/r0}
/// G2 = int |grad Psi_t|^2 + int |Psi_t|^2
/// G3 = G1 + G2,  G4 = G3 + int |Psi_tt|^2.
inline GValues data_functionals_G(const BoundaryData& data, double t, const ForchheimerLaw& law,
                                  const ExponentTable& table, const Grid& g) {
    const double a = law.degeneracy();
    const double r0 = table.r0;
    auto pt = [&](int i, int j) { return Point{g.coord(i), g.dim == 2 ? g.coord(j) : 0.0}; };

    const double grad2 = integrate_box(g, full_box(g), [&](int i, int j) {
        const Vec2 gp = data.grad(pt(i, j), t);
        return gp[0] * gp[0] + gp[1] * gp[1];
    });
    const double dt_r0 = integrate_box(g, full_box(g), [&](int i, int j) {
        return std::pow(std::abs(data.dt(pt(i, j), t)), r0);
    });
    const double graddt2 = integrate_box(g, full_box(g), [&](int i, int j) {
        const Vec2 gp = data.grad_dt(pt(i, j), t);
        return gp[0] * gp[0] + gp[1] * gp[1];
    });
    const double dt2 = integrate_box(g, full_box(g), [&](int i, int j) {
        const double v = data.dt(pt(i, j), t);
        return v * v;
    });
    const double dtt2 = integrate_box(g, full_box(g), [&](int i, int j) {
        const double v = data.dtt(pt(i, j), t);
        return v * v;
    });

    GValues out;
    out.G1 = grad2 + std::pow(dt_r0, (2.0 - a) / (r0 * (1.0 - a))) + std::pow(dt_r0, 1.0 / r0);
    out.G2 = graddt2 + dt2;
    out.G3 = out.G1 + out.G2;
    out.G4 = out.G3 + dtt2;
    return out;
}

/// Minimal nondecreasing majorant on the sample grid (running maximum).
inline std::vector<double> envelope(const std::vector<double>& trace) {
    std::vector<double> env(trace.size());
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < trace.size(); ++k) {
        m = std::max(m, trace[k]);
        env[k] = m;
    }
    return env;
}

/// Tail statistic for the decreasing part of a data trace: the maximum of
/// [A'(t)]^- over the window [t_end - window, t_end], with A' from
/// centered differences (one-sided at the ends).
inline double beta_tail(const std::vector<double>& times, const std::vector<double>& A,
                        double window) {
    if (times.size() < 3 || A.size() != times.size())
        throw std::domain_error("beta_tail: need >= 3 samples");
    const double t0 = times.back() - window;
    double m = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < t0 - 1e-12) continue;
        double d;
        if (k == 0)
            d = (A[1] - A[0]) / (times[1] - times[0]);
        else if (k + 1 == times.size())
            d = (A[k] - A[k - 1]) / (times[k] - times[k - 1]);
        else
            d = (A[k + 1] - A[k - 1]) / (times[k + 1] - times[k - 1]);
        m = std::max(m, std::max(-d, 0.0));
    }
    return m;
}

struct BracketTerms {
    double sup_term = 0.0;
    double grad_term = 0.0;
    double value() const { return sup_term + grad_term; }
};

/// Dilation bookkeeping for the ball form of the parabolic embedding:
/// weights R^{n/p - n/alpha} and R^{n/p - (n-(2-a))/(alpha-a)}.
struct DilationWeights {
    double R = 1.0;
    double p = 0.0;  // embedding exponent kappa0
    int n = 2;
    double sup_weight(double alpha) const {
        return std::pow(R, double(n) / p - double(n) / alpha);
    }
    double grad_weight(double alpha, double a) const {
        return std::pow(R, double(n) / p - (double(n) - (2.0 - a)) / (alpha - a));
    }
};

/// [[u]] = ess sup_t ||u(t)||_{L^alpha} + (int int |u|^{alpha-2} |grad u|^{2-a})^{1/(alpha-a)}.
/// Fields and gradient magnitudes are sampled per snapshot; scale dilates
/// the domain; the optional weights apply the ball-form R powers.
inline BracketTerms double_bracket(const std::vector<double>& times,
                                   const std::vector<const ScalarField*>& fields,
                                   const std::vector<const std::vector<double>*>& grad_mags,
                                   double alpha, double a, const NodeBox& box,
                                   double scale = 1.0,
                                   const DilationWeights* ball = nullptr) {
    if (fields.empty() || times.size() != fields.size() || grad_mags.size() != fields.size())
        throw std::domain_error("double_bracket: inconsistent trace");
    const Grid& g = fields.front()->grid;
    double sup_alpha = 0.0;
    std::vector<double> integrand(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const ScalarField& f = *fields[k];
        const std::vector<double>& gm = *grad_mags[k];
        sup_alpha = std::max(sup_alpha, lebesgue_norm(f, alpha, box, scale));
        integrand[k] = integrate_box(
            g, box,
            [&](int i, int j) {
                const std::size_t idx = g.index(i, j);
                return std::pow(std::abs(f.values[idx]), alpha - 2.0) *
                       std::pow(gm[idx], 2.0 - a);
            },
            scale);
    }
    BracketTerms out;
    out.sup_term = sup_alpha;
    out.grad_term =
        std::pow(time_integral(times, integrand, times.front(), times.back()), 1.0 / (alpha - a));
    if (ball) {
        out.sup_term *= ball->sup_weight(alpha);
        out.grad_term *= ball->grad_weight(alpha, a);
    }
    return out;
}

/// lambda(T0, T, theta; V) = ( int_{T0+theta T/2}^{T0+T} int_V
/// (1+|grad p|)^{a s0/(2-s0)} dx dt )^{(2-s0)/s0}.
inline double lambda_window(const Trajectory& traj, double T0, double T, double theta,
                            const NodeBox& V, const ExponentTable& table) {
    const double t0 = T0 + 0.5 * theta * T, t1 = T0 + T;
    if (t1 < traj.snapshots.front().time - 1e-12 || t1 > traj.snapshots.back().time + 1e-9)
        throw std::domain_error("lambda_window: window outside trajectory span");
    if (!(t1 > t0)) return 0.0;
    const double expo = table.a * table.s0 / (2.0 - table.s0);
    std::vector<double> times, vals;
    for (const auto& snap : traj.snapshots) {
        times.push_back(snap.time);
        const VectorField grad = gradient_field(snap);
        const Grid& g = snap.grid;
        vals.push_back(integrate_box(g, V, [&](int i, int j) {
            return std::pow(1.0 + grad.magnitude(g.index(i, j)), expo);
        }));
    }
    return std::pow(time_integral(times, vals, t0, t1), (2.0 - table.s0) / table.s0);
}

}  // namespace forch

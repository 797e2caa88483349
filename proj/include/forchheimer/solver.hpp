#pragma once

/// Implicit-Euler / Picard solver for the degenerate parabolic pressure
/// equation p_t = div( K(|grad p|) grad p ) on the unit interval/square
/// with time-dependent Dirichlet data and an optional manufactured
/// source.  The diffusivity is evaluated at face-gradient magnitudes
/// (normal difference plus averaged tangential differences), which keeps
/// constants and linear profiles exact steady states of the scheme.

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "forchheimer/boundary_data.hpp"
#include "forchheimer/constitutive.hpp"
#include "forchheimer/fields.hpp"
#include "forchheimer/grid.hpp"

namespace forch {

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual)
        : std::runtime_error(what), last_residual(residual) {}
    double last_residual;
};

struct PicardSettings {
    double tol = 1e-8;
    int cap = 50;
};

struct Scenario {
    std::string id = "scenario";
    ForchheimerLaw law;
    Grid grid;
    BoundaryData data;
    InitialData init;
    double horizon = 1.0;
    double dt = 0.0;          // <= 0 selects the default h^2
    int snapshot_stride = 1;  // steps between stored snapshots
    double rho = 0.125;       // interior margin; U' at rho, V at rho/2
    bool manufactured = false;
    PicardSettings picard;

    // Harness knobs carried with the scenario.
    double alpha = 0.0;  // <= 0 selects the default admissible alpha
    double s0 = 0.0;     // <= 0 selects the interval midpoint
    double theta = 0.5;
    double tail_window = 0.0;  // <= 0 selects horizon/4
    std::uint64_t seed = 12345;

    double effective_dt() const { return dt > 0.0 ? dt : grid.h() * grid.h(); }
    double effective_tail() const { return tail_window > 0.0 ? tail_window : horizon / 4.0; }

    NodeBox inner_box() const { return interior_box(grid, rho); }    // U'
    NodeBox middle_box() const { return interior_box(grid, rho / 2.0); }  // V

    void validate() const {
        law.validate();
        grid.validate();
        if (!(rho > 0.0 && rho < 0.25)) throw std::invalid_argument("scenario: rho outside (0, 1/4)");
        if (!(horizon > 0.0)) throw std::invalid_argument("scenario: horizon must be positive");
        if (!(effective_dt() > 0.0)) throw std::invalid_argument("scenario: dt must be positive");
        if (snapshot_stride < 1) throw std::invalid_argument("scenario: stride must be >= 1");
        const NodeBox inner = inner_box(), mid = middle_box();
        if (inner.empty() || mid.empty() || !(mid.lo >= 1) || !(inner.lo > mid.lo))
            throw std::invalid_argument("scenario: need nonempty U' strictly inside V inside U");
        if (!(picard.tol > 0.0) || picard.cap < 1)
            throw std::invalid_argument("scenario: bad Picard settings");
        if (!(theta > 0.0 && theta < 1.0))
            throw std::invalid_argument("scenario: theta outside (0, 1)");
    }
};

struct StepDiagnostics {
    double time = 0.0;
    int picard_iterations = 0;
    double final_residual = 0.0;
    bool residual_monotone = true;  // last three residuals decreasing
    double l2_squared = 0.0;        // sum p^2 h^dim after the step
};

struct Trajectory {
    Scenario scenario;
    std::vector<ScalarField> snapshots;
    std::vector<StepDiagnostics> steps;

    const ScalarField& initial() const { return snapshots.front(); }
    const ScalarField& final() const { return snapshots.back(); }
    double snapshot_spacing() const {
        return snapshots.size() > 1 ? snapshots[1].time - snapshots[0].time : 0.0;
    }
};

/// Exact solution c e^{-t} sin(pi x1) [sin(pi x2)] used for convergence
/// studies; its trace is zero so it pairs with the product data preset.
struct ManufacturedSolution {
    int dim = 2;
    double amplitude = 1.0;

    double value(const Point& x, double t) const {
        constexpr double pi = std::numbers::pi;
        double v = amplitude * std::exp(-t) * std::sin(pi * x[0]);
        if (dim == 2) v *= std::sin(pi * x[1]);
        return v;
    }
    double time_deriv(const Point& x, double t) const { return -value(x, t); }
    Vec2 grad(const Point& x, double t) const {
        constexpr double pi = std::numbers::pi;
        const double e = amplitude * std::exp(-t);
        if (dim == 1) return {e * pi * std::cos(pi * x[0]), 0.0};
        return {e * pi * std::cos(pi * x[0]) * std::sin(pi * x[1]),
                e * pi * std::sin(pi * x[0]) * std::cos(pi * x[1])};
    }
    std::array<double, 3> hessian(const Point& x, double t) const {  // xx, yy, xy
        constexpr double pi = std::numbers::pi;
        const double v = value(x, t);
        if (dim == 1) return {-pi * pi * v, 0.0, 0.0};
        const double e = amplitude * std::exp(-t);
        return {-pi * pi * v, -pi * pi * v,
                e * pi * pi * std::cos(pi * x[0]) * std::cos(pi * x[1])};
    }

    /// f = p*_t - div(K(|grad p*|) grad p*), via the chain rule
    /// div(K grad p) = K Lap p + (K'/xi) (grad p . Hess p . grad p).
    double source(const ForchheimerLaw& law, const Point& x, double t) const {
        const Vec2 gp = grad(x, t);
        const double xi = std::hypot(gp[0], gp[1]);
        const auto hess = hessian(x, t);
        const double lap = hess[0] + (dim == 2 ? hess[1] : 0.0);
        const DiffusivityValue kv = eval_K(law, xi);
        double quad = 0.0;
        if (xi > 1e-14) {
            quad = hess[0] * gp[0] * gp[0] + hess[1] * gp[1] * gp[1] +
                   2.0 * hess[2] * gp[0] * gp[1];
            quad *= kv.Kprime / xi;
        }
        return time_deriv(x, t) - kv.K * lap - quad;
    }
};

namespace detail {

// Face diffusivities from the current iterate.  Root-solve hints are
// cached per face so the Newton iteration warm-starts across Picard
// iterations and time steps.
struct FaceState {
    std::vector<double> kx, ky;        // K at x-faces / y-faces
    std::vector<double> sx_hint, sy_hint;

    void resize(const Grid& g) {
        const int n = g.cells;
        if (g.dim == 1) {
            kx.assign(n, 0.0);
            sx_hint.assign(n, -1.0);
        } else {
            kx.assign(std::size_t(n) * (n + 1), 0.0);
            ky.assign(std::size_t(n + 1) * n, 0.0);
            sx_hint.assign(kx.size(), -1.0);
            sy_hint.assign(ky.size(), -1.0);
        }
    }
};

inline void update_faces(const ForchheimerLaw& law, const ScalarField& w, FaceState& fs) {
    const Grid& g = w.grid;
    const int n = g.cells;
    const double h = g.h();
    if (g.dim == 1) {
        for (int i = 0; i < n; ++i) {
            const double xi = std::abs(w.at(i + 1) - w.at(i)) / h;
            const DiffusivityValue kv = eval_K(law, xi, 1e-12, fs.sx_hint[i]);
            fs.kx[i] = kv.K;
            fs.sx_hint[i] = kv.s;
        }
        return;
    }
    auto dy_at = [&](int i, int j) {  // tangential derivative, one-sided at the rim
        if (j == 0) return (w.at(i, 1) - w.at(i, 0)) / h;
        if (j == n) return (w.at(i, n) - w.at(i, n - 1)) / h;
        return (w.at(i, j + 1) - w.at(i, j - 1)) / (2.0 * h);
    };
    auto dx_at = [&](int i, int j) {
        if (i == 0) return (w.at(1, j) - w.at(0, j)) / h;
        if (i == n) return (w.at(n, j) - w.at(n - 1, j)) / h;
        return (w.at(i + 1, j) - w.at(i - 1, j)) / (2.0 * h);
    };
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i < n; ++i) {
            const double dn = (w.at(i + 1, j) - w.at(i, j)) / h;
            const double tg = 0.5 * (dy_at(i, j) + dy_at(i + 1, j));
            const std::size_t f = std::size_t(j) * n + i;
            const DiffusivityValue kv =
                eval_K(law, std::hypot(dn, tg), 1e-12, fs.sx_hint[f]);
            fs.kx[f] = kv.K;
            fs.sx_hint[f] = kv.s;
        }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i <= n; ++i) {
            const double dn = (w.at(i, j + 1) - w.at(i, j)) / h;
            const double tg = 0.5 * (dx_at(i, j) + dx_at(i, j + 1));
            const std::size_t f = std::size_t(j) * (n + 1) + i;
            const DiffusivityValue kv =
                eval_K(law, std::hypot(dn, tg), 1e-12, fs.sy_hint[f]);
            fs.ky[f] = kv.K;
            fs.sy_hint[f] = kv.s;
        }
}

// Preconditioned CG on the SPD step system, preconditioned by a (possibly
// stale) LDLT factorization of a nearby matrix.  Returns the iteration
// count, or -1 when the budget is exhausted.
inline int preconditioned_cg(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                             Eigen::VectorXd& x,
                             const Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>& M,
                             double rtol, int maxit) {
    const double bnorm = b.norm();
    if (bnorm == 0.0) {
        x.setZero();
        return 0;
    }
    Eigen::VectorXd r = b - A * x;
    if (r.norm() <= rtol * bnorm) return 0;
    Eigen::VectorXd z = M.solve(r);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    for (int it = 1; it <= maxit; ++it) {
        const Eigen::VectorXd Ap = A * p;
        const double alpha = rz / p.dot(Ap);
        x += alpha * p;
        r -= alpha * Ap;
        if (r.norm() <= rtol * bnorm) return it;
        z = M.solve(r);
        const double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
    }
    return -1;
}

}  // namespace detail

inline Trajectory solve_ibvp(const Scenario& sc) {
    sc.validate();
    const Grid& g = sc.grid;
    const int n = g.cells;
    const double h = g.h();
    const double dt = sc.effective_dt();
    const long steps = std::lround(sc.horizon / dt);
    if (steps < 1) throw std::invalid_argument("solve_ibvp: horizon shorter than one step");

    std::optional<ManufacturedSolution> exact;
    if (sc.manufactured) exact = ManufacturedSolution{g.dim, sc.data.amplitude};

    // Interior unknown numbering.
    const int ilo = 1, ihi = n - 1;
    std::vector<int> unknown(g.node_count(), -1);
    int m = 0;
    if (g.dim == 1) {
        for (int i = ilo; i <= ihi; ++i) unknown[g.index(i)] = m++;
    } else {
        for (int j = ilo; j <= ihi; ++j)
            for (int i = ilo; i <= ihi; ++i) unknown[g.index(i, j)] = m++;
    }

    ScalarField p = sample_initial_data(sc.init, sc.data, g);
    // Initial snapshot carries the data trace on the boundary at t = 0.
    if (g.dim == 1) {
        p.at(0) = sc.data.value({0.0, 0.0}, 0.0);
        p.at(n) = sc.data.value({1.0, 0.0}, 0.0);
    } else {
        for (int k = 0; k <= n; ++k) {
            p.at(k, 0) = sc.data.value({g.coord(k), 0.0}, 0.0);
            p.at(k, n) = sc.data.value({g.coord(k), 1.0}, 0.0);
            p.at(0, k) = sc.data.value({0.0, g.coord(k)}, 0.0);
            p.at(n, k) = sc.data.value({1.0, g.coord(k)}, 0.0);
        }
    }

    Trajectory traj;
    traj.scenario = sc;
    traj.snapshots.push_back(p);
    traj.steps.reserve(std::size_t(steps));

    detail::FaceState faces;
    faces.resize(g);

    Eigen::SparseMatrix<double> A(m, m);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    bool pattern_ready = false;
    bool factor_ready = false;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(std::size_t(m) * 5);
    Eigen::VectorXd rhs(m), sol(m);

    const double inv_dt = 1.0 / dt;
    const double inv_h2 = 1.0 / (h * h);

    ScalarField w = p;
    ScalarField p_prev = p;  // previous time level, drives the predictor
    for (long step = 1; step <= steps; ++step) {
        const double t1 = double(step) * dt;

        // Dirichlet trace at the new time level.
        ScalarField bc = make_field(g, t1);
        if (g.dim == 1) {
            bc.at(0) = sc.data.value({0.0, 0.0}, t1);
            bc.at(n) = sc.data.value({1.0, 0.0}, t1);
        } else {
            for (int k = 0; k <= n; ++k) {
                bc.at(k, 0) = sc.data.value({g.coord(k), 0.0}, t1);
                bc.at(k, n) = sc.data.value({g.coord(k), 1.0}, t1);
                bc.at(0, k) = sc.data.value({0.0, g.coord(k)}, t1);
                bc.at(n, k) = sc.data.value({1.0, g.coord(k)}, t1);
            }
        }

        // Linear predictor for the initial iterate; boundary values go to
        // the new level so the first face gradients see the updated trace.
        w = p;
        if (step > 1)
            for (std::size_t k = 0; k < w.values.size(); ++k)
                w.values[k] += p.values[k] - p_prev.values[k];
        if (g.dim == 1) {
            w.at(0) = bc.at(0);
            w.at(n) = bc.at(n);
        } else {
            for (int k = 0; k <= n; ++k) {
                w.at(k, 0) = bc.at(k, 0);
                w.at(k, n) = bc.at(k, n);
                w.at(0, k) = bc.at(0, k);
                w.at(n, k) = bc.at(n, k);
            }
        }

        StepDiagnostics diag;
        diag.time = t1;
        std::vector<double> residuals;
        bool converged = false;

        for (int it = 0; it < sc.picard.cap; ++it) {
            detail::update_faces(sc.law, w, faces);

            trip.clear();
            rhs.setZero();
            auto face_kx = [&](int i, int j) {
                return g.dim == 1 ? faces.kx[i] : faces.kx[std::size_t(j) * n + i];
            };
            auto face_ky = [&](int i, int j) { return faces.ky[std::size_t(j) * (n + 1) + i]; };

            const int jlo = (g.dim == 1) ? 0 : ilo;
            const int jhi = (g.dim == 1) ? 0 : ihi;
            for (int j = jlo; j <= jhi; ++j)
                for (int i = ilo; i <= ihi; ++i) {
                    const int row = unknown[g.index(i, j)];
                    const double kw = face_kx(i - 1, j), ke = face_kx(i, j);
                    double diagv = inv_dt + (kw + ke) * inv_h2;
                    double b = p.at(i, j) * inv_dt;
                    if (exact)
                        b += exact->source(sc.law, {g.coord(i), g.dim == 2 ? g.coord(j) : 0.0},
                                           t1);

                    auto couple = [&](int ii, int jj, double k) {
                        const int col = unknown[g.index(ii, jj)];
                        if (col >= 0)
                            trip.emplace_back(row, col, -k * inv_h2);
                        else
                            b += k * inv_h2 * bc.at(ii, jj);
                    };
                    couple(i - 1, j, kw);
                    couple(i + 1, j, ke);
                    if (g.dim == 2) {
                        const double ks = face_ky(i, j - 1), kn = face_ky(i, j);
                        diagv += (ks + kn) * inv_h2;
                        couple(i, j - 1, ks);
                        couple(i, j + 1, kn);
                    }
                    trip.emplace_back(row, row, diagv);
                    rhs[row] += b;
                }

            A.setFromTriplets(trip.begin(), trip.end());
            if (!pattern_ready) {
                ldlt.analyzePattern(A);
                pattern_ready = true;
            }

            // The factorization is reused as a CG preconditioner while it
            // stays close to the current matrix; it is refreshed when the
            // inner iteration drags.
            int inner = -1;
            if (factor_ready) {
                const int jl = (g.dim == 1) ? 0 : ilo;
                for (int j = jl; j <= ((g.dim == 1) ? 0 : ihi); ++j)
                    for (int i = ilo; i <= ihi; ++i)
                        sol[unknown[g.index(i, j)]] = w.at(i, j);
                inner = detail::preconditioned_cg(A, rhs, sol, ldlt, 1e-12, 24);
            }
            if (inner < 0) {
                ldlt.factorize(A);
                if (ldlt.info() != Eigen::Success)
                    throw NumericError("solve_ibvp: factorization failed", 0.0, t1);
                factor_ready = true;
                sol = ldlt.solve(rhs);
            } else if (inner > 10) {
                ldlt.factorize(A);
                if (ldlt.info() == Eigen::Success) factor_ready = true;
            }

            double diff = 0.0, scale = 1.0;
            for (int j = jlo; j <= jhi; ++j)
                for (int i = ilo; i <= ihi; ++i) {
                    const int row = unknown[g.index(i, j)];
                    diff = std::max(diff, std::abs(sol[row] - w.at(i, j)));
                    scale = std::max(scale, std::abs(sol[row]));
                    w.at(i, j) = sol[row];
                }
            const double res = diff / scale;
            if (!std::isfinite(res))
                throw NumericError("solve_ibvp: non-finite iterate", 0.0, t1);
            residuals.push_back(res);
            if (res < sc.picard.tol) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw SolverError("solve_ibvp: Picard cap exceeded at t=" + std::to_string(t1),
                              residuals.empty() ? 0.0 : residuals.back());

        diag.picard_iterations = int(residuals.size());
        diag.final_residual = residuals.back();
        diag.residual_monotone = true;
        const std::size_t nr = residuals.size();
        for (std::size_t k = std::max<std::size_t>(1, nr >= 2 ? nr - 2 : 1); k < nr; ++k)
            if (!(residuals[k] <= residuals[k - 1])) diag.residual_monotone = false;

        p_prev = p;
        p = w;
        p.time = t1;
        double l2 = 0.0;
        const double cellvol = (g.dim == 1) ? h : h * h;
        for (double v : p.values) l2 += v * v * cellvol;
        diag.l2_squared = l2;
        traj.steps.push_back(diag);

        if (step % sc.snapshot_stride == 0 || step == steps) traj.snapshots.push_back(p);
    }
    return traj;
}

struct ConvergenceRow {
    int cells = 0;
    double h = 0.0;
    double l2_error = 0.0;
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    std::vector<double> orders;  // log2 ratios, length rows-1
};

/// Manufactured-solution refinement study: dt = h^2 at every level, error
/// measured against the exact field at the final time.
inline ConvergenceStudy convergence_study(const Scenario& base, const std::vector<int>& levels) {
    if (!base.manufactured)
        throw std::invalid_argument("convergence_study: scenario has no manufactured solution");
    ConvergenceStudy out;
    for (int cells : levels) {
        Scenario sc = base;
        sc.grid.cells = cells;
        sc.dt = sc.grid.h() * sc.grid.h();
        sc.snapshot_stride = 1 << 20;  // keep first/last only
        Trajectory traj = solve_ibvp(sc);
        const ScalarField& pf = traj.final();
        const ManufacturedSolution exact{sc.grid.dim, sc.data.amplitude};

        const Grid& g = sc.grid;
        const auto wts = box_weights(g, full_box(g));
        double err2 = 0.0;
        for (int j = 0; j <= (g.dim == 2 ? g.cells : 0); ++j)
            for (int i = 0; i <= g.cells; ++i) {
                const std::size_t idx = g.index(i, j);
                const double d =
                    pf.values[idx] -
                    exact.value({g.coord(i), g.dim == 2 ? g.coord(j) : 0.0}, pf.time);
                err2 += d * d * wts[idx];
            }
        out.rows.push_back({cells, g.h(), std::sqrt(err2)});
    }
    for (std::size_t k = 1; k < out.rows.size(); ++k)
        out.orders.push_back(std::log2(out.rows[k - 1].l2_error /
                                       std::max(out.rows[k].l2_error, 1e-300)));
    return out;
}

}  // namespace forch

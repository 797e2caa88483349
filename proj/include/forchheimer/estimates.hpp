#pragma once

/// Witness-ratio evaluation of the interior estimates on solved
/// trajectories.  Each check computes the estimate's left-hand side and
/// its constant-free right-hand side and records the ratio; generic
/// constants are verified through finiteness, refinement stability and
/// parameter sweeps, never absolute thresholds.
///
/// Asymptotic statements are probed on a declared tail window (the last
/// quarter of the horizon by default); variants that involve the tail
/// derivative statistic beta are reported but not asserted.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "forchheimer/exponents.hpp"
#include "forchheimer/functionals.hpp"
#include "forchheimer/solver.hpp"

namespace forch {

struct EstimateRecord {
    std::string estimate;
    std::string scenario_id;
    double lhs = 0.0;
    double rhs = 0.0;  // without the generic constant
    double ratio = 0.0;
    bool advisory = false;  // reported, excluded from assertions
    std::vector<std::pair<std::string, double>> params;

    EstimateRecord() = default;
    EstimateRecord(std::string est, std::string sid, double lhs_, double rhs_, double ratio_)
        : estimate(std::move(est)),
          scenario_id(std::move(sid)),
          lhs(lhs_),
          rhs(rhs_),
          ratio(ratio_) {}

    EstimateRecord& with(const std::string& k, double v) {
        params.emplace_back(k, v);
        return *this;
    }
};

inline double witness_ratio(double lhs, double rhs) {
    if (rhs > 0.0) return lhs / rhs;
    return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

/// Per-snapshot scalars feeding the checks; computed in one pass so each
/// estimate reduces to window arithmetic on traces.
struct SnapshotStats {
    double time = 0.0;
    double max_p_inner = 0.0;       // sup_{U'} |p|
    double max_p_mid = 0.0;         // sup_V |p|
    double max_grad_inner = 0.0;    // sup_{U'} |grad p|
    double max_grad_mid = 0.0;      // sup_V |grad p|
    double grad2_mid = 0.0;         // int_V |grad p|^2
    double h_int = 0.0;             // int_U H(|grad p|)
    double one_plus_kgrad2 = 0.0;   // int_U (1 + K |grad p|^2)
    double lambda_integrand = 0.0;  // int_V (1+|grad p|)^{a s0/(2-s0)}
    double grad_2ma = 0.0;          // int_U |grad p|^{2-a}
    std::vector<double> grad_s_inner;    // int_{U'} |grad p|^s, per requested s
    std::vector<double> k_grad_s_inner;  // int_{U'} K |grad p|^s, per requested s
    double p_alpha = 0.0;     // int_U |p|^alpha
    double pbar_alpha = 0.0;  // int_U |p - Psi|^alpha
    double pbar_sq = 0.0;     // int_U (p - Psi)^2
    double psi_alpha = 0.0;   // int_U |Psi|^alpha
    double A_val = 0.0;       // data functional A(alpha, t)
    GValues G;                // data functionals G1..G4
    double pt_sq = 0.0;       // int_U p_t^2          (centered snapshot differences)
    double pbar_t_sq = 0.0;   // int_U (p_t - Psi_t)^2
    double max_pt_inner = 0.0;  // sup_{U'} |p_t|
    double hess_sq_inner = 0.0; // int_{U'} |Hess p|_F^2
    // weighted-embedding pieces with u = p - Psi, W = K(|grad p|)
    double pbar_l2 = 0.0;       // ||p - Psi||_{L^2(U)}
    double pbar_rho = 0.0;      // int_U |p - Psi|^{nu2}
    double k_gradpbar2 = 0.0;   // int_U K |grad(p - Psi)|^2
    double winv = 0.0;          // int_U K^{-s0/(2-s0)}  (support taken as all of U)
};

struct TrajectoryStats {
    const Trajectory* traj = nullptr;
    ExponentTable table;
    std::vector<double> grad_s_list;  // s values carried by grad_s_inner
    NodeBox inner, mid;
    std::vector<double> times;
    std::vector<SnapshotStats> snaps;
    std::vector<double> env_A;  // running max of A(alpha, .)
    double pbar0_alpha = 0.0;   // int |p0 - Psi(0)|^alpha
    double pbar0_sq = 0.0;
    double h0 = 0.0;            // int H(|grad p0|)
    double alpha = 2.0;

    double pbar0_norm() const { return std::pow(pbar0_alpha, 1.0 / alpha); }

    std::vector<double> trace(double SnapshotStats::* member) const {
        std::vector<double> v(snaps.size());
        for (std::size_t k = 0; k < snaps.size(); ++k) v[k] = snaps[k].*member;
        return v;
    }
    double at_time(const std::vector<double>& tr, double t) const {
        // nearest snapshot value; ladder times land on snapshots by construction
        std::size_t best = 0;
        for (std::size_t k = 1; k < times.size(); ++k)
            if (std::abs(times[k] - t) < std::abs(times[best] - t)) best = k;
        return tr[best];
    }
    double env_A_at(double t) const {
        double v = env_A.front();
        for (std::size_t k = 0; k < times.size(); ++k)
            if (times[k] <= t + 1e-9) v = env_A[k];
        return v;
    }
    double psi_norm_window(double t0, double t1) const {
        static thread_local std::vector<double> tmp;
        tmp.resize(snaps.size());
        for (std::size_t k = 0; k < snaps.size(); ++k) tmp[k] = snaps[k].psi_alpha;
        return std::pow(time_integral(times, tmp, t0, t1), 1.0 / alpha);
    }
};

/// One pass over the snapshots computing every scalar the checks need.
inline TrajectoryStats build_stats(const Trajectory& traj, const ExponentTable& table,
                                   std::vector<double> grad_s_list = {2.0, 3.0}) {
    const Scenario& sc = traj.scenario;
    const Grid& g = sc.grid;
    const ForchheimerLaw& law = sc.law;
    const double a = table.a;
    const double alpha = table.alpha;

    TrajectoryStats st;
    st.traj = &traj;
    st.table = table;
    st.grad_s_list = std::move(grad_s_list);
    st.inner = sc.inner_box();
    st.mid = sc.middle_box();
    st.alpha = alpha;

    const NodeBox U = full_box(g);
    const double lam_exp = a * table.s0 / (2.0 - table.s0);

    const std::size_t ns = traj.snapshots.size();
    st.times.resize(ns);
    st.snaps.resize(ns);

    auto pt_of = [&](int i, int j) { return Point{g.coord(i), g.dim == 2 ? g.coord(j) : 0.0}; };

    for (std::size_t k = 0; k < ns; ++k) {
        const ScalarField& p = traj.snapshots[k];
        const double t = p.time;
        st.times[k] = t;
        SnapshotStats& s = st.snaps[k];
        s.time = t;

        const VectorField grad = gradient_field(p);
        std::vector<double> gm(p.values.size());
        for (std::size_t idx = 0; idx < gm.size(); ++idx) gm[idx] = grad.magnitude(idx);
        const std::vector<double> Hvals = h_of(law, gm);
        std::vector<double> Kvals(gm.size());
        {
            double hint = -1.0;
            // ascending evaluation keeps the root solve warm
            std::vector<std::size_t> order(gm.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::sort(order.begin(), order.end(),
                      [&](auto x, auto y) { return gm[x] < gm[y]; });
            for (std::size_t idx : order) {
                const DiffusivityValue kv = eval_K(law, gm[idx], 1e-12, hint);
                Kvals[idx] = kv.K;
                hint = kv.s;
            }
        }

        s.max_p_inner = box_max(p, st.inner);
        s.max_p_mid = box_max(p, st.mid);
        s.h_int = integrate_box(g, U, [&](int i, int j) { return Hvals[g.index(i, j)]; });
        s.one_plus_kgrad2 = integrate_box(g, U, [&](int i, int j) {
            const std::size_t idx = g.index(i, j);
            return 1.0 + Kvals[idx] * gm[idx] * gm[idx];
        });
        s.grad_2ma = integrate_box(
            g, U, [&](int i, int j) { return std::pow(gm[g.index(i, j)], 2.0 - a); });
        s.lambda_integrand = integrate_box(g, st.mid, [&](int i, int j) {
            return std::pow(1.0 + gm[g.index(i, j)], lam_exp);
        });
        s.grad2_mid = integrate_box(g, st.mid, [&](int i, int j) {
            const double v = gm[g.index(i, j)];
            return v * v;
        });
        for (int jj = st.inner.lo; jj <= (g.dim == 2 ? st.inner.hi : 0); ++jj)
            for (int ii = st.inner.lo; ii <= st.inner.hi; ++ii)
                s.max_grad_inner = std::max(s.max_grad_inner, gm[g.index(ii, jj)]);
        for (int jj = st.mid.lo; jj <= (g.dim == 2 ? st.mid.hi : 0); ++jj)
            for (int ii = st.mid.lo; ii <= st.mid.hi; ++ii)
                s.max_grad_mid = std::max(s.max_grad_mid, gm[g.index(ii, jj)]);

        s.grad_s_inner.resize(st.grad_s_list.size());
        s.k_grad_s_inner.resize(st.grad_s_list.size());
        for (std::size_t si = 0; si < st.grad_s_list.size(); ++si) {
            const double se = st.grad_s_list[si];
            s.grad_s_inner[si] = integrate_box(
                g, st.inner, [&](int i, int j) { return std::pow(gm[g.index(i, j)], se); });
            s.k_grad_s_inner[si] = integrate_box(g, st.inner, [&](int i, int j) {
                const std::size_t idx = g.index(i, j);
                return Kvals[idx] * std::pow(gm[idx], se);
            });
        }

        s.p_alpha = integrate_box(
            g, U, [&](int i, int j) { return std::pow(std::abs(p.at(i, j)), alpha); });
        s.pbar_alpha = integrate_box(g, U, [&](int i, int j) {
            return std::pow(std::abs(p.at(i, j) - sc.data.value(pt_of(i, j), t)), alpha);
        });
        s.pbar_sq = integrate_box(g, U, [&](int i, int j) {
            const double v = p.at(i, j) - sc.data.value(pt_of(i, j), t);
            return v * v;
        });
        s.psi_alpha = integrate_box(g, U, [&](int i, int j) {
            return std::pow(std::abs(sc.data.value(pt_of(i, j), t)), alpha);
        });
        s.pbar_l2 = std::sqrt(s.pbar_sq);
        s.pbar_rho = integrate_box(g, U, [&](int i, int j) {
            return std::pow(std::abs(p.at(i, j) - sc.data.value(pt_of(i, j), t)), table.nu2);
        });
        s.k_gradpbar2 = integrate_box(g, U, [&](int i, int j) {
            const std::size_t idx = g.index(i, j);
            const Vec2 gpsi = sc.data.grad(pt_of(i, j), t);
            const double bx = grad.dx[idx] - gpsi[0];
            const double by = g.dim == 2 ? grad.dy[idx] - gpsi[1] : 0.0;
            return Kvals[idx] * (bx * bx + by * by);
        });
        s.winv = integrate_box(g, U, [&](int i, int j) {
            return std::pow(Kvals[g.index(i, j)], -table.s0 / (2.0 - table.s0));
        });

        s.A_val = data_functional_A(sc.data, alpha, t, law, g);
        s.G = data_functionals_G(sc.data, t, law, table, g);

        // p_t from snapshot differences (centered inside, one-sided at ends)
        const std::size_t ka = (k == 0) ? 0 : k - 1;
        const std::size_t kb = (k + 1 == ns) ? k : k + 1;
        if (kb > ka) {
            const ScalarField& fa = traj.snapshots[ka];
            const ScalarField& fb = traj.snapshots[kb];
            const double idt = 1.0 / (fb.time - fa.time);
            ScalarField ptf = make_field(g, t);
            for (std::size_t idx = 0; idx < ptf.values.size(); ++idx)
                ptf.values[idx] = (fb.values[idx] - fa.values[idx]) * idt;
            s.pt_sq = integrate_box(g, U, [&](int i, int j) {
                const double v = ptf.at(i, j);
                return v * v;
            });
            s.pbar_t_sq = integrate_box(g, U, [&](int i, int j) {
                const double v = ptf.at(i, j) - sc.data.dt(pt_of(i, j), t);
                return v * v;
            });
            s.max_pt_inner = box_max(ptf, st.inner);
        }

        const MatrixField hess = hessian_field(p);
        s.hess_sq_inner = integrate_box(g, st.inner, [&](int i, int j) {
            const double v = hess.frobenius(g.index(i, j));
            return v * v;
        });
    }

    st.env_A = envelope(st.trace(&SnapshotStats::A_val));

    // Initial-data quantities against the t = 0 extension.
    {
        const ScalarField& p0 = traj.snapshots.front();
        st.pbar0_alpha = integrate_box(g, U, [&](int i, int j) {
            return std::pow(std::abs(p0.at(i, j) - sc.data.value(pt_of(i, j), 0.0)), alpha);
        });
        st.pbar0_sq = integrate_box(g, U, [&](int i, int j) {
            const double v = p0.at(i, j) - sc.data.value(pt_of(i, j), 0.0);
            return v * v;
        });
        st.h0 = h_integral(p0, law);
    }
    return st;
}

namespace detail {

inline std::vector<double> ladder(double from, double to) {
    std::vector<double> v;
    for (double t = from; t <= to + 1e-9; t += 1.0) v.push_back(t);
    return v;
}

}  // namespace detail

/// Uniform-Gronwall window estimates plus their data-functional and
/// cumulative forms, on the integer time ladder.
inline void check_gronwall(const TrajectoryStats& st, std::vector<EstimateRecord>& out) {
    const Trajectory& traj = *st.traj;
    const double T = traj.snapshots.back().time;
    if (T < 1.0) throw std::domain_error("check_gronwall: horizon shorter than 1");
    const std::string& sid = traj.scenario.id;
    const double alpha = st.alpha, a = st.table.a;

    const auto h_tr = st.trace(&SnapshotStats::h_int);
    const auto pbar_sq_tr = st.trace(&SnapshotStats::pbar_sq);
    const auto pbar_t_sq_tr = st.trace(&SnapshotStats::pbar_t_sq);
    std::vector<double> G1(st.snaps.size()), G3(st.snaps.size()), G4(st.snaps.size());
    for (std::size_t k = 0; k < st.snaps.size(); ++k) {
        G1[k] = st.snaps[k].G.G1;
        G3[k] = st.snaps[k].G.G3;
        G4[k] = st.snaps[k].G.G4;
    }

    for (double t : detail::ladder(1.0, T)) {
        const double h_window = time_integral(st.times, h_tr, t - 1.0, t);
        const double pbar_prev = st.at_time(pbar_sq_tr, t - 1.0);
        const double g1_win = time_integral(st.times, G1, t - 1.0, t);
        const double g3_win = time_integral(st.times, G3, t - 1.0, t);
        const double g4_win = time_integral(st.times, G4, t - 1.0, t);
        const double env_pow = std::pow(st.env_A_at(t), alpha / (alpha - a));
        const double data_base = 1.0 + st.pbar0_alpha + env_pow;

        {
            const double rhs = pbar_prev + g1_win;
            out.push_back(EstimateRecord{"h-window", sid, h_window, rhs,
                                         witness_ratio(h_window, rhs)}
                              .with("t", t));
        }
        {
            const double lhs = st.at_time(h_tr, t) +
                               0.5 * time_integral(st.times, pbar_t_sq_tr, t - 0.5, t);
            const double rhs = pbar_prev + g3_win;
            out.push_back(
                EstimateRecord{"h-instant-pt-window", sid, lhs, rhs, witness_ratio(lhs, rhs)}
                    .with("t", t));
        }
        {
            const double lhs = st.at_time(pbar_t_sq_tr, t);
            const double rhs = pbar_prev + g4_win;
            out.push_back(EstimateRecord{"pt-instant", sid, lhs, rhs, witness_ratio(lhs, rhs)}
                              .with("t", t));
        }
        {
            const double rhs = data_base + g1_win;
            out.push_back(EstimateRecord{"h-window-data", sid, h_window, rhs,
                                         witness_ratio(h_window, rhs)}
                              .with("t", t));
        }
        {
            const double lhs = time_integral(st.times, pbar_t_sq_tr, t - 0.5, t);
            const double rhs = data_base + g3_win;
            out.push_back(
                EstimateRecord{"pt-window-data", sid, lhs, rhs, witness_ratio(lhs, rhs)}
                    .with("t", t));
        }
        {
            const double lhs = time_integral(st.times, h_tr, 0.0, t);
            const double rhs = st.pbar0_sq + time_integral(st.times, G1, 0.0, t);
            out.push_back(EstimateRecord{"h-cumulative", sid, lhs, rhs,
                                         witness_ratio(lhs, rhs)}
                              .with("t", t));
        }
        {
            const double lhs =
                st.at_time(h_tr, t) + time_integral(st.times, pbar_t_sq_tr, 0.0, t);
            const double rhs =
                st.h0 + st.pbar0_sq + time_integral(st.times, G3, 0.0, t);
            out.push_back(EstimateRecord{"h-instant-cumulative", sid, lhs, rhs,
                                         witness_ratio(lhs, rhs)}
                              .with("t", t));
        }
    }
}

/// Interior sup bound for the pressure over the window, plus its
/// small-time, large-time, tail and beta forms.
inline void check_linfty_pressure(const TrajectoryStats& st, double T0, double T,
                                  const std::vector<double>& thetas,
                                  std::vector<EstimateRecord>& out) {
    const Trajectory& traj = *st.traj;
    const std::string& sid = traj.scenario.id;
    const ExponentTable& t = st.table;
    const double alpha = st.alpha, a = t.a;
    if (st.inner.empty()) throw std::domain_error("check_linfty_pressure: empty interior");

    const auto max_p_tr = st.trace(&SnapshotStats::max_p_inner);
    const auto p_alpha_tr = st.trace(&SnapshotStats::p_alpha);

    const double p_norm_full =
        std::pow(time_integral(st.times, p_alpha_tr, T0, T0 + T), 1.0 / alpha);
    for (double theta : thetas) {
        const double lhs = window_max(st.times, max_p_tr, T0 + theta * T, T0 + T);
        const double rhs = std::pow(1.0 + T, t.kappa1 / t.kappa0) *
                           std::pow(1.0 + 1.0 / (theta * T), t.kappa1 / (alpha - a)) *
                           std::pow(1.0 + p_norm_full, t.kappa2);
        out.push_back(EstimateRecord{"pressure-linfty", sid, lhs, rhs, witness_ratio(lhs, rhs)}
                          .with("T0", T0)
                          .with("T", T)
                          .with("theta", theta));
    }

    const double Tend = st.times.back();
    for (double tt : {0.25, 0.5, 1.0}) {
        const double lhs = st.at_time(max_p_tr, tt);
        const double data = 1.0 + st.pbar0_norm() +
                            std::pow(st.env_A_at(tt), 1.0 / (alpha - a)) +
                            st.psi_norm_window(0.0, tt);
        const double rhs =
            std::pow(tt, -t.kappa1 / (alpha - a)) * std::pow(data, t.kappa2);
        out.push_back(EstimateRecord{"pressure-linfty-smalltime", sid, lhs, rhs,
                                     witness_ratio(lhs, rhs)}
                          .with("t", tt));
    }
    for (double tt : detail::ladder(1.0, Tend)) {
        const double lhs = st.at_time(max_p_tr, tt);
        const double data = 1.0 + st.pbar0_norm() +
                            std::pow(st.env_A_at(tt), 1.0 / (alpha - a)) +
                            st.psi_norm_window(tt - 1.0, tt);
        const double rhs = std::pow(data, t.kappa2);
        out.push_back(EstimateRecord{"pressure-linfty-largetime", sid, lhs, rhs,
                                     witness_ratio(lhs, rhs)}
                          .with("t", tt));
    }
    {  // tail window proxy for the limsup statement
        const double w = traj.scenario.effective_tail();
        const double t0 = Tend - w;
        const double lhs = window_max(st.times, max_p_tr, t0, Tend);
        const double A_tail = window_max(st.times, st.trace(&SnapshotStats::A_val), t0, Tend);
        double psi_tail = 0.0;
        for (double tt = std::max(1.0, t0); tt <= Tend + 1e-9; tt += 1.0)
            psi_tail = std::max(psi_tail, st.psi_norm_window(tt - 1.0, tt));
        const double rhs =
            std::pow(1.0 + std::pow(A_tail, 1.0 / (alpha - a)) + psi_tail, t.kappa2);
        out.push_back(EstimateRecord{"pressure-linfty-tail", sid, lhs, rhs,
                                     witness_ratio(lhs, rhs)}
                          .with("window", w));
    }
    {  // beta form: advisory
        const double w = traj.scenario.effective_tail();
        const double beta =
            beta_tail(st.times, st.trace(&SnapshotStats::A_val), w);
        const double lhs = st.at_time(max_p_tr, Tend);
        std::vector<double> A_pow(st.snaps.size());
        for (std::size_t k = 0; k < st.snaps.size(); ++k)
            A_pow[k] = std::pow(st.snaps[k].A_val, alpha / (alpha - a));
        const double A_win = std::pow(time_integral(st.times, A_pow, Tend - 1.0, Tend),
                                      (alpha - a) / alpha);
        const double rhs = std::pow(1.0 + std::pow(beta, 1.0 / (alpha - 2.0 * a)) +
                                        std::pow(A_win, 1.0 / (alpha - a)) +
                                        st.psi_norm_window(Tend - 1.0, Tend),
                                    t.kappa2);
        EstimateRecord rec{"pressure-linfty-beta", sid, lhs, rhs, witness_ratio(lhs, rhs)};
        rec.advisory = true;
        out.push_back(rec.with("t", Tend).with("beta", beta));
    }
}

/// K-weighted gradient power over the window and sup-in-time gradient
/// integrability, with their data-functional variants.
inline void check_grad_ls(const TrajectoryStats& st, double T0, double T, double theta,
                          std::vector<EstimateRecord>& out) {
    const Trajectory& traj = *st.traj;
    const std::string& sid = traj.scenario.id;
    const ExponentTable& t = st.table;
    const double alpha = st.alpha, a = t.a;
    const double Tend = st.times.back();

    const auto max_p_mid_tr = st.trace(&SnapshotStats::max_p_mid);
    const auto kg2_tr = st.trace(&SnapshotStats::one_plus_kgrad2);
    std::vector<double> G1(st.snaps.size());
    for (std::size_t k = 0; k < st.snaps.size(); ++k) G1[k] = st.snaps[k].G.G1;

    for (std::size_t si = 0; si < st.grad_s_list.size(); ++si) {
        const double s = st.grad_s_list[si];
        if (s < 2.0) throw std::invalid_argument("check_grad_ls: s must be >= 2");
        std::vector<double> grad_s(st.snaps.size()), k_grad_s(st.snaps.size());
        for (std::size_t k = 0; k < st.snaps.size(); ++k) {
            grad_s[k] = st.snaps[k].grad_s_inner[si];
            k_grad_s[k] = st.snaps[k].k_grad_s_inner[si];
        }

        const double N0 =
            std::pow(window_max(st.times, max_p_mid_tr, T0 + 0.5 * theta * T, T0 + T), 2.0);
        const double energy = time_integral(st.times, kg2_tr, T0, T0 + T);
        {
            const double lhs = time_integral(st.times, k_grad_s, T0 + theta * T, T0 + T);
            const double rhs = std::pow(1.0 + 1.0 / (theta * T), s - 2.0) *
                               std::pow(1.0 + N0, s - 2.0) * energy;
            out.push_back(
                EstimateRecord{"grad-ls-kweighted", sid, lhs, rhs, witness_ratio(lhs, rhs)}
                    .with("s", s)
                    .with("theta", theta));
        }
        {
            const double lhs = window_max(st.times, grad_s, T0 + theta * T, T0 + T);
            const double rhs = std::pow(1.0 + 1.0 / (theta * T), s + a - 1.0) *
                               std::pow(1.0 + N0, s - 2.0 + a) * energy;
            out.push_back(EstimateRecord{"grad-ls-sup", sid, lhs, rhs, witness_ratio(lhs, rhs)}
                              .with("s", s)
                              .with("theta", theta));
        }

        const double mu1 = t.mu1(s), mu2 = t.mu2(s);
        for (double tt : {0.25, 0.5, 1.0}) {
            const double lhs = st.at_time(grad_s, tt);
            const double data = 1.0 + std::pow(st.env_A_at(tt), 1.0 / (alpha - a)) +
                                st.psi_norm_window(0.0, tt);
            const double rhs = std::pow(tt, -mu1) *
                               std::pow(1.0 + st.pbar0_norm(), mu2 + 2.0) *
                               std::pow(data, mu2) *
                               (1.0 + time_integral(st.times, G1, 0.0, tt));
            out.push_back(EstimateRecord{"grad-ls-smalltime", sid, lhs, rhs,
                                         witness_ratio(lhs, rhs)}
                              .with("s", s)
                              .with("t", tt));
        }
        for (double tt : detail::ladder(2.0, Tend)) {
            const double lhs = st.at_time(grad_s, tt);
            const double data = 1.0 + std::pow(st.env_A_at(tt), 1.0 / (alpha - a)) +
                                st.psi_norm_window(tt - 2.0, tt);
            const double rhs = std::pow(1.0 + st.pbar0_norm(), mu2 + alpha) *
                               std::pow(data, mu2 + alpha) *
                               (1.0 + time_integral(st.times, G1, tt - 1.0, tt));
            out.push_back(EstimateRecord{"grad-ls-largetime", sid, lhs, rhs,
                                         witness_ratio(lhs, rhs)}
                              .with("s", s)
                              .with("t", tt));
        }
        {  // tail proxy
            const double w = traj.scenario.effective_tail();
            const double t0 = Tend - w;
            const double lhs = window_max(st.times, grad_s, t0, Tend);
            const double A_tail =
                window_max(st.times, st.trace(&SnapshotStats::A_val), t0, Tend);
            double psi_tail = 0.0, g1_tail = 0.0;
            for (double tt = std::max(1.0, t0); tt <= Tend + 1e-9; tt += 1.0) {
                psi_tail = std::max(psi_tail, st.psi_norm_window(tt - 1.0, tt));
                g1_tail = std::max(g1_tail, time_integral(st.times, G1, tt - 1.0, tt));
            }
            const double rhs =
                std::pow(1.0 + std::pow(A_tail, 1.0 / (alpha - a)) + psi_tail, mu2 + alpha) *
                (1.0 + g1_tail);
            out.push_back(EstimateRecord{"grad-ls-tail", sid, lhs, rhs,
                                         witness_ratio(lhs, rhs)}
                              .with("s", s)
                              .with("window", w));
        }
        {  // beta form: advisory
            const double w = traj.scenario.effective_tail();
            const double beta = beta_tail(st.times, st.trace(&SnapshotStats::A_val), w);
            const double lhs = st.at_time(grad_s, Tend);
            const double A_sup =
                window_max(st.times, st.trace(&SnapshotStats::A_val), Tend - 2.0, Tend);
            const double rhs =
                std::pow(1.0 + std::pow(beta, 1.0 / (alpha - 2.0 * a)) +
                             std::pow(A_sup, 1.0 / (alpha - a)) +
                             st.psi_norm_window(Tend - 2.0, Tend),
                         mu2 + alpha) *
                (1.0 + time_integral(st.times, G1, Tend - 1.0, Tend));
            EstimateRecord rec{"grad-ls-beta", sid, lhs, rhs, witness_ratio(lhs, rhs)};
            rec.advisory = true;
            out.push_back(rec.with("s", s).with("t", Tend));
        }
    }
}

/// Interior sup bound for the gradient via the window functional lambda,
/// with small-time, large-time, tail and beta variants.
inline void check_grad_linfty(const TrajectoryStats& st, double T0, double T, double theta,
                              std::vector<EstimateRecord>& out) {
    const Trajectory& traj = *st.traj;
    const std::string& sid = traj.scenario.id;
    const ExponentTable& t = st.table;
    const double alpha = st.alpha, a = t.a;
    const double Tend = st.times.back();

    const auto max_grad_tr = st.trace(&SnapshotStats::max_grad_inner);
    const auto lam_tr = st.trace(&SnapshotStats::lambda_integrand);
    const auto grad2_mid_tr = st.trace(&SnapshotStats::grad2_mid);
    std::vector<double> G1(st.snaps.size());
    for (std::size_t k = 0; k < st.snaps.size(); ++k) G1[k] = st.snaps[k].G.G1;

    {
        const double lhs = window_max(st.times, max_grad_tr, T0 + theta * T, T0 + T);
        const double lambda = std::pow(
            time_integral(st.times, lam_tr, T0 + 0.5 * theta * T, T0 + T),
            (2.0 - t.s0) / t.s0);
        const double grad_l2 =
            std::sqrt(time_integral(st.times, grad2_mid_tr, T0 + 0.5 * theta * T, T0 + T));
        const double rhs = std::pow(1.0 + 1.0 / (theta * T), 0.5 * (t.s1 + 1.0)) *
                           std::pow(lambda, 0.5 * t.s1) * grad_l2;
        out.push_back(EstimateRecord{"grad-linfty", sid, lhs, rhs, witness_ratio(lhs, rhs)}
                          .with("T0", T0)
                          .with("T", T)
                          .with("theta", theta)
                          .with("lambda", lambda));
    }

    const double kap_exp = t.s3 * (t.kappa5 + 0.5 * alpha);
    for (double tt : {0.25, 0.5, 1.0}) {
        const double lhs = st.at_time(max_grad_tr, tt);
        const double data = 1.0 + std::pow(st.env_A_at(tt), 1.0 / (alpha - a)) +
                            st.psi_norm_window(0.0, tt);
        const double rhs = std::pow(tt, -0.5 * t.kappa4) *
                           std::pow(1.0 + st.pbar0_norm(), t.s3 * (t.kappa5 + 1.0)) *
                           std::pow(data, t.s3 * t.kappa5) *
                           std::pow(1.0 + time_integral(st.times, G1, 0.0, tt), 0.5 * t.s3);
        out.push_back(EstimateRecord{"grad-linfty-smalltime", sid, lhs, rhs,
                                     witness_ratio(lhs, rhs)}
                          .with("t", tt));
    }
    for (double tt : detail::ladder(2.0, Tend)) {
        const double lhs = st.at_time(max_grad_tr, tt);
        const double data = 1.0 + std::pow(st.env_A_at(tt), 1.0 / (alpha - a)) +
                            st.psi_norm_window(tt - 2.0, tt);
        const double rhs =
            std::pow(1.0 + st.pbar0_norm(), kap_exp) * std::pow(data, kap_exp) *
            std::pow(1.0 + time_integral(st.times, G1, tt - 1.0, tt), 0.5 * t.s3);
        out.push_back(EstimateRecord{"grad-linfty-largetime", sid, lhs, rhs,
                                     witness_ratio(lhs, rhs)}
                          .with("t", tt));
    }
    {
        const double w = traj.scenario.effective_tail();
        const double t0 = Tend - w;
        const double lhs = window_max(st.times, max_grad_tr, t0, Tend);
        const double A_tail = window_max(st.times, st.trace(&SnapshotStats::A_val), t0, Tend);
        double psi_tail = 0.0, g1_tail = 0.0;
        for (double tt = std::max(1.0, t0); tt <= Tend + 1e-9; tt += 1.0) {
            psi_tail = std::max(psi_tail, st.psi_norm_window(tt - 1.0, tt));
            g1_tail = std::max(g1_tail, time_integral(st.times, G1, tt - 1.0, tt));
        }
        const double rhs =
            std::pow(1.0 + std::pow(A_tail, 1.0 / (alpha - a)) + psi_tail, kap_exp) *
            std::pow(1.0 + g1_tail, 0.5 * t.s3);
        out.push_back(EstimateRecord{"grad-linfty-tail", sid, lhs, rhs,
                                     witness_ratio(lhs, rhs)}
                          .with("window", w));
    }
    {
        const double w = traj.scenario.effective_tail();
        const double beta = beta_tail(st.times, st.trace(&SnapshotStats::A_val), w);
        const double lhs = st.at_time(max_grad_tr, Tend);
        const double A_sup =
            window_max(st.times, st.trace(&SnapshotStats::A_val), Tend - 3.0, Tend);
        const double rhs = std::pow(1.0 + std::pow(beta, 1.0 / (alpha - 2.0 * a)) +
                                        std::pow(A_sup, 1.0 / (alpha - a)) +
                                        st.psi_norm_window(Tend - 3.0, Tend),
                                    kap_exp) *
                           std::pow(1.0 + time_integral(st.times, G1, Tend - 2.0, Tend),
                                    0.5 * t.s3);
        EstimateRecord rec{"grad-linfty-beta", sid, lhs, rhs, witness_ratio(lhs, rhs)};
        rec.advisory = true;
        out.push_back(rec.with("t", Tend).with("beta", beta));
    }
}

/// Interior sup bound for the time derivative, with variants.
inline void check_pt_linfty(const TrajectoryStats& st, double T0, double T, double theta,
                            std::vector<EstimateRecord>& out) {
    const Trajectory& traj = *st.traj;
    const std::string& sid = traj.scenario.id;
    const ExponentTable& t = st.table;
    const double alpha = st.alpha, a = t.a;
    const double Tend = st.times.back();

    const double spacing = traj.snapshot_spacing();
    const double omega = traj.scenario.data.omega;
    if (spacing > 0.2 + 1e-12 || spacing * std::abs(omega) > 1.0)
        throw std::invalid_argument("check_pt_linfty: snapshot stride too coarse for p_t");

    const auto max_pt_tr = st.trace(&SnapshotStats::max_pt_inner);
    const auto pt_sq_tr = st.trace(&SnapshotStats::pt_sq);
    const auto lam_tr = st.trace(&SnapshotStats::lambda_integrand);
    std::vector<double> G3(st.snaps.size());
    for (std::size_t k = 0; k < st.snaps.size(); ++k) G3[k] = st.snaps[k].G.G3;

    {
        const double lhs = window_max(st.times, max_pt_tr, T0 + theta * T, T0 + T);
        const double lambda = std::pow(
            time_integral(st.times, lam_tr, T0 + 0.5 * theta * T, T0 + T),
            (2.0 - t.s0) / t.s0);
        const double pt_l2 = std::sqrt(time_integral(st.times, pt_sq_tr, T0, T0 + T));
        const double rhs = std::pow(lambda, 0.5 * t.s1) *
                           std::pow(1.0 + 1.0 / (theta * T), 0.5 * (t.s1 + 1.0)) * pt_l2;
        out.push_back(EstimateRecord{"pt-linfty", sid, lhs, rhs, witness_ratio(lhs, rhs)}
                          .with("T0", T0)
                          .with("T", T)
                          .with("theta", theta));
    }

    for (double tt : {0.25, 0.5, 1.0}) {
        const double lhs = st.at_time(max_pt_tr, tt);
        const double data = 1.0 + std::pow(st.env_A_at(tt), 1.0 / (alpha - a)) +
                            st.psi_norm_window(0.0, tt);
        const double rhs = std::pow(tt, -0.5 * t.kappa6) *
                           std::pow(1.0 + st.pbar0_norm(), t.kappa7) *
                           std::sqrt(1.0 + st.h0) * std::pow(data, t.kappa8) *
                           std::pow(1.0 + time_integral(st.times, G3, 0.0, tt), 0.5 * t.s3);
        out.push_back(EstimateRecord{"pt-linfty-smalltime", sid, lhs, rhs,
                                     witness_ratio(lhs, rhs)}
                          .with("t", tt));
    }
    for (double tt : detail::ladder(2.0, Tend)) {
        const double lhs = st.at_time(max_pt_tr, tt);
        const double data = 1.0 + std::pow(st.env_A_at(tt), 1.0 / (alpha - a)) +
                            st.psi_norm_window(tt - 2.0, tt);
        const double rhs =
            std::pow(1.0 + st.pbar0_norm(), t.kappa9) * std::pow(data, t.kappa9) *
            std::pow(1.0 + time_integral(st.times, G3, tt - 1.0, tt), 0.5 * t.s3);
        out.push_back(EstimateRecord{"pt-linfty-largetime", sid, lhs, rhs,
                                     witness_ratio(lhs, rhs)}
                          .with("t", tt));
    }
    {
        const double w = traj.scenario.effective_tail();
        const double t0 = Tend - w;
        const double lhs = window_max(st.times, max_pt_tr, t0, Tend);
        const double A_tail = window_max(st.times, st.trace(&SnapshotStats::A_val), t0, Tend);
        double psi_tail = 0.0, g3_tail = 0.0;
        for (double tt = std::max(1.0, t0); tt <= Tend + 1e-9; tt += 1.0) {
            psi_tail = std::max(psi_tail, st.psi_norm_window(tt - 1.0, tt));
            g3_tail = std::max(g3_tail, time_integral(st.times, G3, tt - 1.0, tt));
        }
        const double rhs =
            std::pow(1.0 + std::pow(A_tail, 1.0 / (alpha - a)) + psi_tail, t.kappa9) *
            std::pow(1.0 + g3_tail, 0.5 * t.s3);
        out.push_back(EstimateRecord{"pt-linfty-tail", sid, lhs, rhs,
                                     witness_ratio(lhs, rhs)}
                          .with("window", w));
    }
    {
        const double w = traj.scenario.effective_tail();
        const double beta = beta_tail(st.times, st.trace(&SnapshotStats::A_val), w);
        const double lhs = st.at_time(max_pt_tr, Tend);
        const double A_sup =
            window_max(st.times, st.trace(&SnapshotStats::A_val), Tend - 3.0, Tend);
        const double rhs = std::pow(1.0 + std::pow(beta, 1.0 / (alpha - 2.0 * a)) +
                                        std::pow(A_sup, 1.0 / (alpha - a)) +
                                        st.psi_norm_window(Tend - 3.0, Tend),
                                    t.kappa9) *
                           std::pow(1.0 + time_integral(st.times, G3, Tend - 2.0, Tend),
                                    0.5 * t.s3);
        EstimateRecord rec{"pt-linfty-beta", sid, lhs, rhs, witness_ratio(lhs, rhs)};
        rec.advisory = true;
        out.push_back(rec.with("t", Tend).with("beta", beta));
    }
}

/// Interior L2 bound for the Hessian, with variants.
inline void check_hessian_l2(const TrajectoryStats& st, const std::vector<double>& at_times,
                             std::vector<EstimateRecord>& out) {
    const Trajectory& traj = *st.traj;
    const std::string& sid = traj.scenario.id;
    const ExponentTable& t = st.table;
    const double alpha = st.alpha, a = t.a;
    const double Tend = st.times.back();

    const auto hess_tr = st.trace(&SnapshotStats::hess_sq_inner);
    const auto max_grad_mid_tr = st.trace(&SnapshotStats::max_grad_mid);
    const auto grad_2ma_tr = st.trace(&SnapshotStats::grad_2ma);
    const auto pt_sq_tr = st.trace(&SnapshotStats::pt_sq);
    std::vector<double> G4(st.snaps.size());
    for (std::size_t k = 0; k < st.snaps.size(); ++k) G4[k] = st.snaps[k].G.G4;

    for (double tt : at_times) {
        const double lhs = std::sqrt(st.at_time(hess_tr, tt));
        const double rhs = std::pow(1.0 + st.at_time(max_grad_mid_tr, tt), a) *
                           std::sqrt(st.at_time(grad_2ma_tr, tt) + st.at_time(pt_sq_tr, tt));
        out.push_back(EstimateRecord{"hessian-l2", sid, lhs, rhs, witness_ratio(lhs, rhs)}
                          .with("t", tt));
    }

    for (double tt : {0.25, 0.5, 1.0}) {
        const double lhs = std::sqrt(st.at_time(hess_tr, tt));
        const double data = 1.0 + std::pow(st.env_A_at(tt), 1.0 / (alpha - a)) +
                            st.psi_norm_window(0.0, tt);
        const double rhs = std::pow(tt, -0.5 * t.kappa10) *
                           std::pow(1.0 + st.pbar0_norm(), t.kappa11) *
                           std::sqrt(1.0 + st.h0) * std::pow(data, t.kappa12) *
                           std::pow(1.0 + time_integral(st.times, G4, 0.0, tt), 0.5 * t.s4);
        out.push_back(EstimateRecord{"hessian-l2-smalltime", sid, lhs, rhs,
                                     witness_ratio(lhs, rhs)}
                          .with("t", tt));
    }
    for (double tt : detail::ladder(2.0, Tend)) {
        const double lhs = std::sqrt(st.at_time(hess_tr, tt));
        const double data = 1.0 + std::pow(st.env_A_at(tt), 1.0 / (alpha - a)) +
                            st.psi_norm_window(tt - 2.0, tt);
        const double rhs =
            std::pow(1.0 + st.pbar0_norm(), t.kappa11) * std::pow(data, t.kappa11) *
            std::pow(1.0 + time_integral(st.times, G4, tt - 1.0, tt), 0.5 * t.s4);
        out.push_back(EstimateRecord{"hessian-l2-largetime", sid, lhs, rhs,
                                     witness_ratio(lhs, rhs)}
                          .with("t", tt));
    }
    {
        const double w = traj.scenario.effective_tail();
        const double t0 = Tend - w;
        std::vector<double> hess_norm(st.snaps.size());
        for (std::size_t k = 0; k < st.snaps.size(); ++k) hess_norm[k] = std::sqrt(hess_tr[k]);
        const double lhs = window_max(st.times, hess_norm, t0, Tend);
        const double A_tail = window_max(st.times, st.trace(&SnapshotStats::A_val), t0, Tend);
        double psi_tail = 0.0, g4_tail = 0.0;
        for (double tt = std::max(1.0, t0); tt <= Tend + 1e-9; tt += 1.0) {
            psi_tail = std::max(psi_tail, st.psi_norm_window(tt - 1.0, tt));
            g4_tail = std::max(g4_tail, time_integral(st.times, G4, tt - 1.0, tt));
        }
        const double rhs =
            std::pow(1.0 + std::pow(A_tail, 1.0 / (alpha - a)) + psi_tail, t.kappa11) *
            std::pow(1.0 + g4_tail, 0.5 * t.s4);
        out.push_back(EstimateRecord{"hessian-l2-tail", sid, lhs, rhs,
                                     witness_ratio(lhs, rhs)}
                          .with("window", w));
    }
    {
        const double w = traj.scenario.effective_tail();
        const double beta = beta_tail(st.times, st.trace(&SnapshotStats::A_val), w);
        const double lhs = std::sqrt(st.at_time(hess_tr, Tend));
        const double A_sup =
            window_max(st.times, st.trace(&SnapshotStats::A_val), Tend - 3.0, Tend);
        const double rhs = std::pow(1.0 + std::pow(beta, 1.0 / (alpha - 2.0 * a)) +
                                        std::pow(A_sup, 1.0 / (alpha - a)) +
                                        st.psi_norm_window(Tend - 3.0, Tend),
                                    t.kappa11) *
                           std::pow(1.0 + time_integral(st.times, G4, Tend - 2.0, Tend),
                                    0.5 * t.s4);
        EstimateRecord rec{"hessian-l2-beta", sid, lhs, rhs, witness_ratio(lhs, rhs)};
        rec.advisory = true;
        out.push_back(rec.with("t", Tend).with("beta", beta));
    }
}

/// Weighted embedding applied to u = p - Psi (vanishing trace, delta = 0)
/// with weight K(|grad p|), over the whole horizon.
inline void check_weighted_embedding_trajectory(const TrajectoryStats& st,
                                                std::vector<EstimateRecord>& out) {
    const Trajectory& traj = *st.traj;
    const ExponentTable& t = st.table;
    const double rho = t.nu2;

    const auto rho_tr = st.trace(&SnapshotStats::pbar_rho);
    const auto wgrad_tr = st.trace(&SnapshotStats::k_gradpbar2);
    const auto l2_tr = st.trace(&SnapshotStats::pbar_l2);
    const auto winv_tr = st.trace(&SnapshotStats::winv);

    const double lhs =
        std::pow(time_integral(st.times, rho_tr, st.times.front(), st.times.back()), 1.0 / rho);
    double sup_l2 = 0.0, sup_winv = 0.0;
    for (std::size_t k = 0; k < st.snaps.size(); ++k) {
        sup_l2 = std::max(sup_l2, l2_tr[k]);
        sup_winv = std::max(sup_winv, winv_tr[k]);
    }
    const double bracket =
        sup_l2 + std::sqrt(time_integral(st.times, wgrad_tr, st.times.front(), st.times.back()));
    const double rhs = bracket * std::pow(sup_winv, (2.0 - t.s0) / (rho * t.s0));
    out.push_back(EstimateRecord{"weighted-embedding", traj.scenario.id, lhs, rhs,
                                 witness_ratio(lhs, rhs)}
                      .with("r", t.s0)
                      .with("rho", rho));
}

/// Run every trajectory-based check with the scenario's default windows.
inline std::vector<EstimateRecord> evaluate_estimates(const TrajectoryStats& st) {
    const Trajectory& traj = *st.traj;
    std::vector<EstimateRecord> out;
    const double Tend = st.times.back();
    const double T0 = 0.5 * Tend;
    const double Twin = Tend - T0;

    if (Tend >= 1.0) check_gronwall(st, out);
    check_linfty_pressure(st, T0, Twin, {0.25, 0.5, 0.75}, out);
    check_grad_ls(st, T0, Twin, traj.scenario.theta, out);
    check_grad_linfty(st, T0, Twin, traj.scenario.theta, out);
    check_pt_linfty(st, T0, Twin, traj.scenario.theta, out);
    check_hessian_l2(st, detail::ladder(1.0, Tend), out);
    check_weighted_embedding_trajectory(st, out);

    for (auto& rec : out) {
        rec.with("amplitude", traj.scenario.data.amplitude)
            .with("cells", double(traj.scenario.grid.cells));
    }
    return out;
}

}  // namespace forch

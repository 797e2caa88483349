#pragma once

/// Scenario sweeps: run families of solves (concurrently when a worker
/// width is configured), evaluate the selected estimate checks, and
/// aggregate witness ratios into per-estimate maxima, refinement
/// stability factors and cross-amplitude spreads.  Every sweep also runs
/// the exactness-anchored battery (constitutive inequalities, the
/// fast-geometric iteration, embedding invariances, zero-data
/// dissipation); the sweep fails when any of those fail.

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "forchheimer/estimates.hpp"
#include "forchheimer/io.hpp"
#include "forchheimer/exact_checks.hpp"
#include "forchheimer/scenario_io.hpp"

namespace forch {

struct ScenarioMeta {
    std::string id;
    std::string preset;
    double amplitude = 0.0;
    int cells = 0;
};

struct EstimateAggregate {
    std::string estimate;
    std::size_t records = 0;
    double max_ratio = 0.0;
    double min_ratio = std::numeric_limits<double>::infinity();
    bool all_finite = true;
    // worst (fine/coarse) of per-scenario max ratios across grid pairs
    double refinement_factor = 0.0;
    double refinement_factor_min = std::numeric_limits<double>::infinity();
    // worst max/min of per-scenario max ratios across amplitudes
    double amplitude_spread = 0.0;
};

struct ExactnessBattery {
    bool constitutive_ok = false;
    bool degiorgi_ok = false;
    double sobolev_amplitude_invariance = 1.0;  // must be <= 1e-10
    double sobolev_dilation_invariance = 1.0;   // must be <= 1e-8
    double embedding_amplitude_invariance = 1.0;
    bool dissipation_ok = false;

    bool ok() const {
        return constitutive_ok && degiorgi_ok && dissipation_ok &&
               sobolev_amplitude_invariance <= 1e-10 && sobolev_dilation_invariance <= 1e-8 &&
               embedding_amplitude_invariance <= 1e-10;
    }
};

struct MemoryLossProbe {
    double sup_p_rel = 0.0;
    double sup_grad_rel = 0.0;
    double pt_window_rel = 0.0;
    double worst() const { return std::max({sup_p_rel, sup_grad_rel, pt_window_rel}); }
};

struct SweepReport {
    std::vector<ScenarioMeta> scenarios;
    std::vector<EstimateRecord> records;
    std::vector<EstimateAggregate> aggregates;
    ExactnessBattery exactness;
    std::vector<std::string> failures;  // per-scenario failures, sweep continues
};

inline int worker_width() {
    if (const char* env = std::getenv("FORCH_THREADS")) {
        const int w = std::atoi(env);
        if (w >= 1) return w;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : int(hc);
}

/// Default verification family: two data presets x four amplitudes x two
/// grids at horizon 10.  The time step is fixed across grids so spatial
/// refinement is isolated; snapshots land every 0.05.
inline std::vector<Scenario> default_family(const ForchheimerLaw& law) {
    std::vector<Scenario> out;
    for (const char* preset : {"periodic", "linear-drift"})
        for (double amp : {0.5, 1.0, 2.0, 4.0})
            for (int cells : {32, 64}) {
                Scenario sc;
                sc.law = law;
                sc.grid = {2, cells};
                sc.data.preset = data_preset_from_string(preset);
                sc.data.dim = 2;
                sc.data.amplitude = amp;
                sc.data.omega = std::numbers::pi;
                sc.init = {InitPreset::Zero, 0.0};
                sc.horizon = 10.0;
                sc.dt = 0.01;
                sc.snapshot_stride = 5;
                sc.rho = 0.125;
                char buf[96];
                std::snprintf(buf, sizeof buf, "%s-a%g-n%d", preset, amp, cells);
                sc.id = buf;
                out.push_back(sc);
            }
    return out;
}

inline bool estimate_selected(const std::string& name, const std::vector<std::string>& sel) {
    for (const auto& s : sel)
        if (s == "all" || name == s || name.rfind(s + "-", 0) == 0) return true;
    return false;
}

namespace detail {

inline ScenarioMeta meta_of(const Scenario& sc) {
    return {sc.id, to_string(sc.data.preset), sc.data.amplitude, sc.grid.cells};
}

}  // namespace detail

/// Solve one scenario and evaluate the selected estimates.
inline std::vector<EstimateRecord> verify_scenario(const Scenario& sc,
                                                   const std::vector<std::string>& selection) {
    const int n = sc.grid.dim;
    const double alpha = sc.alpha > 0.0 ? sc.alpha : default_alpha(n == 1 ? 2 : sc.grid.dim,
                                                                  sc.law);
    const double s0 = sc.s0 > 0.0 ? sc.s0 : default_s0(n == 1 ? 2 : sc.grid.dim);
    const ExponentTable table =
        build_table(n == 1 ? 2 : sc.grid.dim, sc.law, alpha, s0);

    const Trajectory traj = solve_ibvp(sc);
    const TrajectoryStats stats = build_stats(traj, table);
    std::vector<EstimateRecord> all = evaluate_estimates(stats);
    std::vector<EstimateRecord> keep;
    for (auto& r : all)
        if (estimate_selected(r.estimate, selection)) keep.push_back(std::move(r));
    return keep;
}

/// The exactness-anchored block run with every sweep.
inline ExactnessBattery run_exactness_battery(const ForchheimerLaw& law, std::uint64_t seed) {
    ExactnessBattery out;
    out.constitutive_ok = verify_constitutive(law, make_scan_grid(1e-6, 1e6, 2000)).ok();
    out.degiorgi_ok = degiorgi_sufficiency_battery(100, 0.9, seed).ok();

    const AnalyticFamily fam{1.3};
    const auto sob = check_parabolic_sobolev(fam, 2, law, 2.0, 1.0, 24, 17);
    out.sobolev_amplitude_invariance = sob.amplitude_invariance;
    out.sobolev_dilation_invariance = sob.dilation_invariance;
    const auto emb = check_weighted_embedding(fam, 2, law, 1.5, 1.0, 24, 17);
    out.embedding_amplitude_invariance = emb.amplitude_invariance;

    Scenario zero;
    zero.law = law;
    zero.grid = {2, 16};
    zero.data = {DataPreset::Zero, 2, 0.0, 0.0};
    zero.init = {InitPreset::SinProduct, 1.0};
    zero.dt = 1e-3;
    zero.horizon = 0.1;
    zero.id = "dissipation-probe";
    const Trajectory traj = solve_ibvp(zero);
    out.dissipation_ok = true;
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& st : traj.steps) {
        if (st.l2_squared > prev + 1e-14) out.dissipation_ok = false;
        prev = st.l2_squared;
    }
    return out;
}

inline std::vector<EstimateAggregate> aggregate_records(
    const std::vector<EstimateRecord>& records, const std::vector<ScenarioMeta>& metas) {
    std::map<std::string, EstimateAggregate> by_name;
    // per (estimate, scenario) max ratio
    std::map<std::pair<std::string, std::string>, double> scen_max;
    for (const auto& r : records) {
        if (r.advisory) continue;
        auto& agg = by_name[r.estimate];
        agg.estimate = r.estimate;
        ++agg.records;
        if (!std::isfinite(r.ratio)) agg.all_finite = false;
        agg.max_ratio = std::max(agg.max_ratio, r.ratio);
        agg.min_ratio = std::min(agg.min_ratio, r.ratio);
        auto& sm = scen_max[{r.estimate, r.scenario_id}];
        sm = std::max(sm, r.ratio);
    }

    std::map<std::string, ScenarioMeta> meta_by_id;
    for (const auto& m : metas) meta_by_id[m.id] = m;

    for (auto& [name, agg] : by_name) {
        // refinement stability: pair scenarios differing only in cells
        std::map<std::pair<std::string, double>, std::map<int, double>> groups;
        // amplitude marginals: max ratio over presets/grids per amplitude
        // (steady-state scenarios drive some lhs to solver noise; the
        // marginal keeps every amplitude's statistic above that floor)
        std::map<double, double> amp_marginal;
        for (const auto& [key, v] : scen_max) {
            if (key.first != name) continue;
            const auto it = meta_by_id.find(key.second);
            if (it == meta_by_id.end()) continue;
            const ScenarioMeta& m = it->second;
            groups[{m.preset, m.amplitude}][m.cells] = v;
            auto& marg = amp_marginal[m.amplitude];
            marg = std::max(marg, v);
        }
        for (const auto& [gk, by_cells] : groups) {
            if (by_cells.size() < 2) continue;
            const auto lo = by_cells.begin();
            const auto hi = std::prev(by_cells.end());
            if (lo->second > 0.0) {
                const double f = hi->second / lo->second;
                agg.refinement_factor = std::max(agg.refinement_factor, f);
                agg.refinement_factor_min = std::min(agg.refinement_factor_min, f);
            }
        }
        if (amp_marginal.size() >= 2) {
            double mx = 0.0, mn = std::numeric_limits<double>::infinity();
            for (const auto& [amp, v] : amp_marginal) {
                mx = std::max(mx, v);
                mn = std::min(mn, v);
            }
            if (mn > 0.0) agg.amplitude_spread = mx / mn;
        }
    }

    std::vector<EstimateAggregate> out;
    for (auto& [name, agg] : by_name) out.push_back(agg);
    return out;
}

/// Run a family of scenarios and aggregate.  Individual scenario
/// failures are recorded and the sweep continues.
inline SweepReport run_sweep(const std::vector<Scenario>& family,
                             const std::vector<std::string>& selection, int threads = 0) {
    if (family.empty()) throw std::invalid_argument("run_sweep: empty family");
    if (selection.empty()) throw std::invalid_argument("run_sweep: empty estimate selection");

    SweepReport report;
    for (const auto& sc : family) report.scenarios.push_back(detail::meta_of(sc));

    const int width = threads > 0 ? threads : worker_width();
    std::atomic<std::size_t> next{0};
    std::mutex sink;
    std::vector<std::vector<EstimateRecord>> per_scenario(family.size());

    auto worker = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= family.size()) return;
            try {
                per_scenario[k] = verify_scenario(family[k], selection);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(sink);
                report.failures.push_back(family[k].id + ": " + e.what());
            }
        }
    };
    if (width <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < width; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (auto& recs : per_scenario)
        for (auto& r : recs) report.records.push_back(std::move(r));
    report.aggregates = aggregate_records(report.records, report.scenarios);
    report.exactness = run_exactness_battery(family.front().law, family.front().seed);
    return report;
}

/// Two initial data under the same periodic boundary data; tail
/// quantities must have forgotten the initial difference.
inline MemoryLossProbe memory_loss_probe(const ForchheimerLaw& law, int cells = 32,
                                         double horizon = 10.0) {
    Scenario base;
    base.law = law;
    base.grid = {2, cells};
    base.data = {DataPreset::Periodic, 2, 1.0, std::numbers::pi};
    base.horizon = horizon;
    base.dt = 0.01;
    base.snapshot_stride = 5;
    base.rho = 0.125;

    Scenario a = base;
    a.init = {InitPreset::Zero, 0.0};
    a.id = "memory-zero";
    Scenario b = base;
    b.init = {InitPreset::Bump, 1.0};
    b.id = "memory-bump";

    const ExponentTable table = build_table(2, law, default_alpha(2, law), default_s0(2));
    const Trajectory ta = solve_ibvp(a), tb = solve_ibvp(b);
    const TrajectoryStats sa = build_stats(ta, table), sb = build_stats(tb, table);

    const double w = base.effective_tail();
    const double t0 = horizon - w;
    auto rel = [](double x, double y) {
        const double scale = std::max({std::abs(x), std::abs(y), 1e-300});
        return std::abs(x - y) / scale;
    };
    MemoryLossProbe probe;
    probe.sup_p_rel = rel(window_max(sa.times, sa.trace(&SnapshotStats::max_p_inner), t0, horizon),
                          window_max(sb.times, sb.trace(&SnapshotStats::max_p_inner), t0, horizon));
    probe.sup_grad_rel =
        rel(window_max(sa.times, sa.trace(&SnapshotStats::max_grad_inner), t0, horizon),
            window_max(sb.times, sb.trace(&SnapshotStats::max_grad_inner), t0, horizon));
    probe.pt_window_rel =
        rel(time_integral(sa.times, sa.trace(&SnapshotStats::pbar_t_sq), horizon - 1.0, horizon),
            time_integral(sb.times, sb.trace(&SnapshotStats::pbar_t_sq), horizon - 1.0, horizon));
    return probe;
}

/// Report serialization (records array plus aggregates).
inline json report_to_json(const SweepReport& report) {
    json j;
    j["scenarios"] = json::array();
    for (const auto& m : report.scenarios)
        j["scenarios"].push_back({{"id", m.id},
                                  {"preset", m.preset},
                                  {"amplitude", m.amplitude},
                                  {"cells", m.cells}});
    j["records"] = json::array();
    for (const auto& r : report.records) {
        json params = json::object();
        for (const auto& [k, v] : r.params) params[k] = v;
        j["records"].push_back({{"estimate", r.estimate},
                                {"scenario", r.scenario_id},
                                {"lhs", r.lhs},
                                {"rhs", r.rhs},
                                {"ratio", r.ratio},
                                {"advisory", r.advisory},
                                {"params", std::move(params)}});
    }
    j["aggregates"] = json::array();
    for (const auto& a : report.aggregates)
        j["aggregates"].push_back({{"estimate", a.estimate},
                                   {"records", a.records},
                                   {"max_ratio", a.max_ratio},
                                   {"min_ratio", a.min_ratio},
                                   {"all_finite", a.all_finite},
                                   {"refinement_factor", a.refinement_factor},
                                   {"refinement_factor_min", a.refinement_factor_min},
                                   {"amplitude_spread", a.amplitude_spread}});
    j["exactness"] = {{"constitutive_ok", report.exactness.constitutive_ok},
                      {"degiorgi_ok", report.exactness.degiorgi_ok},
                      {"sobolev_amplitude_invariance",
                       report.exactness.sobolev_amplitude_invariance},
                      {"sobolev_dilation_invariance",
                       report.exactness.sobolev_dilation_invariance},
                      {"embedding_amplitude_invariance",
                       report.exactness.embedding_amplitude_invariance},
                      {"dissipation_ok", report.exactness.dissipation_ok},
                      {"ok", report.exactness.ok()}};
    j["failures"] = report.failures;
    return j;
}

}  // namespace forch

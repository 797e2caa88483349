// forch: constitutive evaluation, exponent tables, IBVP solves and
// witness-ratio verification sweeps from one entry point.
//
// Subcommands: kfun, exponents, solve, verify, sweep, report.
// Exit codes: 0 success, 1 numeric/verification failure, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "forchheimer/estimates.hpp"
#include "forchheimer/exponents.hpp"
#include "forchheimer/io.hpp"
#include "forchheimer/exact_checks.hpp"
#include "forchheimer/scenario_io.hpp"
#include "forchheimer/sweep.hpp"

namespace fs = std::filesystem;
using namespace forch;

namespace {

struct Overrides {
    int cells = 0;
    double dt = 0.0;
    double horizon = 0.0;
    double alpha = 0.0;
    double s0 = 0.0;
    double tail = 0.0;
    int threads = 0;

    void apply(Scenario& sc) const {
        if (cells > 0) sc.grid.cells = cells;
        if (dt > 0.0) sc.dt = dt;
        if (horizon > 0.0) sc.horizon = horizon;
        if (alpha > 0.0) sc.alpha = alpha;
        if (s0 > 0.0) sc.s0 = s0;
        if (tail > 0.0) sc.tail_window = tail;
    }
};

void add_override_flags(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--cells", ov.cells, "Override cells per side");
    cmd->add_option("--dt", ov.dt, "Override time step");
    cmd->add_option("--T", ov.horizon, "Override horizon");
    cmd->add_option("--alpha", ov.alpha, "Override alpha");
    cmd->add_option("--s0", ov.s0, "Override s0");
    cmd->add_option("--tail", ov.tail, "Override tail window");
    cmd->add_option("--threads", ov.threads, "Worker width (FORCH_THREADS overrides)");
}

ExponentTable table_for(const Scenario& sc) {
    const int n = sc.grid.dim == 1 ? 2 : sc.grid.dim;
    const double alpha = sc.alpha > 0.0 ? sc.alpha : default_alpha(n, sc.law);
    const double s0 = sc.s0 > 0.0 ? sc.s0 : default_s0(n);
    return build_table(n, sc.law, alpha, s0);
}

json table_json(const ExponentTable& t) {
    json j;
    for (const auto& [name, value] : t.entries()) j[name] = value;
    j["mu1_at_2"] = t.mu1(2.0);
    j["mu2_at_2"] = t.mu2(2.0);
    return j;
}

// Reconstruct a small exact fraction when the value is one (continued
// fractions, denominators up to 4096); table entries are rational for
// rational inputs and read better as fractions.
std::string fraction_note(double v) {
    double x = v;
    long long p0 = 1, q0 = 0, p1 = std::llround(std::floor(x)), q1 = 1;
    double frac = x - std::floor(x);
    for (int it = 0; it < 24 && q1 <= 4096; ++it) {
        if (std::abs(double(p1) / double(q1) - v) <= 1e-12 * std::max(1.0, std::abs(v))) {
            if (q1 == 1 && v == double(p1)) return "";  // exact integer, nothing to add
            char buf[48];
            if (q1 == 1)
                std::snprintf(buf, sizeof buf, "  (= %lld)", p1);
            else
                std::snprintf(buf, sizeof buf, "  (= %lld/%lld)", p1, q1);
            return buf;
        }
        if (frac < 1e-14) break;
        x = 1.0 / frac;
        const long long a = std::llround(std::floor(x));
        frac = x - std::floor(x);
        const long long p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    return "";
}

void print_table(const ExponentTable& t) {
    for (const auto& [name, value] : t.entries())
        std::printf("%-12s %s%s\n", name.c_str(), fmt17(value).c_str(),
                    fraction_note(value).c_str());
    std::printf("%-12s %s%s\n", "mu1(2)", fmt17(t.mu1(2.0)).c_str(),
                fraction_note(t.mu1(2.0)).c_str());
    std::printf("%-12s %s%s\n", "mu2(2)", fmt17(t.mu2(2.0)).c_str(),
                fraction_note(t.mu2(2.0)).c_str());
}

int run_kfun(const std::string& g_text, double xi, double xi_min, double xi_max, int points,
             const std::string& out_path) {
    const ForchheimerLaw law = parse_law(g_text);
    std::vector<double> grid;
    if (xi >= 0.0) {
        grid.push_back(xi);
    } else {
        grid = make_scan_grid(std::max(xi_min, 1e-12), xi_max, std::size_t(points));
    }
    const std::string csv = kfun_csv(law, grid);
    if (out_path.empty())
        std::cout << csv;
    else
        write_text_file(out_path, csv);
    return 0;
}

int run_solve(const std::string& scenario_path, const std::string& out_dir,
              const Overrides& ov) {
    ScenarioConfig cfg = load_scenario(scenario_path);
    ov.apply(cfg.scenario);
    cfg.scenario.validate();
    const Trajectory traj = solve_ibvp(cfg.scenario);

    fs::create_directories(out_dir);
    write_text_file((fs::path(out_dir) / "trajectory.csv").string(), trajectory_csv(traj));
    write_text_file((fs::path(out_dir) / "metadata.json").string(),
                    trajectory_metadata(traj).dump(2) + "\n");

    const ExponentTable table = table_for(cfg.scenario);
    const TrajectoryStats stats = build_stats(traj, table);
    write_text_file((fs::path(out_dir) / "functionals.csv").string(),
                    functional_trace_csv(stats));
    std::cout << "solved " << cfg.scenario.id << ": " << traj.steps.size() << " steps, "
              << traj.snapshots.size() << " snapshots -> " << out_dir << "\n";
    return 0;
}

int run_verify(const std::string& scenario_path, const std::string& out_dir,
               const Overrides& ov) {
    ScenarioConfig cfg = load_scenario(scenario_path);
    ov.apply(cfg.scenario);
    cfg.scenario.validate();

    SweepReport report;
    report.scenarios.push_back(
        {cfg.scenario.id, to_string(cfg.scenario.data.preset), cfg.scenario.data.amplitude,
         cfg.scenario.grid.cells});
    report.records = verify_scenario(cfg.scenario, cfg.estimates);
    report.aggregates = aggregate_records(report.records, report.scenarios);
    report.exactness = run_exactness_battery(cfg.scenario.law, cfg.scenario.seed);

    fs::create_directories(out_dir);
    write_text_file((fs::path(out_dir) / "report.json").string(),
                    report_to_json(report).dump(2) + "\n");
    write_text_file((fs::path(out_dir) / "records.csv").string(), records_csv(report.records));

    std::size_t asserted = 0;
    for (const auto& r : report.records)
        if (!r.advisory) ++asserted;
    std::cout << "verified " << cfg.scenario.id << ": " << asserted << " ratio records, "
              << "exactness " << (report.exactness.ok() ? "ok" : "FAILED") << " -> " << out_dir
              << "\n";
    return report.exactness.ok() ? 0 : 1;
}

int run_sweep_cmd(const std::string& g_text, const std::string& out_dir, const Overrides& ov,
                  bool memory_loss) {
    const ForchheimerLaw law = parse_law(g_text);
    std::vector<Scenario> family = default_family(law);
    for (auto& sc : family) ov.apply(sc);

    SweepReport report = run_sweep(family, {"all"}, ov.threads);

    fs::create_directories(out_dir);
    json j = report_to_json(report);
    if (memory_loss) {
        const MemoryLossProbe probe = memory_loss_probe(law);
        j["memory_loss"] = {{"sup_p_rel", probe.sup_p_rel},
                            {"sup_grad_rel", probe.sup_grad_rel},
                            {"pt_window_rel", probe.pt_window_rel},
                            {"worst", probe.worst()}};
    }
    write_text_file((fs::path(out_dir) / "report.json").string(), j.dump(2) + "\n");
    write_text_file((fs::path(out_dir) / "records.csv").string(), records_csv(report.records));

    std::cout << "sweep: " << report.records.size() << " records from "
              << report.scenarios.size() << " scenarios";
    if (!report.failures.empty()) std::cout << ", " << report.failures.size() << " failures";
    std::cout << ", exactness " << (report.exactness.ok() ? "ok" : "FAILED") << " -> " << out_dir
              << "\n";
    for (const auto& f : report.failures) std::cout << "  failure: " << f << "\n";
    return report.exactness.ok() ? 0 : 1;
}

int run_report(const std::string& in_path) {
    std::ifstream in(in_path);
    if (!in) throw std::runtime_error("cannot open report: " + in_path);
    json j;
    in >> j;

    std::printf("%-28s %9s %12s %12s %12s %10s\n", "estimate", "records", "max-ratio",
                "refine-fac", "amp-spread", "finite");
    for (const auto& a : j.at("aggregates")) {
        std::printf("%-28s %9zu %12.5g %12.5g %12.5g %10s\n",
                    a.at("estimate").get<std::string>().c_str(),
                    a.at("records").get<std::size_t>(), a.at("max_ratio").get<double>(),
                    a.at("refinement_factor").get<double>(),
                    a.at("amplitude_spread").get<double>(),
                    a.at("all_finite").get<bool>() ? "yes" : "NO");
    }
    const auto& ex = j.at("exactness");
    std::printf("exactness: constitutive=%s degiorgi=%s dissipation=%s "
                "sobolev-inv=%.2e/%.2e embedding-inv=%.2e -> %s\n",
                ex.at("constitutive_ok").get<bool>() ? "ok" : "FAIL",
                ex.at("degiorgi_ok").get<bool>() ? "ok" : "FAIL",
                ex.at("dissipation_ok").get<bool>() ? "ok" : "FAIL",
                ex.at("sobolev_amplitude_invariance").get<double>(),
                ex.at("sobolev_dilation_invariance").get<double>(),
                ex.at("embedding_amplitude_invariance").get<double>(),
                ex.at("ok").get<bool>() ? "ok" : "FAILED");
    if (j.contains("memory_loss")) {
        const auto& m = j.at("memory_loss");
        std::printf("memory-loss probe: sup|p| %.3e, sup|grad p| %.3e, pt-window %.3e\n",
                    m.at("sup_p_rel").get<double>(), m.at("sup_grad_rel").get<double>(),
                    m.at("pt_window_rel").get<double>());
    }
    if (j.contains("failures"))
        for (const auto& f : j.at("failures"))
            std::printf("scenario failure: %s\n", f.get<std::string>().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized Forchheimer flow simulator and estimate verifier"};
    app.require_subcommand(1);

    // kfun
    auto* kfun = app.add_subcommand("kfun", "Evaluate s, K, K', H on a xi grid (CSV)");
    std::string kfun_g = "1+s", kfun_out;
    double kfun_xi = -1.0, kfun_min = 1e-6, kfun_max = 1e6;
    int kfun_points = 1000;
    kfun->add_option("--g", kfun_g, "Forchheimer polynomial, e.g. \"1+s+s^2\"");
    kfun->add_option("--xi", kfun_xi, "Single evaluation point");
    kfun->add_option("--xi-min", kfun_min, "Scan lower bound (log spacing)");
    kfun->add_option("--xi-max", kfun_max, "Scan upper bound");
    kfun->add_option("--points", kfun_points, "Scan size");
    kfun->add_option("--out", kfun_out, "Output CSV path (stdout if omitted)");

    // exponents
    auto* expo = app.add_subcommand("exponents", "Print the derived exponent table");
    std::string expo_g = "1+s", expo_json;
    int expo_n = 2;
    double expo_alpha = 0.0, expo_s0 = 0.0;
    expo->add_option("--n", expo_n, "Spatial dimension (>= 2)");
    expo->add_option("--g", expo_g, "Forchheimer polynomial");
    expo->add_option("--alpha", expo_alpha, "Integrability exponent (default: admissible)");
    expo->add_option("--s0", expo_s0, "Auxiliary exponent in (2n/(n+2), 2)");
    expo->add_option("--json-out", expo_json, "Also write the table as JSON");

    // solve / verify
    std::string solve_scenario, solve_out = "out";
    Overrides solve_ov;
    auto* solve = app.add_subcommand("solve", "Solve one scenario, export trajectory");
    solve->add_option("--scenario", solve_scenario, "Scenario config JSON")->required();
    solve->add_option("--out", solve_out, "Output directory");
    add_override_flags(solve, solve_ov);

    std::string verify_scenario_path, verify_out = "out";
    Overrides verify_ov;
    auto* verify = app.add_subcommand("verify", "Verify estimates on one scenario");
    verify->add_option("--scenario", verify_scenario_path, "Scenario config JSON")->required();
    verify->add_option("--out", verify_out, "Output directory");
    add_override_flags(verify, verify_ov);

    // sweep
    std::string sweep_g = "1+s", sweep_out = "out";
    Overrides sweep_ov;
    bool sweep_memory = false;
    auto* sweep = app.add_subcommand("sweep", "Run the default verification family");
    sweep->add_option("--g", sweep_g, "Forchheimer polynomial");
    sweep->add_option("--out", sweep_out, "Output directory");
    sweep->add_flag("--memory-loss", sweep_memory, "Also run the memory-loss probe");
    add_override_flags(sweep, sweep_ov);

    // report
    std::string report_in;
    auto* report = app.add_subcommand("report", "Summarize a previously written report");
    report->add_option("--in", report_in, "report.json path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (kfun->parsed())
            return run_kfun(kfun_g, kfun_xi, kfun_min, kfun_max, kfun_points, kfun_out);
        if (expo->parsed()) {
            const ForchheimerLaw law = parse_law(expo_g);
            const double alpha = expo_alpha > 0.0 ? expo_alpha : default_alpha(expo_n, law);
            const double s0 = expo_s0 > 0.0 ? expo_s0 : default_s0(expo_n);
            const ExponentTable t = build_table(expo_n, law, alpha, s0);
            print_table(t);
            const std::string dumped = table_json(t).dump(2) + "\n";
            std::cout << dumped;
            if (!expo_json.empty()) write_text_file(expo_json, dumped);
            return 0;
        }
        if (solve->parsed()) return run_solve(solve_scenario, solve_out, solve_ov);
        if (verify->parsed()) return run_verify(verify_scenario_path, verify_out, verify_ov);
        if (sweep->parsed()) return run_sweep_cmd(sweep_g, sweep_out, sweep_ov, sweep_memory);
        if (report->parsed()) return run_report(report_in);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

#pragma once

/// Scenario configuration as a JSON document.  One schema serves solve,
/// verify and sweep:
///
///   {
///     "id": "periodic-a2-n32",
///     "law": {"exponents": [0, 1], "coefficients": [1, 1]},
///     "grid": {"dim": 2, "cells": 32},
///     "time": {"T": 10.0, "dt": 0.01, "stride": 5},
///     "data": {"preset": "periodic", "amplitude": 2.0, "params": {"omega": 3.14}},
///     "init": {"preset": "zero", "amplitude": 1.0},
///     "interior": {"rho": 0.125},
///     "solver": {"picard_tol": 1e-8, "picard_cap": 50},
///     "source": {"manufactured": false},
///     "alpha": 2.0, "s0": 1.5, "theta": 0.5,
///     "estimates": ["all"],
///     "tail": {"window": 2.5},
///     "seed": 12345
///   }
///
/// Missing optional keys take the defaults above; unknown keys are
/// rejected so typos never silently change a run.

#include <json.hpp>

#include <fstream>
#include <string>

#include "forchheimer/solver.hpp"

namespace forch {

using json = nlohmann::json;

struct ScenarioConfig {
    Scenario scenario;
    std::vector<std::string> estimates = {"all"};
};

namespace detail {

inline void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                           const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
    }
}

}  // namespace detail

inline ScenarioConfig scenario_from_json(const json& j) {
    detail::reject_unknown(j,
                           {"id", "law", "grid", "time", "data", "init", "interior", "solver",
                            "source", "alpha", "s0", "theta", "estimates", "tail", "seed"},
                           "top level");
    ScenarioConfig cfg;
    Scenario& sc = cfg.scenario;

    sc.id = j.value("id", std::string("scenario"));

    if (!j.contains("law")) throw std::invalid_argument("config: missing 'law'");
    {
        const json& lj = j.at("law");
        detail::reject_unknown(lj, {"exponents", "coefficients", "g"}, "law");
        if (lj.contains("g")) {
            sc.law = parse_law(lj.at("g").get<std::string>());
        } else {
            sc.law.exponents = lj.at("exponents").get<std::vector<double>>();
            sc.law.coefficients = lj.at("coefficients").get<std::vector<double>>();
            sc.law.validate();
        }
    }
    {
        const json& gj = j.value("grid", json::object());
        detail::reject_unknown(gj, {"dim", "cells"}, "grid");
        sc.grid.dim = gj.value("dim", 2);
        sc.grid.cells = gj.value("cells", 32);
    }
    {
        const json& tj = j.value("time", json::object());
        detail::reject_unknown(tj, {"T", "dt", "stride"}, "time");
        sc.horizon = tj.value("T", 1.0);
        sc.dt = tj.value("dt", 0.0);
        sc.snapshot_stride = tj.value("stride", 1);
    }
    {
        const json& dj = j.value("data", json::object());
        detail::reject_unknown(dj, {"preset", "amplitude", "params"}, "data");
        sc.data.preset = data_preset_from_string(dj.value("preset", std::string("zero")));
        sc.data.dim = sc.grid.dim;
        sc.data.amplitude = dj.value("amplitude", 1.0);
        const json& pj = dj.value("params", json::object());
        detail::reject_unknown(pj, {"omega"}, "data.params");
        sc.data.omega = pj.value("omega", std::numbers::pi);
    }
    {
        const json& ij = j.value("init", json::object());
        detail::reject_unknown(ij, {"preset", "amplitude"}, "init");
        sc.init.preset = init_preset_from_string(ij.value("preset", std::string("data")));
        sc.init.amplitude = ij.value("amplitude", 1.0);
    }
    {
        const json& ij = j.value("interior", json::object());
        detail::reject_unknown(ij, {"rho"}, "interior");
        sc.rho = ij.value("rho", 0.125);
    }
    {
        const json& sj = j.value("solver", json::object());
        detail::reject_unknown(sj, {"picard_tol", "picard_cap"}, "solver");
        sc.picard.tol = sj.value("picard_tol", 1e-8);
        sc.picard.cap = sj.value("picard_cap", 50);
    }
    {
        const json& sj = j.value("source", json::object());
        detail::reject_unknown(sj, {"manufactured"}, "source");
        sc.manufactured = sj.value("manufactured", false);
    }
    sc.alpha = j.value("alpha", 0.0);
    sc.s0 = j.value("s0", 0.0);
    sc.theta = j.value("theta", 0.5);
    {
        const json& tj = j.value("tail", json::object());
        detail::reject_unknown(tj, {"window"}, "tail");
        sc.tail_window = tj.value("window", 0.0);
    }
    sc.seed = j.value("seed", std::uint64_t{12345});
    if (j.contains("estimates")) cfg.estimates = j.at("estimates").get<std::vector<std::string>>();
    sc.validate();
    return cfg;
}

inline json scenario_to_json(const ScenarioConfig& cfg) {
    const Scenario& sc = cfg.scenario;
    json j;
    j["id"] = sc.id;
    j["law"] = {{"exponents", sc.law.exponents}, {"coefficients", sc.law.coefficients}};
    j["grid"] = {{"dim", sc.grid.dim}, {"cells", sc.grid.cells}};
    j["time"] = {{"T", sc.horizon}, {"dt", sc.dt}, {"stride", sc.snapshot_stride}};
    j["data"] = {{"preset", to_string(sc.data.preset)},
                 {"amplitude", sc.data.amplitude},
                 {"params", {{"omega", sc.data.omega}}}};
    j["init"] = {{"preset", to_string(sc.init.preset)}, {"amplitude", sc.init.amplitude}};
    j["interior"] = {{"rho", sc.rho}};
    j["solver"] = {{"picard_tol", sc.picard.tol}, {"picard_cap", sc.picard.cap}};
    j["source"] = {{"manufactured", sc.manufactured}};
    j["alpha"] = sc.alpha;
    j["s0"] = sc.s0;
    j["theta"] = sc.theta;
    j["estimates"] = cfg.estimates;
    j["tail"] = {{"window", sc.tail_window}};
    j["seed"] = sc.seed;
    return j;
}

inline ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scenario config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("malformed scenario config " + path + ": " + e.what());
    }
    return scenario_from_json(j);
}

/// Trajectory metadata: grid, dt, and per-step diagnostics.
inline json trajectory_metadata(const Trajectory& traj) {
    const Scenario& sc = traj.scenario;
    json j;
    j["scenario"] = scenario_to_json({sc, {}});
    j["dt"] = sc.effective_dt();
    j["snapshots"] = traj.snapshots.size();
    j["steps"] = traj.steps.size();
    json diag = json::array();
    for (const auto& st : traj.steps)
        diag.push_back({{"t", st.time},
                        {"picard_iterations", st.picard_iterations},
                        {"residual", st.final_residual},
                        {"monotone", st.residual_monotone},
                        {"l2_squared", st.l2_squared}});
    j["diagnostics"] = std::move(diag);
    return j;
}

}  // namespace forch

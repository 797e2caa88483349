#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <numbers>

#include "forchheimer/io.hpp"
#include "forchheimer/scenario_io.hpp"
#include "forchheimer/sweep.hpp"

using namespace forch;
using Catch::Matchers::WithinAbs;

TEST_CASE("scenario config round trip") {
    ScenarioConfig cfg;
    Scenario& sc = cfg.scenario;
    sc.id = "roundtrip";
    sc.law = parse_law("1+0.5*s+2*s^2");
    sc.grid = {2, 24};
    sc.data = {DataPreset::Periodic, 2, 1.75, 2.5};
    sc.init = {InitPreset::Bump, 0.5};
    sc.horizon = 3.0;
    sc.dt = 0.0025;
    sc.snapshot_stride = 20;
    sc.rho = 0.2;
    sc.picard = {1e-9, 40};
    sc.alpha = 2.5;
    sc.s0 = 1.4;
    sc.theta = 0.25;
    sc.tail_window = 0.75;
    sc.seed = 777;
    cfg.estimates = {"pressure-linfty", "grad-linfty"};

    const json j = scenario_to_json(cfg);
    const ScenarioConfig back = scenario_from_json(j);
    const Scenario& b = back.scenario;
    REQUIRE(b.id == sc.id);
    REQUIRE(b.law.exponents == sc.law.exponents);
    REQUIRE(b.law.coefficients == sc.law.coefficients);
    REQUIRE(b.grid.dim == sc.grid.dim);
    REQUIRE(b.grid.cells == sc.grid.cells);
    REQUIRE(b.data.preset == sc.data.preset);
    REQUIRE(b.data.amplitude == sc.data.amplitude);
    REQUIRE(b.data.omega == sc.data.omega);
    REQUIRE(b.init.preset == sc.init.preset);
    REQUIRE(b.horizon == sc.horizon);
    REQUIRE(b.dt == sc.dt);
    REQUIRE(b.snapshot_stride == sc.snapshot_stride);
    REQUIRE(b.rho == sc.rho);
    REQUIRE(b.picard.tol == sc.picard.tol);
    REQUIRE(b.picard.cap == sc.picard.cap);
    REQUIRE(b.alpha == sc.alpha);
    REQUIRE(b.s0 == sc.s0);
    REQUIRE(b.theta == sc.theta);
    REQUIRE(b.tail_window == sc.tail_window);
    REQUIRE(b.seed == sc.seed);
    REQUIRE(back.estimates == cfg.estimates);

    // a second serialization is byte-identical
    REQUIRE(scenario_to_json(back).dump() == j.dump());
}

TEST_CASE("unknown config keys are rejected") {
    json j;
    j["law"] = {{"g", "1+s"}};
    j["grd"] = {{"cells", 32}};
    REQUIRE_THROWS_AS(scenario_from_json(j), std::invalid_argument);
}

TEST_CASE("deterministic CSV output") {
    Scenario sc;
    sc.law = parse_law("1+s");
    sc.grid = {1, 16};
    sc.data = {DataPreset::Periodic, 1, 1.0, std::numbers::pi};
    sc.init = {InitPreset::Zero, 0.0};
    sc.horizon = 0.1;
    sc.dt = 0.01;
    sc.snapshot_stride = 5;
    const std::string a = trajectory_csv(solve_ibvp(sc));
    const std::string b = trajectory_csv(solve_ibvp(sc));
    REQUIRE(a == b);
    REQUIRE(a.rfind("t,x1,p\n", 0) == 0);

    const auto law = parse_law("1+s");
    REQUIRE(kfun_csv(law, {0.0, 1.0, 2.0}) == kfun_csv(law, {0.0, 1.0, 2.0}));
}

TEST_CASE("estimate selection matching") {
    REQUIRE(estimate_selected("pressure-linfty", {"all"}));
    REQUIRE(estimate_selected("pressure-linfty-smalltime", {"pressure-linfty"}));
    REQUIRE(estimate_selected("grad-ls-sup", {"grad-ls"}));
    REQUIRE_FALSE(estimate_selected("hessian-l2", {"pressure-linfty", "grad-ls"}));
}

TEST_CASE("small sweep aggregates and continues past failures") {
    std::vector<Scenario> family;
    for (int cells : {16, 32})
        for (double amp : {1.0, 2.0}) {
            Scenario sc;
            sc.law = parse_law("1+s");
            sc.grid = {2, cells};
            sc.data = {DataPreset::Periodic, 2, amp, std::numbers::pi};
            sc.init = {InitPreset::Zero, 0.0};
            sc.horizon = 2.0;
            sc.dt = 0.01;
            sc.snapshot_stride = 5;
            char buf[64];
            std::snprintf(buf, sizeof buf, "periodic-a%g-n%d", amp, cells);
            sc.id = buf;
            family.push_back(sc);
        }
    // one broken scenario: Picard cannot converge in one iteration
    Scenario broken = family.front();
    broken.id = "broken";
    broken.picard = {1e-16, 1};
    family.push_back(broken);

    // width 2 exercises the worker pool even on one core
    const SweepReport report = run_sweep(family, {"pressure-linfty", "grad-linfty"}, 2);
    REQUIRE(report.failures.size() == 1);
    REQUIRE(report.records.size() > 0);
    REQUIRE(report.exactness.ok());

    bool seen_pressure = false;
    for (const auto& agg : report.aggregates) {
        CAPTURE(agg.estimate);
        REQUIRE(agg.all_finite);
        if (agg.estimate == "pressure-linfty") {
            seen_pressure = true;
            REQUIRE(agg.records == 12);          // 3 thetas x 4 surviving scenarios
            REQUIRE(agg.refinement_factor > 0.0);  // 16 -> 32 pairs exist
            REQUIRE(agg.amplitude_spread >= 1.0);
        }
    }
    REQUIRE(seen_pressure);

    REQUIRE_THROWS_AS(run_sweep({}, {"all"}, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(run_sweep(family, {}, 1), std::invalid_argument);
}

TEST_CASE("metadata json re-parses to an equivalent scenario") {
    Scenario sc;
    sc.id = "meta";
    sc.law = parse_law("1+s");
    sc.grid = {2, 16};
    sc.data = {DataPreset::Periodic, 2, 2.0, std::numbers::pi};
    sc.init = {InitPreset::Zero, 0.0};
    sc.horizon = 0.1;
    sc.dt = 0.01;
    sc.snapshot_stride = 5;
    const Trajectory traj = solve_ibvp(sc);
    const json meta = trajectory_metadata(traj);
    const Scenario back = scenario_from_json(meta.at("scenario")).scenario;
    REQUIRE(back.id == sc.id);
    REQUIRE(back.law.exponents == sc.law.exponents);
    REQUIRE(back.grid.cells == sc.grid.cells);
    REQUIRE(back.data.preset == sc.data.preset);
    REQUIRE(back.data.amplitude == sc.data.amplitude);
    REQUIRE(back.horizon == sc.horizon);
    REQUIRE(back.dt == sc.dt);
    REQUIRE(meta.at("diagnostics").size() == traj.steps.size());
}

TEST_CASE("records csv shape") {
    std::vector<EstimateRecord> recs;
    recs.push_back(EstimateRecord{"demo", "sc", 1.0, 2.0, 0.5}.with("t", 1.0));
    const std::string csv = records_csv(recs);
    REQUIRE(csv.rfind("estimate,scenario,lhs,rhs,ratio,advisory,params\n", 0) == 0);
    REQUIRE(csv.find("demo,sc,1,2,0.5,0,\"t=1\"") != std::string::npos);
}

#pragma once

/// Deterministic text output: floats at 17 significant digits, fixed
/// column and key order, RFC-4180-style CSV.

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "forchheimer/estimates.hpp"
#include "forchheimer/solver.hpp"

namespace forch {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

/// Snapshot export: columns t, x1[, x2], p.
inline std::string trajectory_csv(const Trajectory& traj) {
    const Grid& g = traj.scenario.grid;
    std::string out = g.dim == 1 ? "t,x1,p\n" : "t,x1,x2,p\n";
    for (const auto& snap : traj.snapshots)
        for (int j = 0; j <= (g.dim == 2 ? g.cells : 0); ++j)
            for (int i = 0; i <= g.cells; ++i) {
                out += fmt17(snap.time);
                out += ',';
                out += fmt17(g.coord(i));
                if (g.dim == 2) {
                    out += ',';
                    out += fmt17(g.coord(j));
                }
                out += ',';
                out += fmt17(snap.at(i, j));
                out += '\n';
            }
    return out;
}

/// Witness-ratio records as a flat CSV.
inline std::string records_csv(const std::vector<EstimateRecord>& records) {
    std::string out = "estimate,scenario,lhs,rhs,ratio,advisory,params\n";
    for (const auto& r : records) {
        out += r.estimate;
        out += ',';
        out += r.scenario_id;
        out += ',';
        out += fmt17(r.lhs);
        out += ',';
        out += fmt17(r.rhs);
        out += ',';
        out += fmt17(r.ratio);
        out += ',';
        out += r.advisory ? '1' : '0';
        out += ',';
        std::string params;
        for (const auto& [k, v] : r.params) {
            if (!params.empty()) params += ';';
            params += k + "=" + fmt17(v);
        }
        out += '"' + params + '"';
        out += '\n';
    }
    return out;
}

/// Functional traces as CSV: t, A, EnvA, G1..G4.
inline std::string functional_trace_csv(const TrajectoryStats& st) {
    std::string out = "t,A,EnvA,G1,G2,G3,G4\n";
    for (std::size_t k = 0; k < st.snaps.size(); ++k) {
        const SnapshotStats& s = st.snaps[k];
        out += fmt17(s.time);
        out += ',' + fmt17(s.A_val);
        out += ',' + fmt17(st.env_A[k]);
        out += ',' + fmt17(s.G.G1);
        out += ',' + fmt17(s.G.G2);
        out += ',' + fmt17(s.G.G3);
        out += ',' + fmt17(s.G.G4);
        out += '\n';
    }
    return out;
}

/// Constitutive scan rows: xi, s, K, K', H.
inline std::string kfun_csv(const ForchheimerLaw& law, const std::vector<double>& xi_grid) {
    std::vector<double> sorted = xi_grid;
    std::sort(sorted.begin(), sorted.end());
    const auto H = cumulative_H(law, sorted);
    std::string out = "xi,s,K,Kprime,H\n";
    double hint = -1.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        const DiffusivityValue kv = eval_K(law, sorted[k], 1e-12, hint);
        hint = kv.s;
        out += fmt17(sorted[k]);
        out += ',' + fmt17(kv.s);
        out += ',' + fmt17(kv.K);
        out += ',' + fmt17(kv.Kprime);
        out += ',' + fmt17(H[k]);
        out += '\n';
    }
    return out;
}

}  // namespace forch

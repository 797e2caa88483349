#pragma once

/// Finite-difference gradient and Hessian extraction on cell-vertex grids.
/// Central differences at interior nodes, one-sided second-order stencils
/// at boundary nodes; Hessians use standard second and cross differences
/// and are symmetric by construction.

#include <array>
#include <cmath>

#include "forchheimer/grid.hpp"

namespace forch {

struct VectorField {
    Grid grid;
    std::vector<double> dx;  // d/dx1 at every node
    std::vector<double> dy;  // d/dx2 (empty in 1D)

    double magnitude(std::size_t idx) const {
        return grid.dim == 1 ? std::abs(dx[idx]) : std::hypot(dx[idx], dy[idx]);
    }
};

/// Symmetric Hessian per node: {xx, yy, xy} (yy, xy unused in 1D).
struct MatrixField {
    Grid grid;
    std::vector<std::array<double, 3>> values;

    double frobenius(std::size_t idx) const {
        const auto& v = values[idx];
        if (grid.dim == 1) return std::abs(v[0]);
        return std::sqrt(v[0] * v[0] + v[1] * v[1] + 2.0 * v[2] * v[2]);
    }
};

namespace detail {

// Derivative along one index line; one-sided second-order at the ends.
inline double line_deriv(const ScalarField& f, int i, int j, int axis) {
    const Grid& g = f.grid;
    const double h = g.h();
    const int n = g.cells;
    const int c = (axis == 0) ? i : j;
    auto v = [&](int k) { return axis == 0 ? f.at(k, j) : f.at(i, k); };
    if (c == 0) return (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h);
    if (c == n) return (3.0 * v(n) - 4.0 * v(n - 1) + v(n - 2)) / (2.0 * h);
    return (v(c + 1) - v(c - 1)) / (2.0 * h);
}

}  // namespace detail

inline VectorField gradient_field(const ScalarField& f) {
    const Grid& g = f.grid;
    VectorField out{g, std::vector<double>(g.node_count(), 0.0), {}};
    if (g.dim == 2) out.dy.assign(g.node_count(), 0.0);
    if (g.dim == 1) {
        for (int i = 0; i <= g.cells; ++i) out.dx[g.index(i)] = detail::line_deriv(f, i, 0, 0);
    } else {
        for (int j = 0; j <= g.cells; ++j)
            for (int i = 0; i <= g.cells; ++i) {
                const std::size_t idx = g.index(i, j);
                out.dx[idx] = detail::line_deriv(f, i, j, 0);
                out.dy[idx] = detail::line_deriv(f, i, j, 1);
            }
    }
    return out;
}

/// Hessian at nodes with a full stencil; one-sided values are not
/// extrapolated, entries at boundary nodes stay zero (interior subdomains
/// never touch them).
inline MatrixField hessian_field(const ScalarField& f) {
    const Grid& g = f.grid;
    const double h2 = g.h() * g.h();
    MatrixField out{g, std::vector<std::array<double, 3>>(g.node_count(), {0.0, 0.0, 0.0})};
    if (g.dim == 1) {
        for (int i = 1; i < g.cells; ++i)
            out.values[g.index(i)][0] = (f.at(i + 1) - 2.0 * f.at(i) + f.at(i - 1)) / h2;
        return out;
    }
    for (int j = 1; j < g.cells; ++j)
        for (int i = 1; i < g.cells; ++i) {
            auto& v = out.values[g.index(i, j)];
            v[0] = (f.at(i + 1, j) - 2.0 * f.at(i, j) + f.at(i - 1, j)) / h2;
            v[1] = (f.at(i, j + 1) - 2.0 * f.at(i, j) + f.at(i, j - 1)) / h2;
            v[2] = (f.at(i + 1, j + 1) - f.at(i + 1, j - 1) - f.at(i - 1, j + 1) +
                    f.at(i - 1, j - 1)) /
                   (4.0 * h2);
        }
    return out;
}

}  // namespace forch

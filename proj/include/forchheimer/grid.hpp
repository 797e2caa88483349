#pragma once

/// Uniform cell-vertex grids on the unit interval / unit square.
/// Nodes include the boundary; spacing h = 1/cells.  Interior subdomains
/// are realized as axis-aligned node boxes selected by a distance
/// threshold from the boundary.

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace forch {

struct Grid {
    int dim = 2;    // 1 or 2
    int cells = 8;  // cells per side, >= 8

    double h() const { return 1.0 / double(cells); }
    int nodes_per_side() const { return cells + 1; }
    std::size_t node_count() const {
        const std::size_t n = std::size_t(cells) + 1;
        return dim == 1 ? n : n * n;
    }
    std::size_t index(int i, int j = 0) const {
        return dim == 1 ? std::size_t(i) : std::size_t(j) * (cells + 1) + i;
    }
    double coord(int i) const { return double(i) * h(); }
    bool is_boundary(int i, int j = 0) const {
        if (i == 0 || i == cells) return true;
        return dim == 2 && (j == 0 || j == cells);
    }

    void validate() const {
        if (dim != 1 && dim != 2) throw std::invalid_argument("grid: dim must be 1 or 2");
        if (cells < 8) throw std::invalid_argument("grid: need >= 8 cells per side");
    }
};

/// Axis-aligned node box [lo, hi]^dim (inclusive index range per side).
struct NodeBox {
    int lo = 0;
    int hi = 0;
    bool empty() const { return hi < lo; }
    int span() const { return hi - lo + 1; }
};

/// Nodes at distance >= margin from the boundary of the unit domain.
inline NodeBox interior_box(const Grid& g, double margin) {
    const double h = g.h();
    const int lo = int(std::ceil(margin / h - 1e-12));
    return NodeBox{lo, g.cells - lo};
}

struct ScalarField {
    Grid grid;
    std::vector<double> values;  // node-ordered, row-major in 2D
    double time = 0.0;

    double& at(int i, int j = 0) { return values[grid.index(i, j)]; }
    double at(int i, int j = 0) const { return values[grid.index(i, j)]; }
};

inline ScalarField make_field(const Grid& g, double t = 0.0) {
    return ScalarField{g, std::vector<double>(g.node_count(), 0.0), t};
}

/// Trapezoid weight of node index i within [lo, hi] (1D factor, in units of h).
inline double trapezoid_factor(int i, int lo, int hi) {
    if (i < lo || i > hi) return 0.0;
    if (lo == hi) return 0.0;  // degenerate box has zero measure
    return (i == lo || i == hi) ? 0.5 : 1.0;
}

/// Composite trapezoid weights over a node box; weights sum to the box measure.
inline std::vector<double> box_weights(const Grid& g, const NodeBox& box) {
    std::vector<double> w(g.node_count(), 0.0);
    const double h = g.h();
    if (box.empty() || box.lo == box.hi) return w;
    if (g.dim == 1) {
        for (int i = box.lo; i <= box.hi; ++i)
            w[g.index(i)] = h * trapezoid_factor(i, box.lo, box.hi);
    } else {
        for (int j = box.lo; j <= box.hi; ++j)
            for (int i = box.lo; i <= box.hi; ++i)
                w[g.index(i, j)] = h * h * trapezoid_factor(i, box.lo, box.hi) *
                                   trapezoid_factor(j, box.lo, box.hi);
    }
    return w;
}

inline NodeBox full_box(const Grid& g) { return NodeBox{0, g.cells}; }

}  // namespace forch

#pragma once

/// Analytic boundary/extension data.  Each preset supplies the extension
/// Psi on the closed unit domain together with exact Psi_t, grad Psi,
/// grad Psi_t and Psi_tt, so the data functionals never touch finite
/// differences of the data itself.

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "forchheimer/grid.hpp"

namespace forch {

using Point = std::array<double, 2>;  // x[1] ignored in 1D
using Vec2 = std::array<double, 2>;

enum class DataPreset { Zero, Constant, Linear, LinearDrift, Periodic, Product };

inline DataPreset data_preset_from_string(const std::string& s) {
    if (s == "zero") return DataPreset::Zero;
    if (s == "constant") return DataPreset::Constant;
    if (s == "linear") return DataPreset::Linear;
    if (s == "linear-drift") return DataPreset::LinearDrift;
    if (s == "periodic") return DataPreset::Periodic;
    if (s == "product") return DataPreset::Product;
    throw std::invalid_argument("unknown data preset '" + s + "'");
}

inline std::string to_string(DataPreset p) {
    switch (p) {
        case DataPreset::Zero: return "zero";
        case DataPreset::Constant: return "constant";
        case DataPreset::Linear: return "linear";
        case DataPreset::LinearDrift: return "linear-drift";
        case DataPreset::Periodic: return "periodic";
        case DataPreset::Product: return "product";
    }
    return "?";
}

struct BoundaryData {
    DataPreset preset = DataPreset::Zero;
    int dim = 2;
    double amplitude = 1.0;
    double omega = std::numbers::pi;  // periodic preset only

    // Periodic spatial profile w(x) = 1 + x1 (+ x2); product profile
    // q(x) = sin(pi x1) (* sin(pi x2)).
    double value(const Point& x, double t) const {
        switch (preset) {
            case DataPreset::Zero: return 0.0;
            case DataPreset::Constant: return amplitude;
            case DataPreset::Linear: return amplitude * x[0];
            case DataPreset::LinearDrift: return amplitude * t;
            case DataPreset::Periodic: return amplitude * std::sin(omega * t) * profile(x);
            case DataPreset::Product: return amplitude * std::exp(-t) * product(x);
        }
        return 0.0;
    }

    double dt(const Point& x, double t) const {
        switch (preset) {
            case DataPreset::Zero:
            case DataPreset::Constant:
            case DataPreset::Linear: return 0.0;
            case DataPreset::LinearDrift: return amplitude;
            case DataPreset::Periodic:
                return amplitude * omega * std::cos(omega * t) * profile(x);
            case DataPreset::Product: return -amplitude * std::exp(-t) * product(x);
        }
        return 0.0;
    }

    double dtt(const Point& x, double t) const {
        switch (preset) {
            case DataPreset::Zero:
            case DataPreset::Constant:
            case DataPreset::Linear:
            case DataPreset::LinearDrift: return 0.0;
            case DataPreset::Periodic:
                return -amplitude * omega * omega * std::sin(omega * t) * profile(x);
            case DataPreset::Product: return amplitude * std::exp(-t) * product(x);
        }
        return 0.0;
    }

    Vec2 grad(const Point& x, double t) const {
        switch (preset) {
            case DataPreset::Zero:
            case DataPreset::Constant:
            case DataPreset::LinearDrift: return {0.0, 0.0};
            case DataPreset::Linear: return {amplitude, 0.0};
            case DataPreset::Periodic: {
                const double f = amplitude * std::sin(omega * t);
                return {f, dim == 2 ? f : 0.0};
            }
            case DataPreset::Product: return product_grad(x, amplitude * std::exp(-t));
        }
        return {0.0, 0.0};
    }

    Vec2 grad_dt(const Point& x, double t) const {
        switch (preset) {
            case DataPreset::Zero:
            case DataPreset::Constant:
            case DataPreset::Linear:
            case DataPreset::LinearDrift: return {0.0, 0.0};
            case DataPreset::Periodic: {
                const double f = amplitude * omega * std::cos(omega * t);
                return {f, dim == 2 ? f : 0.0};
            }
            case DataPreset::Product: return product_grad(x, -amplitude * std::exp(-t));
        }
        return {0.0, 0.0};
    }

    bool time_constant() const {
        return preset == DataPreset::Zero || preset == DataPreset::Constant ||
               preset == DataPreset::Linear;
    }

private:
    double profile(const Point& x) const { return 1.0 + x[0] + (dim == 2 ? x[1] : 0.0); }
    double product(const Point& x) const {
        constexpr double pi = std::numbers::pi;
        double v = std::sin(pi * x[0]);
        if (dim == 2) v *= std::sin(pi * x[1]);
        return v;
    }
    Vec2 product_grad(const Point& x, double scale) const {
        constexpr double pi = std::numbers::pi;
        if (dim == 1) return {scale * pi * std::cos(pi * x[0]), 0.0};
        return {scale * pi * std::cos(pi * x[0]) * std::sin(pi * x[1]),
                scale * pi * std::sin(pi * x[0]) * std::cos(pi * x[1])};
    }
};

enum class InitPreset { Zero, Data, SinProduct, Bump };

inline InitPreset init_preset_from_string(const std::string& s) {
    if (s == "zero") return InitPreset::Zero;
    if (s == "data") return InitPreset::Data;
    if (s == "sinsin") return InitPreset::SinProduct;
    if (s == "bump") return InitPreset::Bump;
    throw std::invalid_argument("unknown init preset '" + s + "'");
}

inline std::string to_string(InitPreset p) {
    switch (p) {
        case InitPreset::Zero: return "zero";
        case InitPreset::Data: return "data";
        case InitPreset::SinProduct: return "sinsin";
        case InitPreset::Bump: return "bump";
    }
    return "?";
}

struct InitialData {
    InitPreset preset = InitPreset::Data;
    double amplitude = 1.0;

    double value(const Point& x, const BoundaryData& data) const {
        constexpr double pi = std::numbers::pi;
        switch (preset) {
            case InitPreset::Zero: return 0.0;
            case InitPreset::Data: return data.value(x, 0.0);
            case InitPreset::SinProduct: {
                double v = std::sin(pi * x[0]);
                if (data.dim == 2) v *= std::sin(pi * x[1]);
                return amplitude * v;
            }
            case InitPreset::Bump: {
                double v = bump1(x[0]);
                if (data.dim == 2) v *= bump1(x[1]);
                return amplitude * v;
            }
        }
        return 0.0;
    }

private:
    // Smooth compactly supported bump, peak 1 at the midpoint.
    static double bump1(double x) {
        const double q = 4.0 * x * (1.0 - x);
        if (q <= 0.0) return 0.0;
        return std::exp(1.0 - 1.0 / q);
    }
};

/// Node-sampled Psi(., t).
inline ScalarField sample_boundary_data(const BoundaryData& data, const Grid& g, double t) {
    ScalarField f = make_field(g, t);
    if (g.dim == 1) {
        for (int i = 0; i <= g.cells; ++i) f.at(i) = data.value({g.coord(i), 0.0}, t);
    } else {
        for (int j = 0; j <= g.cells; ++j)
            for (int i = 0; i <= g.cells; ++i)
                f.at(i, j) = data.value({g.coord(i), g.coord(j)}, t);
    }
    return f;
}

inline ScalarField sample_initial_data(const InitialData& init, const BoundaryData& data,
                                       const Grid& g) {
    ScalarField f = make_field(g, 0.0);
    if (g.dim == 1) {
        for (int i = 0; i <= g.cells; ++i) f.at(i) = init.value({g.coord(i), 0.0}, data);
    } else {
        for (int j = 0; j <= g.cells; ++j)
            for (int i = 0; i <= g.cells; ++i)
                f.at(i, j) = init.value({g.coord(i), g.coord(j)}, data);
    }
    return f;
}

}  // namespace forch

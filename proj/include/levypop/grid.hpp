#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "levypop/errors.hpp"

namespace levypop {

/// Uniform cell-centred grid on [x_min, x_max]. Nodes sit at cell centres, so
/// none of them coincides with x_min (the x = 0 singular point of the
/// multiplicative coefficients).
struct Grid {
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t n_cells = 256;

    static constexpr std::size_t kMinCells = 16;

    void validate() const {
        detail::require(std::isfinite(x_min) && std::isfinite(x_max) && x_max > x_min,
                        "grid: need finite x_min < x_max");
        detail::require(n_cells >= kMinCells, "grid: n_cells must be >= 16");
    }

    [[nodiscard]] double dx() const noexcept { return (x_max - x_min) / static_cast<double>(n_cells); }
    [[nodiscard]] double node(std::size_t i) const noexcept {
        return x_min + (static_cast<double>(i) + 0.5) * dx();
    }
    [[nodiscard]] std::vector<double> nodes() const {
        std::vector<double> x(n_cells);
        for (std::size_t i = 0; i < n_cells; ++i) x[i] = node(i);
        return x;
    }
    /// Cell index containing x, or n_cells when x lies outside [x_min, x_max].
    [[nodiscard]] std::size_t cell_of(double x) const noexcept {
        if (!(x >= x_min && x <= x_max)) return n_cells;
        auto i = static_cast<std::size_t>((x - x_min) / dx());
        return i < n_cells ? i : n_cells - 1;
    }
};

/// Density values at the grid nodes at one time instant.
struct DensityField {
    Grid grid;
    std::vector<double> values;
    double time = 0.0;

    /// Integral over the grid (midpoint rule on cells).
    [[nodiscard]] double mass() const {
        return grid.dx() * std::accumulate(values.begin(), values.end(), 0.0);
    }

    void normalize() {
        const double m = mass();
        if (!(m > 0.0)) throw EmptyDensityError("density has no mass to normalize");
        for (double& v : values) v /= m;
    }
};

/// L1 distance between two densities sampled on the same grid.
inline double l1_distance(const DensityField& a, const DensityField& b) {
    detail::require(a.values.size() == b.values.size(), "l1_distance: grid size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += std::abs(a.values[i] - b.values[i]);
    return s * a.grid.dx();
}

}  // namespace levypop

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fjko {

using Field = std::vector<double>;

/// Periodic uniform lattice on [0,L)^d, the computational stand-in for R^d.
/// Cell centers at (i+1/2)h, h = L/n, storage row-major with x fastest.
struct Grid {
    int d = 1;
    int n = 8;
    double length = 1.0;

    Grid() = default;
    Grid(int d_, int n_, double length_) : d(d_), n(n_), length(length_) {
        if (d != 1 && d != 2) throw std::invalid_argument("Grid: d must be 1 or 2");
        if (n < 8 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Grid: n must be a power of two with n >= 8");
        if (!(length > 0.0)) throw std::invalid_argument("Grid: L must be positive");
    }

    std::size_t size() const { return d == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n; }
    double spacing() const { return length / n; }
    double cell_volume() const { return d == 1 ? spacing() : spacing() * spacing(); }

    /// coordinate of cell center along one axis
    double coord(int i) const { return (i + 0.5) * spacing(); }

    bool operator==(const Grid& o) const { return d == o.d && n == o.n && length == o.length; }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

inline double field_mass(const Grid& g, const Field& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s * g.cell_volume();
}

/// Nonnegative unit-mass scalar field on a Grid.
struct Density {
    Grid grid;
    Field values;

    Density(Grid g, Field v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.size())
            throw std::invalid_argument("Density: field size does not match grid");
        double lo = 0.0;
        for (double x : values) lo = std::min(lo, x);
        if (lo < -1e-12)
            throw std::invalid_argument("Density: negative values beyond tolerance (min=" + std::to_string(lo) + ")");
        const double m = mass();
        if (std::abs(m - 1.0) > 1e-10)
            throw std::invalid_argument("Density: mass " + std::to_string(m) + " is not 1 within 1e-10");
    }

    /// Clip tiny negatives and rescale to unit mass. The entry point for raw
    /// solver output and hand-built test fields.
    static Density normalized(const Grid& g, Field v) {
        double s = 0.0;
        for (double& x : v) {
            if (x < 0.0) x = 0.0;
            s += x;
        }
        if (!(s > 0.0)) throw std::invalid_argument("Density::normalized: field has no mass");
        const double scale = 1.0 / (s * g.cell_volume());
        for (double& x : v) x *= scale;
        return Density(g, std::move(v));
    }

    double mass() const { return field_mass(grid, values); }
};

}  // namespace fjko

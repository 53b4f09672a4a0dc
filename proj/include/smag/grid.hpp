#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "smag/errors.hpp"

namespace smag {

// Uniform grid on the torus [0, 2pi]^d, d in {2, 3}, n points per axis.
// Spectral coefficients are stored full-spectrum in row-major index order;
// axis index i maps to the integer wavenumber i <= n/2 ? i : i - n.
struct Grid {
    int d = 0;
    int n = 0;

    Grid() = default;
    Grid(int d_, int n_) : d(d_), n(n_) {
        if (d != 2 && d != 3) throw DimensionMismatch("Grid: d must be 2 or 3");
        if (n < 8 || n % 2 != 0) throw ConfigError("Grid: n must be even and >= 8");
    }

    std::size_t size() const {
        std::size_t s = 1;
        for (int i = 0; i < d; ++i) s *= static_cast<std::size_t>(n);
        return s;
    }

    int wavenumber(int index) const { return index <= n / 2 ? index : index - n; }

    // Index of an integer wavenumber on the periodic lattice.
    int index_of(int k) const { return k >= 0 ? k : k + n; }

    std::size_t flat_index(const std::array<int, 3>& idx) const {
        std::size_t f = static_cast<std::size_t>(idx[0]);
        for (int a = 1; a < d; ++a) f = f * n + idx[a];
        return f;
    }

    std::size_t flat_of_mode(const std::array<int, 3>& k) const {
        std::array<int, 3> idx{0, 0, 0};
        for (int a = 0; a < d; ++a) idx[a] = index_of(k[a]);
        return flat_index(idx);
    }

    int dealias_cutoff() const { return n / 3; }

    double spacing() const { return 2.0 * M_PI / n; }

    // Quadrature weight of the rectangle rule per grid point.
    double cell_volume() const { return std::pow(spacing(), d); }

    bool operator==(const Grid& o) const { return d == o.d && n == o.n; }
    bool operator!=(const Grid& o) const { return !(*this == o); }

    // Visits every mode as (flat index, k0, k1, k2); k2 = 0 when d = 2.
    template <typename F>
    void for_modes(F&& f) const {
        if (d == 2) {
            std::size_t flat = 0;
            for (int i0 = 0; i0 < n; ++i0) {
                const int k0 = wavenumber(i0);
                for (int i1 = 0; i1 < n; ++i1, ++flat) f(flat, k0, wavenumber(i1), 0);
            }
        } else {
            std::size_t flat = 0;
            for (int i0 = 0; i0 < n; ++i0) {
                const int k0 = wavenumber(i0);
                for (int i1 = 0; i1 < n; ++i1) {
                    const int k1 = wavenumber(i1);
                    for (int i2 = 0; i2 < n; ++i2, ++flat) f(flat, k0, k1, wavenumber(i2));
                }
            }
        }
    }
};

}  // namespace smag

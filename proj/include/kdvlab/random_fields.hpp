#pragma once

// Seeded random field ensembles: Fourier coefficients with magnitudes
// shaped to a target H^s profile and random phases. Fully deterministic
// given the seed.

#include <random>

#include "kdvlab/grid.hpp"

namespace kdvlab {

/// Rough random data with |u_hat(xi)| ~ <xi>^decay, populated on
/// 0 < |k| <= max_mode (mean left at zero). decay = -s - 1/2 puts the data
/// on the edge of H^s.
inline SpectralField random_rough_field(const SpatialGrid& grid, double decay,
                                        int max_mode, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpectralField f(grid);
    const int n = grid.num_points();
    const int kmax = std::min(max_mode, n / 2 - 1);
    for (int k = 1; k <= kmax; ++k) {
        const double xi = grid.frequency(k);
        const double mag = std::pow(1.0 + xi * xi, 0.5 * decay);
        const Complex g(gauss(rng), gauss(rng));
        f[k] = mag * g;
        f[n - k] = std::conj(f[k]);
    }
    return f;
}

/// Nonnegative even coefficients supported on a frequency-magnitude band
/// [lo, hi]: u_hat(xi) = u_hat(-xi) = |gaussian| >= 0, so the field is real
/// and its coefficients are nonnegative.
inline SpectralField random_nonneg_band_field(const SpatialGrid& grid, double lo,
                                              double hi, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpectralField f(grid);
    const int n = grid.num_points();
    if (lo <= 0.0) f[0] = std::abs(gauss(rng));
    for (int k = 1; k < n / 2; ++k) {
        const double xi = grid.frequency(k);
        if (std::abs(xi) >= lo && std::abs(xi) <= hi) {
            const double a = std::abs(gauss(rng));
            f[k] = a;
            f[n - k] = a;
        }
    }
    return f;
}

}  // namespace kdvlab

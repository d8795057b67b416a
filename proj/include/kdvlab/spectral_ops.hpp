#pragma once

// Fourier-multiplier operations on SpectralField: differentiation,
// fractional derivatives |xi|^theta, frequency-band projections and
// Sobolev norms, plus quadratic products (2/3-rule dealiased and
// zero-padded exact).

#include <cmath>
#include <functional>
#include <stdexcept>

#include "kdvlab/grid.hpp"

namespace kdvlab {

/// Apply a scalar symbol g(xi) slotwise. The Nyquist slot stays zero.
inline SpectralField apply_symbol(const SpectralField& u,
                                  const std::function<Complex(double)>& symbol) {
    SpectralField out(u.grid());
    const int n = u.grid().num_points();
    for (int j = 0; j < n; ++j) {
        if (j == n / 2) continue;
        out[j] = symbol(u.grid().frequency(j)) * u[j];
    }
    return out;
}

inline SpectralField derivative(const SpectralField& u, int order) {
    if (order <= 0) throw std::invalid_argument("derivative order must be >= 1");
    return apply_symbol(u, [order](double xi) {
        return std::pow(Complex(0.0, xi), order);
    });
}

/// |xi|^theta multiplier. For theta > 0 the xi=0 slot maps to 0; for
/// theta < 0 the input must have zero mean.
inline SpectralField fractional_derivative(const SpectralField& u, double theta) {
    if (theta < 0.0 && std::abs(u[0]) != 0.0)
        throw std::invalid_argument(
            "fractional_derivative: theta < 0 requires zero-mean field");
    SpectralField out(u.grid());
    const int n = u.grid().num_points();
    for (int j = 0; j < n; ++j) {
        if (j == n / 2) continue;
        const double xi = u.grid().frequency(j);
        if (xi == 0.0) {
            out[j] = (theta == 0.0) ? u[j] : Complex(0.0);
        } else {
            out[j] = std::pow(std::abs(xi), theta) * u[j];
        }
    }
    return out;
}

/// The three-way frequency partition used throughout: |xi| <= vl_cutoff,
/// vl_cutoff < |xi| <= N/2, |xi| > N/2. vl_cutoff defaults to 1.
enum class Band { very_low, low, high };

inline bool in_band(double xi, Band band, double N, double vl_cutoff = 1.0) {
    const double a = std::abs(xi);
    switch (band) {
        case Band::very_low: return a <= vl_cutoff;
        case Band::low: return a > vl_cutoff && a <= 0.5 * N;
        case Band::high: return a > 0.5 * N;
    }
    return false;
}

inline SpectralField project_band(const SpectralField& u, Band band, double N,
                                  double vl_cutoff = 1.0) {
    if (!(N >= 4.0)) throw std::invalid_argument("project_band requires N >= 4");
    SpectralField out(u.grid());
    const int n = u.grid().num_points();
    for (int j = 0; j < n; ++j) {
        if (j == n / 2) continue;
        if (in_band(u.grid().frequency(j), band, N, vl_cutoff)) out[j] = u[j];
    }
    return out;
}

/// ||u||_{H^s} with weight <xi>^s = (1+xi^2)^{s/2}.
inline double sobolev_norm(const SpectralField& u, double s) {
    double acc = 0.0;
    const int n = u.grid().num_points();
    for (int j = 0; j < n; ++j) {
        const double xi = u.grid().frequency(j);
        acc += std::pow(1.0 + xi * xi, s) * std::norm(u[j]);
    }
    return std::sqrt(u.grid().length() * acc);
}

/// Pointwise product computed with the 2/3 rule: both factors and the
/// result are truncated to |k| <= n/3, which makes the product equal the
/// exact convolution on the retained modes.
inline SpectralField dealiased_product(const SpectralField& u,
                                       const SpectralField& v) {
    u.check_same_grid(v);
    const SpatialGrid& grid = u.grid();
    const int n = grid.num_points();
    const int kc = n / 3;

    auto truncate = [&](const SpectralField& f) {
        SpectralField g(grid);
        for (int j = 0; j < n; ++j)
            if (std::abs(grid.wavenumber(j)) <= kc) g[j] = f[j];
        return g;
    };
    auto a = to_spatial(truncate(u));
    auto b = to_spatial(truncate(v));
    for (int j = 0; j < n; ++j) a[static_cast<size_t>(j)] *= b[static_cast<size_t>(j)];
    return truncate(to_spectral(grid, a));
}

/// Exact (linear-convolution) product, truncated to the grid's lattice:
/// computed on a 2x zero-padded grid so no aliasing occurs, then restricted
/// back. Equals the direct O(n^2) convolution sum on the retained modes.
inline SpectralField padded_product(const SpectralField& u,
                                    const SpectralField& v) {
    u.check_same_grid(v);
    const SpatialGrid& grid = u.grid();
    const int n = grid.num_points();
    const SpatialGrid big(2 * n, grid.length());

    auto embed = [&](const SpectralField& f) {
        SpectralField g(big);
        for (int j = 0; j < n; ++j) {
            const int k = grid.wavenumber(j);
            g[k >= 0 ? k : 2 * n + k] = f[j];
        }
        return g;
    };
    auto a = to_spatial(embed(u));
    auto b = to_spatial(embed(v));
    for (int j = 0; j < 2 * n; ++j) a[static_cast<size_t>(j)] *= b[static_cast<size_t>(j)];
    SpectralField big_prod = to_spectral(big, a);

    SpectralField out(grid);
    for (int j = 0; j < n; ++j) {
        if (j == n / 2) continue;
        const int k = grid.wavenumber(j);
        out[j] = big_prod[k >= 0 ? k : 2 * n + k];
    }
    return out;
}

/// L^2 inner product of real fields: int u v dx = L * sum_k u_k conj(v_k).
inline double inner_product(const SpectralField& u, const SpectralField& v) {
    u.check_same_grid(v);
    Complex s = 0.0;
    const int n = u.grid().num_points();
    for (int j = 0; j < n; ++j) s += u[j] * std::conj(v[j]);
    return u.grid().length() * s.real();
}

}  // namespace kdvlab

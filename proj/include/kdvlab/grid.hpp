#pragma once

// Periodic computational domain (a large-torus truncation of the line) and
// spectral representation of real fields on it.
//
// Conventions:
//   grid points   x_j = -L/2 + j*dx,          j = 0..n-1
//   frequencies   xi_k = 2*pi*k/L,            k = -n/2..n/2-1
//   coefficients  c_k = (1/L) * int u(x) e^{-i xi_k x} dx   (trapezoid-exact)
// so that u(x) = sum_k c_k e^{i xi_k x} and
//   ||u||_{L^2}^2 = L * sum_k |c_k|^2.
//
// Coefficients are stored in FFT index order: slot j holds wavenumber
// k = j for j < n/2 and k = j - n for j >= n/2. The (unpaired) Nyquist
// slot n/2 is always zero.

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kdvlab/fft.hpp"

namespace kdvlab {

using Complex = std::complex<double>;

class SpatialGrid {
  public:
    SpatialGrid(int num_points, double length)
        : n_(num_points), length_(length) {
        if (num_points <= 0 || num_points % 2 != 0)
            throw std::invalid_argument("num_points must be positive and even");
        if (!(length > 0) || !std::isfinite(length))
            throw std::invalid_argument("length must be positive and finite");
    }

    int num_points() const { return n_; }
    double length() const { return length_; }
    double dx() const { return length_ / n_; }

    /// Wavenumber index for coefficient slot j (FFT order).
    int wavenumber(int slot) const { return slot < n_ / 2 ? slot : slot - n_; }

    /// Lattice frequency xi_k for coefficient slot j.
    double frequency(int slot) const {
        return 2.0 * std::numbers::pi * wavenumber(slot) / length_;
    }

    /// Largest represented frequency magnitude (below Nyquist).
    double max_frequency() const {
        return 2.0 * std::numbers::pi * (n_ / 2 - 1) / length_;
    }

    double point(int j) const { return -0.5 * length_ + j * dx(); }

    bool operator==(const SpatialGrid& o) const {
        return n_ == o.n_ && length_ == o.length_;
    }

  private:
    int n_;
    double length_;
};

class SpectralField {
  public:
    explicit SpectralField(const SpatialGrid& grid)
        : grid_(grid), coeffs_(static_cast<size_t>(grid.num_points()), 0.0) {}

    SpectralField(const SpatialGrid& grid, std::vector<Complex> coeffs)
        : grid_(grid), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != static_cast<size_t>(grid.num_points()))
            throw std::invalid_argument("coefficient count != num_points");
    }

    const SpatialGrid& grid() const { return grid_; }
    const std::vector<Complex>& coeffs() const { return coeffs_; }
    std::vector<Complex>& coeffs() { return coeffs_; }

    Complex& operator[](int slot) { return coeffs_[static_cast<size_t>(slot)]; }
    const Complex& operator[](int slot) const {
        return coeffs_[static_cast<size_t>(slot)];
    }

    /// Force exact Hermitian symmetry c(-xi) = conj(c(xi)) and a zero
    /// Nyquist slot, so the field represents a real function.
    void hermitianize() {
        const int n = grid_.num_points();
        coeffs_[static_cast<size_t>(n / 2)] = 0.0;
        coeffs_[0] = Complex(coeffs_[0].real(), 0.0);
        for (int k = 1; k < n / 2; ++k) {
            const Complex a = coeffs_[static_cast<size_t>(k)];
            const Complex b = coeffs_[static_cast<size_t>(n - k)];
            const Complex avg = 0.5 * (a + std::conj(b));
            coeffs_[static_cast<size_t>(k)] = avg;
            coeffs_[static_cast<size_t>(n - k)] = std::conj(avg);
        }
    }

    double hermitian_defect() const {
        const int n = grid_.num_points();
        double d = std::abs(coeffs_[static_cast<size_t>(n / 2)]);
        d = std::max(d, std::abs(coeffs_[0].imag()));
        for (int k = 1; k < n / 2; ++k)
            d = std::max(d, std::abs(coeffs_[static_cast<size_t>(k)] -
                                     std::conj(coeffs_[static_cast<size_t>(n - k)])));
        return d;
    }

    double l2_norm_squared() const {
        double s = 0.0;
        for (const auto& c : coeffs_) s += std::norm(c);
        return grid_.length() * s;
    }
    double l2_norm() const { return std::sqrt(l2_norm_squared()); }

    SpectralField& operator*=(double a) {
        for (auto& c : coeffs_) c *= a;
        return *this;
    }
    SpectralField& operator+=(const SpectralField& o) {
        check_same_grid(o);
        for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        check_same_grid(o);
        for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }
    friend SpectralField operator*(double a, SpectralField f) { return f *= a; }
    friend SpectralField operator+(SpectralField a, const SpectralField& b) {
        return a += b;
    }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) {
        return a -= b;
    }

    void check_same_grid(const SpectralField& o) const {
        if (!(grid_ == o.grid_))
            throw std::invalid_argument("grid mismatch between fields");
    }

  private:
    SpatialGrid grid_;
    std::vector<Complex> coeffs_;
};

/// Forward transform of real samples at x_j = -L/2 + j*dx.
inline SpectralField to_spectral(const SpatialGrid& grid,
                                 const std::vector<double>& samples) {
    const int n = grid.num_points();
    if (samples.size() != static_cast<size_t>(n))
        throw std::invalid_argument("sample count != num_points");
    for (double v : samples)
        if (!std::isfinite(v))
            throw std::invalid_argument("non-finite sample value");

    std::vector<Complex> buf(samples.begin(), samples.end());
    fft::forward(buf);
    // e^{-i xi_k x_j} = e^{-2 pi i jk/n} * (-1)^k for x_j based at -L/2.
    SpectralField f(grid);
    for (int j = 0; j < n; ++j) {
        const int k = grid.wavenumber(j);
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        f[j] = sign / n * buf[static_cast<size_t>(j)];
    }
    f.hermitianize();
    return f;
}

/// Inverse transform to real samples at x_j = -L/2 + j*dx.
inline std::vector<double> to_spatial(const SpectralField& f) {
    const SpatialGrid& grid = f.grid();
    const int n = grid.num_points();
    std::vector<Complex> buf(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
        const int k = grid.wavenumber(j);
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        buf[static_cast<size_t>(j)] = sign * f[j];
    }
    fft::backward(buf);
    std::vector<double> out(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) out[static_cast<size_t>(j)] = buf[static_cast<size_t>(j)].real();
    return out;
}

inline double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace kdvlab

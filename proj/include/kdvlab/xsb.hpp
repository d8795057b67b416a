#pragma once

// Discrete Bourgain-space norms of windowed space-time trajectories:
//   ||f||_{X_{s,b}} = || <xi>^s <tau - xi^3>^b F(eta f)(xi,tau) ||_{l^2}
// with the temporal transform taken per spatial mode on a uniform time
// grid over [0, T_w] and a C^2 bump eta equal to 1 on the middle half.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kdvlab/integrator.hpp"
#include "kdvlab/spectral_ops.hpp"

namespace kdvlab {

struct XsbParams {
    double s = 0.0;
    double b = 0.0;
    double eps = 0.05;  // realization of the "+" in 1/2+ etc.

    XsbParams() = default;
    XsbParams(double s_, double b_, double eps_ = 0.05) : s(s_), b(b_), eps(eps_) {
        if (!(eps > 0.0 && eps <= 0.1))
            throw std::invalid_argument("XsbParams: eps must lie in (0, 0.1]");
    }
    double b_plus() const { return 0.5 + eps; }
    double b_minus() const { return -(0.5 + eps); }
};

/// Smoothstep-squared shoulder window: 0 -> 1 over the first quarter of
/// [0,1], 1 on the middle half, 1 -> 0 over the last quarter. Value and
/// first derivative vanish at both endpoints.
inline double bump_window(double frac) {
    auto shoulder = [](double r) {
        const double s = 3.0 * r * r - 2.0 * r * r * r;
        return s * s;
    };
    if (frac <= 0.0 || frac >= 1.0) return 0.0;
    if (frac < 0.25) return shoulder(4.0 * frac);
    if (frac > 0.75) return shoulder(4.0 * (1.0 - frac));
    return 1.0;
}

/// Uniformly sampled trajectory on [0, T_w] together with the window.
class SpaceTimeField {
  public:
    SpaceTimeField(const SpatialGrid& grid, std::vector<SpectralField> values,
                   double t_window)
        : grid_(grid), values_(std::move(values)), t_window_(t_window) {
        if (values_.size() < 2)
            throw std::invalid_argument("SpaceTimeField needs >= 2 time samples");
        if (!(t_window > 0.0))
            throw std::invalid_argument("SpaceTimeField: window length must be > 0");
        for (const auto& f : values_)
            if (!(f.grid() == grid_))
                throw std::invalid_argument("SpaceTimeField: grid mismatch");
    }

    const SpatialGrid& grid() const { return grid_; }
    double t_window() const { return t_window_; }
    int num_times() const { return static_cast<int>(values_.size()); }
    double time(int i) const { return t_window_ * i / num_times(); }
    const SpectralField& at(int i) const { return values_[static_cast<size_t>(i)]; }
    SpectralField& at(int i) { return values_[static_cast<size_t>(i)]; }

    /// Window weight at sample i (samples live at t_i = i*T_w/M, so the
    /// windowed sequence is periodic-extendable in t).
    double window(int i) const {
        return bump_window(static_cast<double>(i) / num_times());
    }

    SpaceTimeField& operator+=(const SpaceTimeField& o) {
        if (num_times() != o.num_times() || t_window_ != o.t_window_)
            throw std::invalid_argument("SpaceTimeField: shape mismatch");
        for (int i = 0; i < num_times(); ++i) values_[static_cast<size_t>(i)] += o.at(i);
        return *this;
    }
    friend SpaceTimeField operator+(SpaceTimeField a, const SpaceTimeField& b) {
        return a += b;
    }

  private:
    SpatialGrid grid_;
    std::vector<SpectralField> values_;
    double t_window_;
};

/// ||<xi>^s <tau-xi^3>^b F(eta f)||. Temporal lattice tau_m = 2 pi m / T_w;
/// the weight uses the exact real number tau_m - xi^3 (no snapping).
inline double xsb_norm(const SpaceTimeField& f, const XsbParams& p) {
    const int M = f.num_times();
    if (M < 16) throw std::invalid_argument("xsb_norm: need >= 16 time samples");
    const int n = f.grid().num_points();
    const double Tw = f.t_window();
    const double two_pi = 2.0 * std::numbers::pi;

    double acc = 0.0;
    std::vector<Complex> series(static_cast<size_t>(M));
    for (int j = 0; j < n; ++j) {
        if (j == n / 2) continue;
        const double xi = f.grid().frequency(j);
        const double ws = std::pow(1.0 + xi * xi, p.s);
        for (int i = 0; i < M; ++i) series[static_cast<size_t>(i)] = f.window(i) * f.at(i)[j];
        fft::forward(series);
        for (int m = 0; m < M; ++m) {
            const int km = m < M / 2 ? m : m - M;
            const double tau = two_pi * km / Tw;
            const double dev = tau - xi * xi * xi;
            const double wt = std::pow(1.0 + dev * dev, p.b);
            acc += ws * wt * std::norm(series[static_cast<size_t>(m)] / static_cast<double>(M));
        }
    }
    return std::sqrt(f.grid().length() * Tw * acc);
}

/// Resample a trajectory with uniform cadence covering [0, T_w] onto the
/// space-time grid.
inline SpaceTimeField trajectory_to_spacetime(const Trajectory& traj,
                                              double t_window) {
    if (traj.size() < 2)
        throw std::invalid_argument("trajectory_to_spacetime: empty trajectory");
    const double cad = traj.times[1] - traj.times[0];
    for (size_t i = 1; i < traj.size(); ++i) {
        const double d = traj.times[i] - traj.times[i - 1];
        if (std::abs(d - cad) > 1e-9 * (std::abs(cad) + 1.0))
            throw std::invalid_argument(
                "trajectory_to_spacetime: non-uniform cadence");
    }
    // Keep the first M = T_w/cadence samples (t = 0, cad, ..., T_w - cad);
    // the endpoint t = T_w is the periodic image of t = 0.
    const int M = static_cast<int>(std::llround(t_window / cad));
    if (M < 2 || std::abs(M * cad - t_window) > 1e-9 * t_window)
        throw std::invalid_argument(
            "trajectory_to_spacetime: cadence does not divide window");
    if (traj.size() < static_cast<size_t>(M))
        throw std::invalid_argument(
            "trajectory_to_spacetime: trajectory does not cover window");
    std::vector<SpectralField> vals(traj.fields.begin(),
                                    traj.fields.begin() + M);
    return SpaceTimeField(traj.fields[0].grid(), std::move(vals), t_window);
}

/// Windowed free (Airy) evolution of spatial data over [0, T_w] with M
/// samples: the extremizer family the X_{s,b} machinery is built around.
inline SpaceTimeField free_evolution(const SpectralField& u0, double t_window,
                                     int num_samples) {
    std::vector<SpectralField> vals;
    vals.reserve(static_cast<size_t>(num_samples));
    for (int i = 0; i < num_samples; ++i) {
        SpectralField f = u0;
        detail::airy_phase(f, t_window * i / num_samples);
        vals.push_back(std::move(f));
    }
    return SpaceTimeField(u0.grid(), std::move(vals), t_window);
}

}  // namespace kdvlab

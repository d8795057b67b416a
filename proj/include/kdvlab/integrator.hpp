#pragma once

// Dealiased pseudospectral integration of
//     u_t + u_xxx + (1/2) (u^2)_x = 0
// with the cubic dispersion removed exactly by an integrating factor and
// classical RK4 applied in the rotated frame.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kdvlab/spectral_ops.hpp"

namespace kdvlab {

struct SolverConfig {
    double dt = 1e-3;           // requested step; adaptively halved, never grown
    bool dealias = true;        // 2/3 rule on the quadratic term
    double cfl_constant = 0.5;  // nonlinear CFL: dt <= c / (xi_max * |u|_inf)
    double blowup_ceiling = 1e6;
    bool nonlinear = true;      // false: pure Airy evolution (diagnostics)
};

struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralField> fields;
    bool blew_up = false;

    size_t size() const { return times.size(); }
};

/// Right-hand-side contribution of the nonlinearity: -(1/2) d/dx (u^2),
/// with the product dealiased by the 2/3 rule. The xi=0 slot is exactly
/// zero (total derivative).
inline SpectralField nonlinear_term(const SpectralField& u, bool dealias = true) {
    SpectralField sq = dealias ? dealiased_product(u, u)
                               : [&] {
                                     auto a = to_spatial(u);
                                     for (auto& x : a) x *= x;
                                     return to_spectral(u.grid(), a);
                                 }();
    SpectralField out = apply_symbol(
        sq, [](double xi) { return Complex(0.0, -0.5 * xi); });
    out[0] = 0.0;
    return out;
}

namespace detail {

/// Multiply slotwise by the Airy phase e^{+i xi^3 t} (the linear flow).
inline void airy_phase(SpectralField& f, double t) {
    const int n = f.grid().num_points();
    for (int j = 0; j < n; ++j) {
        const double xi = f.grid().frequency(j);
        f[j] *= std::polar(1.0, xi * xi * xi * t);
    }
}

inline bool finite(const SpectralField& f) {
    for (const auto& c : f.coeffs())
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

}  // namespace detail

/// One integrating-factor RK4 step of size dt. Exact on the linear flow.
inline SpectralField step(const SpectralField& u, double dt,
                          const SolverConfig& cfg) {
    auto N = [&](const SpectralField& f) {
        return cfg.nonlinear ? nonlinear_term(f, cfg.dealias)
                             : SpectralField(f.grid());
    };
    auto E = [&](SpectralField f, double t) {  // linear propagator e^{i xi^3 t}
        detail::airy_phase(f, t);
        return f;
    };

    const double h = dt;
    SpectralField a = N(u);
    SpectralField b = N(E(u + (0.5 * h) * a, 0.5 * h));
    SpectralField c = N(E(u, 0.5 * h) + (0.5 * h) * b);
    SpectralField d = N(E(u, h) + h * E(c, 0.5 * h));
    SpectralField out =
        E(u, h) + (h / 6.0) * (E(a, h) + 2.0 * E(b + c, 0.5 * h) + d);

    if (!detail::finite(out))
        throw std::runtime_error("step: non-finite field (blow-up)");
    return out;
}

/// Admissible step size at the current state: min(cfg.dt, CFL bound).
inline double admissible_dt(const SpectralField& u, const SolverConfig& cfg) {
    if (!cfg.nonlinear) return cfg.dt;
    const double amp = max_abs(to_spatial(u));
    const double xi_max = u.grid().max_frequency();
    if (amp * xi_max == 0.0) return cfg.dt;
    double dt = cfg.dt;
    while (dt > cfg.cfl_constant / (xi_max * amp)) dt *= 0.5;
    return dt;
}

/// Integrate to t_final, sampling the state every `cadence` units (0 means
/// only endpoints). On blow-up the partial trajectory is returned with
/// blew_up set.
inline Trajectory integrate(const SpectralField& u0, double t_final,
                            const SolverConfig& cfg, double cadence = 0.0) {
    if (!(t_final > 0.0)) throw std::invalid_argument("t_final must be > 0");
    Trajectory traj;
    traj.times.push_back(0.0);
    traj.fields.push_back(u0);

    SpectralField u = u0;
    double t = 0.0;
    double next_sample = cadence > 0.0 ? cadence : t_final;
    const double eps = 1e-12 * t_final;

    double amp = max_abs(to_spatial(u));
    if (amp > cfg.blowup_ceiling) {
        traj.blew_up = true;
        return traj;
    }
    while (t < t_final - eps) {
        double dt = cfg.dt;
        if (cfg.nonlinear && amp * u.grid().max_frequency() > 0.0)
            while (dt > cfg.cfl_constant / (u.grid().max_frequency() * amp))
                dt *= 0.5;
        dt = std::min(dt, next_sample - t);
        dt = std::min(dt, t_final - t);
        try {
            u = step(u, dt, cfg);
        } catch (const std::runtime_error&) {
            traj.blew_up = true;
            return traj;
        }
        t += dt;
        amp = max_abs(to_spatial(u));
        if (amp > cfg.blowup_ceiling) {
            traj.blew_up = true;
            return traj;
        }
        if (t >= next_sample - eps) {
            traj.times.push_back(t);
            traj.fields.push_back(u);
            next_sample += cadence > 0.0 ? cadence : t_final;
        }
    }
    return traj;
}

/// The classical single-soliton profile 3c sech^2(sqrt(c)(x - x0)/2),
/// which translates at speed c under the flow.
inline std::vector<double> soliton_samples(const SpatialGrid& grid, double c,
                                           double x0 = 0.0) {
    std::vector<double> s(static_cast<size_t>(grid.num_points()));
    for (int j = 0; j < grid.num_points(); ++j) {
        // wrap the offset into the periodic cell
        double x = grid.point(j) - x0;
        const double L = grid.length();
        x -= L * std::round(x / L);
        const double sech = 1.0 / std::cosh(0.5 * std::sqrt(c) * x);
        s[static_cast<size_t>(j)] = 3.0 * c * sech * sech;
    }
    return s;
}

}  // namespace kdvlab

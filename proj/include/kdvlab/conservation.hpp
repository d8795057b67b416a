#pragma once

// The modified energy E(t) = ||I u(t)||_{L^2}^2, the commutator field
// d/dx { I(u)I(v) - I(uv) } whose integral against Iu gives dE/dt, and the
// measured N-decay of per-unit-time energy increments.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "kdvlab/integrator.hpp"
#include "kdvlab/multiplier.hpp"
#include "kdvlab/random_fields.hpp"
#include "kdvlab/report.hpp"
#include "kdvlab/scaling.hpp"

namespace kdvlab {

inline double energy(const MultiplierSpec& spec, const SpectralField& u) {
    double acc = 0.0;
    const int n = u.grid().num_points();
    for (int j = 0; j < n; ++j) {
        const double m = m_eval(spec, u.grid().frequency(j));
        acc += m * m * std::norm(u[j]);
    }
    return u.grid().length() * acc;
}

/// d/dx { I(u) I(v) - I(uv) }, computed with exact (zero-padded) products.
/// Equivalently, the Fourier coefficient at xi is
///   i xi * sum_{xi1+xi2=xi} [m(xi1) m(xi2) - m(xi)] u_hat(xi1) v_hat(xi2).
inline SpectralField commutator_field(const MultiplierSpec& spec,
                                      const SpectralField& u,
                                      const SpectralField& v) {
    u.check_same_grid(v);
    SpectralField prod_I = padded_product(apply_I(spec, u), apply_I(spec, v));
    SpectralField I_prod = apply_I(spec, padded_product(u, v));
    return derivative(prod_I - I_prod, 1);
}

/// Direct O(n^2) convolution evaluation of the same field; an independent
/// route used to cross-check the transform path.
inline SpectralField commutator_field_direct(const MultiplierSpec& spec,
                                             const SpectralField& u,
                                             const SpectralField& v) {
    u.check_same_grid(v);
    const SpatialGrid& g = u.grid();
    const int n = g.num_points();
    const int half = n / 2;
    SpectralField out(g);
    for (int k = -half + 1; k < half; ++k) {
        const double xi = 2.0 * std::numbers::pi * k / g.length();
        Complex acc = 0.0;
        for (int k1 = -half + 1; k1 < half; ++k1) {
            const int k2 = k - k1;
            if (k2 <= -half || k2 >= half) continue;
            const double xi1 = 2.0 * std::numbers::pi * k1 / g.length();
            const double xi2 = 2.0 * std::numbers::pi * k2 / g.length();
            const double w =
                m_eval(spec, xi1) * m_eval(spec, xi2) - m_eval(spec, xi);
            acc += w * u[k1 >= 0 ? k1 : n + k1] * v[k2 >= 0 ? k2 : n + k2];
        }
        out[k >= 0 ? k : n + k] = Complex(0.0, xi) * acc;
    }
    return out;
}

struct EnergyTrace {
    std::vector<double> times;
    std::vector<double> E;
    std::vector<double> commutator_integral;  // dE/dt per the identity
    std::vector<double> residual;  // |centered dE/dt - integral|, interior only
    double max_residual = 0.0;
    double max_dEdt = 0.0;
};

/// Fill an EnergyTrace along a finely sampled trajectory: E(t), the
/// commutator integral int d/dx{(Iu)^2 - I(u^2)} Iu dx, and the residual
/// against a centered finite-difference dE/dt (endpoints dropped).
inline EnergyTrace identity_residual(const MultiplierSpec& spec,
                                     const Trajectory& traj) {
    if (traj.size() < 64)
        throw std::invalid_argument("identity_residual: need >= 64 samples");
    EnergyTrace tr;
    tr.times = traj.times;
    for (size_t i = 0; i < traj.size(); ++i) {
        const SpectralField& u = traj.fields[i];
        tr.E.push_back(energy(spec, u));
        tr.commutator_integral.push_back(
            inner_product(commutator_field(spec, u, u), apply_I(spec, u)));
    }
    tr.residual.assign(traj.size(), 0.0);
    for (size_t i = 1; i + 1 < traj.size(); ++i) {
        const double dt = tr.times[i + 1] - tr.times[i - 1];
        const double dEdt = (tr.E[i + 1] - tr.E[i - 1]) / dt;
        tr.residual[i] = std::abs(dEdt - tr.commutator_integral[i]);
        tr.max_residual = std::max(tr.max_residual, tr.residual[i]);
        tr.max_dEdt = std::max(tr.max_dEdt, std::abs(dEdt));
    }
    return tr;
}

struct SweepRow {
    double s;
    double N;
    std::uint64_t seed;
    double eps0;
    double deltaE;
    bool blowup;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<double> N_values;
    std::vector<double> medians;  // median |deltaE| per N (blow-ups excluded)
    int blowup_count = 0;
    bool slope_valid = false;
    double slope = 0.0;  // least-squares fit of log median|dE| vs log N
};

struct SweepConfig {
    int num_points = 8192;
    double length = 16.0 * std::numbers::pi;
    double eps0 = 0.1;
    double dt = 0.02;
    bool use_rescale = true;  // apply the lambda(N) rescaling before normalizing
    double step_time = 1.0;
    std::uint64_t seed_base = 1;
    int workers = 1;
};

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Draw rough data u_hat ~ <xi>^{-s-1/2} x unit Gaussians, rescale by
/// lambda(N), normalize ||I phi|| = eps0, integrate one unit time, and
/// record the energy increment; then fit log median|dE| against log N.
inline SweepResult increment_decay_sweep(const Rational& s,
                                         const std::vector<double>& N_list,
                                         int ensemble_size,
                                         const SweepConfig& cfg = {}) {
    const double sd = to_double(s);
    SweepResult res;
    res.N_values = N_list;

    SpatialGrid grid(cfg.num_points, cfg.length);
    const int max_mode = cfg.num_points / 3;  // stay inside the dealias band

    // One task per (N, seed); merged by task index so worker count never
    // changes the output.
    const int total = static_cast<int>(N_list.size()) * ensemble_size;
    res.rows = parallel_map<SweepRow>(total, cfg.workers, [&](int t) {
        const double N = N_list[static_cast<size_t>(t / ensemble_size)];
        const int e = t % ensemble_size;
        const std::uint64_t seed = cfg.seed_base + static_cast<std::uint64_t>(e);
        SpectralField phi = random_rough_field(grid, -sd - 0.5, max_mode, seed);
        if (cfg.use_rescale) phi = rescale(phi, choose_lambda(s, N).lambda);
        MultiplierSpec spec(sd, N);
        const double nrm = std::sqrt(energy(spec, phi));
        phi *= cfg.eps0 / nrm;

        SolverConfig scfg;
        scfg.dt = cfg.dt;
        Trajectory traj = integrate(phi, cfg.step_time, scfg);
        SweepRow row{sd, N, seed, cfg.eps0, 0.0, traj.blew_up};
        if (!traj.blew_up)
            row.deltaE = std::abs(energy(spec, traj.fields.back()) -
                                  energy(spec, traj.fields.front()));
        return row;
    });
    for (size_t i = 0; i < N_list.size(); ++i) {
        std::vector<double> dEs;
        for (int e = 0; e < ensemble_size; ++e) {
            const SweepRow& row = res.rows[i * static_cast<size_t>(ensemble_size) +
                                           static_cast<size_t>(e)];
            if (row.blowup)
                ++res.blowup_count;
            else
                dEs.push_back(row.deltaE);
        }
        res.medians.push_back(median(dEs));
    }

    // Refuse the fit when degenerate: too few points or increments at roundoff.
    const double floor = 1e-13 * cfg.eps0 * cfg.eps0;
    size_t live = 0;
    for (double m : res.medians)
        if (m > floor) ++live;
    if (N_list.size() >= 3 && live == N_list.size()) {
        std::vector<double> lx, ly;
        for (size_t i = 0; i < N_list.size(); ++i) {
            lx.push_back(std::log(N_list[i]));
            ly.push_back(std::log(res.medians[i]));
        }
        res.slope = fit_slope(lx, ly);
        res.slope_valid = true;
    }
    return res;
}

}  // namespace kdvlab

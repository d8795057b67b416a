#pragma once

// The global continuation loop: rescale to lambda(N), normalize
// ||I phi|| = eps0, take unit-time local steps while monitoring the
// modified energy, and stop at doubling or when the step budget
// ceil(lambda^3 T) is reached.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "kdvlab/conservation.hpp"
#include "kdvlab/scaling.hpp"
#include "kdvlab/xsb.hpp"

namespace kdvlab {

struct ScalingPlan {
    Rational s;
    double T;
    double N;
    double lambda;
    double eps0;
    long step_budget;  // ceil(lambda^3 T)
};

inline ScalingPlan make_plan(const Rational& s, double T, double N,
                             double eps0 = 0.1) {
    const double lambda = choose_lambda(s, N).lambda;
    return {s, T, N, lambda,
            eps0, static_cast<long>(std::ceil(lambda * lambda * lambda * T))};
}

struct LocalStepReport {
    SpectralField u_final;
    std::optional<double> xnorm_ratio;  // ||Iu||_{X_{0,1/2+}} / ||Iu(0)||_{L^2}
    bool blew_up = false;
};

struct DriverConfig {
    SolverConfig solver;
    double eps = 0.05;       // the "+" knob shared with the X-norm machinery
    int window_samples = 64; // temporal samples for the per-step X-norm
    bool record_xnorm = true;
};

/// One unit-time local step: integrate on [0,1], and record the ratio
/// standing in for the constant in the local space-time bound.
inline LocalStepReport local_step(const MultiplierSpec& spec,
                                  const SpectralField& u,
                                  const DriverConfig& cfg = {}) {
    const double l2_0 = std::sqrt(energy(spec, u));
    const double cadence =
        cfg.record_xnorm ? 1.0 / cfg.window_samples : 0.0;
    Trajectory traj = integrate(u, 1.0, cfg.solver, cadence);
    if (traj.blew_up) return {u, std::nullopt, true};

    LocalStepReport rep{traj.fields.back(), std::nullopt, false};
    if (cfg.record_xnorm && l2_0 > 0.0) {
        SpaceTimeField st = trajectory_to_spacetime(traj, 1.0);
        SpaceTimeField Iu(st.grid(), [&] {
            std::vector<SpectralField> v;
            for (int i = 0; i < st.num_times(); ++i)
                v.push_back(apply_I(spec, st.at(i)));
            return v;
        }(), 1.0);
        rep.xnorm_ratio =
            xsb_norm(Iu, XsbParams(0.0, 0.5 + cfg.eps, cfg.eps)) / l2_0;
    }
    return rep;
}

struct RunReport {
    ScalingPlan plan;
    long steps_completed = 0;
    std::vector<double> energy_trace;       // E after each step (index 0 = start)
    std::vector<double> xnorm_ratios;
    std::optional<long> doubling_step;      // first step with E > threshold
    bool success = false;                   // budget reached before doubling
    bool blew_up = false;
};

struct GlobalRunConfig {
    DriverConfig driver;
    double eps0 = 0.1;
    double doubling_factor = 2.0;  // threshold = factor * eps0^2 on E
    long max_steps_override = 0;   // 0: use the plan's budget
    bool normalize = true;
};

/// Rescale, normalize, iterate unit steps. Success means the full budget
/// completes before E exceeds doubling_factor * eps0^2.
inline RunReport global_run(const SpectralField& phi, const Rational& s,
                            double N, double T,
                            const GlobalRunConfig& cfg = {}) {
    ScalingPlan plan = make_plan(s, T, N, cfg.eps0);
    RunReport rep;
    MultiplierSpec spec(to_double(s), N);

    SpectralField u = rescale(phi, plan.lambda);
    if (cfg.normalize) {
        const double nrm = std::sqrt(energy(spec, u));
        if (nrm > 0.0) u *= plan.eps0 / nrm;
    }
    rep.plan = plan;
    const double threshold =
        cfg.doubling_factor * plan.eps0 * plan.eps0;
    const long budget =
        cfg.max_steps_override > 0 ? cfg.max_steps_override : plan.step_budget;

    rep.energy_trace.push_back(energy(spec, u));
    for (long k = 0; k < budget; ++k) {
        LocalStepReport lr = local_step(spec, u, cfg.driver);
        if (lr.blew_up) {
            rep.blew_up = true;
            return rep;
        }
        u = lr.u_final;
        ++rep.steps_completed;
        if (lr.xnorm_ratio) rep.xnorm_ratios.push_back(*lr.xnorm_ratio);
        const double E = energy(spec, u);
        rep.energy_trace.push_back(E);
        if (!rep.doubling_step && E > threshold) {
            rep.doubling_step = rep.steps_completed;
            return rep;
        }
    }
    rep.success = true;
    return rep;
}

}  // namespace kdvlab

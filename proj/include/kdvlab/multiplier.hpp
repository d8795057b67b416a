#pragma once

// The smoothing multiplier operator I: symbol m(xi) equal to 1 below N,
// equal to N^{-s}|xi|^s above 10N, bridged smoothly and monotonically in
// between. s < 0, N >= 4.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kdvlab/spectral_ops.hpp"

namespace kdvlab {

struct MultiplierSpec {
    double s;  // regularity index, s < 0
    double N;  // frequency threshold, N >= 4

    MultiplierSpec(double s_, double N_) : s(s_), N(N_) {
        if (!(s < 0.0)) throw std::invalid_argument("MultiplierSpec: s must be < 0");
        if (!(N >= 4.0)) throw std::invalid_argument("MultiplierSpec: N must be >= 4");
    }
};

/// m(xi): 1 on |xi| < N, N^{-s}|xi|^s on |xi| >= 10N. On [N, 10N] the
/// bridge is (N/|xi|)^{-s*S(r)} with r = log(|xi|/N)/log 10 and
/// S(r) = 3r^2 - 2r^3 (cubic smoothstep): C^1, monotone for s < 0, and
/// matching both endpoint formulas exactly.
inline double m_eval(const MultiplierSpec& spec, double xi) {
    const double a = std::abs(xi);
    if (a < spec.N) return 1.0;
    if (a >= 10.0 * spec.N) return std::pow(spec.N, -spec.s) * std::pow(a, spec.s);
    const double r = std::log(a / spec.N) / std::log(10.0);
    const double smooth = 3.0 * r * r - 2.0 * r * r * r;
    return std::pow(spec.N / a, -spec.s * smooth);
}

inline SpectralField apply_I(const MultiplierSpec& spec, const SpectralField& u) {
    return apply_symbol(u, [&spec](double xi) { return Complex(m_eval(spec, xi)); });
}

inline SpectralField apply_I_inverse(const MultiplierSpec& spec,
                                     const SpectralField& u) {
    return apply_symbol(u,
                        [&spec](double xi) { return Complex(1.0 / m_eval(spec, xi)); });
}

/// Startup self-check: m is nonincreasing in |xi| on a dense log grid and
/// stays in (0, 1].
inline void check_monotone(const MultiplierSpec& spec, int samples = 4096) {
    double prev = 1.0;
    for (int i = 0; i <= samples; ++i) {
        const double xi =
            spec.N * std::pow(1000.0, static_cast<double>(i) / samples) / 10.0;
        const double m = m_eval(spec, xi);
        if (!(m > 0.0 && m <= 1.0 && m <= prev + 1e-15))
            throw std::runtime_error("multiplier bridge failed monotonicity check");
        prev = m;
    }
}

/// Empirical constant in the interpolated mean-value bound
///   |m(xi1+xi2) - m(xi1)| <= C N^{-s} |xi1|^{s-theta} |xi2|^theta
/// over samples with |xi1| >= N/2, |xi2| <= 1. Returns the sampled sup of
/// the ratio; degenerate samples (xi2 = 0) are skipped.
inline double mvt_bound_check(const MultiplierSpec& spec, double theta,
                              const std::vector<double>& xi1_samples,
                              const std::vector<double>& xi2_samples) {
    if (theta < 0.0 || theta > 1.0)
        throw std::invalid_argument("mvt_bound_check: theta must lie in [0,1]");
    double sup = 0.0;
    for (double xi1 : xi1_samples) {
        if (!(std::abs(xi1) >= 0.5 * spec.N))
            throw std::invalid_argument("mvt_bound_check: |xi1| >= N/2 required");
        for (double xi2 : xi2_samples) {
            if (!(std::abs(xi2) <= 1.0))
                throw std::invalid_argument("mvt_bound_check: |xi2| <= 1 required");
            if (xi2 == 0.0) continue;
            const double num = std::abs(m_eval(spec, xi1 + xi2) - m_eval(spec, xi1));
            const double den = std::pow(spec.N, -spec.s) *
                               std::pow(std::abs(xi1), spec.s - theta) *
                               std::pow(std::abs(xi2), theta);
            sup = std::max(sup, num / den);
        }
    }
    return sup;
}

}  // namespace kdvlab

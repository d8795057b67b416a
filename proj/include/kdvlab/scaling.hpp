#pragma once

// Scaling symmetry u_lambda(x,t) = lambda^{-2} u(x/lambda, t/lambda^3) and
// the exact rational exponent bookkeeping of the continuation argument:
//   lambda ~ N^{-2s/(3+2s)},  feasibility  -6s/(3+2s) < 3/4  <=>  s > -3/10.

#include <boost/rational.hpp>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "kdvlab/grid.hpp"

namespace kdvlab {

using Rational = boost::rational<long long>;

inline double to_double(const Rational& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline std::string to_string(const Rational& r) {
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// lambda^{-2} phi(x/lambda), realized exactly in Fourier space: the grid
/// length is multiplied by lambda, the coefficient at xi/lambda is
/// lambda^{-2} times the coefficient at xi. ||phi_lambda|| = lambda^{-3/2}||phi||.
/// lambda < 1 is rejected here; undo_rescale inverts an earlier rescale.
inline SpectralField rescale(const SpectralField& phi, double lambda) {
    if (!(lambda >= 1.0)) throw std::invalid_argument("rescale: lambda must be >= 1");
    const SpatialGrid& g = phi.grid();
    SpatialGrid big(g.num_points(), g.length() * lambda);
    SpectralField out(big, phi.coeffs());
    out *= 1.0 / (lambda * lambda);
    return out;
}

/// Inverse of rescale(phi, lambda) on the enlarged grid.
inline SpectralField undo_rescale(const SpectralField& phi_lambda, double lambda) {
    if (!(lambda >= 1.0))
        throw std::invalid_argument("undo_rescale: lambda must be >= 1");
    const SpatialGrid& g = phi_lambda.grid();
    SpatialGrid small(g.num_points(), g.length() / lambda);
    SpectralField out(small, phi_lambda.coeffs());
    out *= lambda * lambda;
    return out;
}

struct LambdaChoice {
    Rational exponent;  // -2s/(3+2s), exact
    double lambda;      // N^exponent
};

inline LambdaChoice choose_lambda(const Rational& s, double N) {
    if (!(s > Rational(-3, 2) && s < Rational(0)))
        throw std::invalid_argument("choose_lambda: s must lie in (-3/2, 0)");
    const Rational exponent = Rational(-2) * s / (Rational(3) + Rational(2) * s);
    return {exponent, std::pow(N, to_double(exponent))};
}

enum class SCondition { holds_for_large_N, marginal, fails };

struct SConditionReport {
    SCondition verdict;
    Rational steps_exponent;   // 3/4 (iteration count N^{3/4-})
    Rational demand_exponent;  // -6s/(3+2s) (steps demanded, lambda^3 T)
    std::optional<double> minimal_N;  // least power of two making the budget fit
};

/// Exact comparison of 3/4 against -6s/(3+2s); when the condition holds,
/// also the least power-of-two N with N^{3/4 - eps} >= N^{-6s/(3+2s)} * T.
inline SConditionReport check_s_condition(const Rational& s, double T,
                                          double eps = 0.05) {
    if (!(s > Rational(-3, 2) && s < Rational(0)))
        throw std::invalid_argument("check_s_condition: s must lie in (-3/2, 0)");
    const Rational steps(3, 4);
    const Rational demand = Rational(-6) * s / (Rational(3) + Rational(2) * s);
    SConditionReport rep{SCondition::fails, steps, demand, std::nullopt};
    if (demand < steps)
        rep.verdict = SCondition::holds_for_large_N;
    else if (demand == steps)
        rep.verdict = SCondition::marginal;
    if (rep.verdict == SCondition::holds_for_large_N) {
        const double gap = 0.75 - eps - to_double(demand);
        if (gap > 0.0) {
            // compare in logs: the minimal N can be astronomically large
            for (double N = 4.0; N <= 1e300; N *= 2.0) {
                if ((0.75 - eps) * std::log(N) >=
                    to_double(demand) * std::log(N) + std::log(T)) {
                    rep.minimal_N = N;
                    break;
                }
            }
        }
    }
    return rep;
}

}  // namespace kdvlab

#pragma once

// Empirical verification of the extra-smoothing bilinear estimate and of
// the auxiliary two-parameter bilinear lemma: interaction-by-interaction
// ratio measurements in discrete X_{s,b} norms on windowed free evolutions.

#include <cstdint>
#include <string>
#include <vector>

#include "kdvlab/conservation.hpp"
#include "kdvlab/random_fields.hpp"
#include "kdvlab/xsb.hpp"

namespace kdvlab {

struct LemmaParams {
    double alpha;
    double gamma1;
    double gamma2;
    double eps = 0.05;

    bool admissible() const {
        return alpha - (gamma1 + gamma2) < 0.75 && alpha - gamma1 < 0.5 &&
               alpha - gamma2 < 0.5;
    }
};

enum class InteractionKind { vl_high, low_high, high_high };

inline std::string to_string(InteractionKind k) {
    switch (k) {
        case InteractionKind::vl_high: return "vl_high";
        case InteractionKind::low_high: return "low_high";
        case InteractionKind::high_high: return "high_high";
    }
    return "?";
}

struct InteractionCase {
    InteractionKind kind;
    double theta = 0.8;  // used by the vl_high reduction; > 3/4 there
};

struct TestPairConfig {
    int num_points = 1024;
    double length = 8.0 * std::numbers::pi;
    double t_window = 1.0;
    int time_samples = 64;
    double vl_cutoff = 1.0;
};

/// Windowed free evolutions with nonnegative even coefficients: the first
/// factor supported in the high band, the second per the interaction case.
inline std::pair<SpaceTimeField, SpaceTimeField> make_test_pair(
    const InteractionCase& c, const MultiplierSpec& spec, std::uint64_t seed,
    const TestPairConfig& cfg = {}) {
    SpatialGrid grid(cfg.num_points, cfg.length);
    const double xi_max = grid.max_frequency();

    SpectralField u0 =
        random_nonneg_band_field(grid, 0.5 * spec.N, xi_max, seed);
    double lo = 0.0, hi = cfg.vl_cutoff;
    if (c.kind == InteractionKind::low_high) {
        lo = cfg.vl_cutoff;
        hi = 0.5 * spec.N;
    } else if (c.kind == InteractionKind::high_high) {
        lo = 0.5 * spec.N;
        hi = xi_max;
    }
    SpectralField v0 = random_nonneg_band_field(grid, lo, hi, seed + 0x9e3779b9u);
    // band edges are half-open on the low side for low/high bands
    if (c.kind != InteractionKind::vl_high) {
        Band b = c.kind == InteractionKind::low_high ? Band::low : Band::high;
        v0 = project_band(v0, b, spec.N, cfg.vl_cutoff);
    }
    return {free_evolution(u0, cfg.t_window, cfg.time_samples),
            free_evolution(v0, cfg.t_window, cfg.time_samples)};
}

/// Apply a per-time-slice spectral map to a SpaceTimeField.
template <typename F>
inline SpaceTimeField map_slices(const SpaceTimeField& f, F&& op) {
    std::vector<SpectralField> vals;
    vals.reserve(static_cast<size_t>(f.num_times()));
    for (int i = 0; i < f.num_times(); ++i) vals.push_back(op(f.at(i)));
    return SpaceTimeField(f.grid(), std::move(vals), f.t_window());
}

/// ||d/dx{I(u)I(v) - I(uv)}||_{X_{0,-1/2-eps}} divided by
/// ||Iu||_{X_{0,1/2+eps}} ||Iv||_{X_{0,1/2+eps}}. If the extra-smoothing
/// estimate holds, ratio * N^{3/4-eps} stays bounded uniformly in N.
inline double smoothing_ratio(const SpaceTimeField& u, const SpaceTimeField& v,
                              const MultiplierSpec& spec, double eps = 0.05) {
    std::vector<SpectralField> vals;
    for (int i = 0; i < u.num_times(); ++i)
        vals.push_back(commutator_field(spec, u.at(i), v.at(i)));
    SpaceTimeField comm(u.grid(), std::move(vals), u.t_window());
    const double num = xsb_norm(comm, XsbParams(0.0, -(0.5 + eps), eps));
    auto I = [&](const SpaceTimeField& f) {
        return map_slices(f, [&](const SpectralField& g) { return apply_I(spec, g); });
    };
    const double du = xsb_norm(I(u), XsbParams(0.0, 0.5 + eps, eps));
    const double dv = xsb_norm(I(v), XsbParams(0.0, 0.5 + eps, eps));
    if (du == 0.0 || dv == 0.0)
        throw std::invalid_argument("smoothing_ratio: zero denominator");
    return num / (du * dv);
}

/// ||d/dx(uv)||_{X_{alpha,-1/2+eps}} / (||u||_{X_{-g1,1/2+eps}} ||v||_{X_{-g2,1/2+eps}}),
/// requiring both spatial supports outside {|xi| < 1}.
inline double lemma1_ratio(const SpaceTimeField& u, const SpaceTimeField& v,
                           const LemmaParams& p) {
    auto check_support = [](const SpaceTimeField& f) {
        const int n = f.grid().num_points();
        for (int j = 0; j < n; ++j)
            if (std::abs(f.grid().frequency(j)) < 1.0 && std::abs(f.at(0)[j]) != 0.0)
                throw std::invalid_argument(
                    "lemma1_ratio: support must avoid {|xi| < 1}");
    };
    check_support(u);
    check_support(v);

    std::vector<SpectralField> vals;
    for (int i = 0; i < u.num_times(); ++i)
        vals.push_back(derivative(padded_product(u.at(i), v.at(i)), 1));
    SpaceTimeField dprod(u.grid(), std::move(vals), u.t_window());

    const double num = xsb_norm(dprod, XsbParams(p.alpha, -0.5 + p.eps, p.eps));
    const double du = xsb_norm(u, XsbParams(-p.gamma1, 0.5 + p.eps, p.eps));
    const double dv = xsb_norm(v, XsbParams(-p.gamma2, 0.5 + p.eps, p.eps));
    if (du == 0.0 || dv == 0.0)
        throw std::invalid_argument("lemma1_ratio: zero denominator");
    return num / (du * dv);
}

/// Adversarial near-resonant pair: u concentrated near +K, v near -K+1,
/// so the product sits at O(1) output frequencies where <tau - xi^3> is
/// small for both factors' Airy phases.
inline std::pair<SpaceTimeField, SpaceTimeField> make_adversarial_pair(
    double K, std::uint64_t seed, const TestPairConfig& cfg = {}) {
    SpatialGrid grid(cfg.num_points, cfg.length);
    SpectralField u0 = random_nonneg_band_field(grid, K, 1.25 * K, seed);
    SpectralField v0 =
        random_nonneg_band_field(grid, std::max(1.0, K - 1.25 * cfg.vl_cutoff - 2.0),
                                 K - 1.0, seed + 77);
    return {free_evolution(u0, cfg.t_window, cfg.time_samples),
            free_evolution(v0, cfg.t_window, cfg.time_samples)};
}

struct BoundaryRow {
    LemmaParams params;
    double N;  // frequency scale K of the adversarial pair
    double max_ratio;
    bool admissible;
};

/// Measure max lemma1 ratios over an ensemble (random band pairs plus the
/// adversarial near-resonant construction) for each parameter point and
/// each frequency scale. Reports trends; asserts nothing.
inline std::vector<BoundaryRow> boundary_explorer(
    const std::vector<LemmaParams>& p_grid, const std::vector<double>& scales,
    int ensemble_size, const TestPairConfig& cfg = {}) {
    std::vector<BoundaryRow> table;
    if (ensemble_size <= 0) return table;
    for (const auto& p : p_grid) {
        for (double K : scales) {
            double worst = 0.0;
            for (int e = 0; e < ensemble_size; ++e) {
                auto [u, v] = make_adversarial_pair(K, 1000 + static_cast<std::uint64_t>(e), cfg);
                worst = std::max(worst, lemma1_ratio(u, v, p));
            }
            table.push_back({p, K, worst, p.admissible()});
        }
    }
    return table;
}

}  // namespace kdvlab

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "kdvlab/driver.hpp"
#include "kdvlab/random_fields.hpp"

using namespace kdvlab;
namespace {
constexpr double pi = std::numbers::pi;

SpectralField two_sided_mode(const SpatialGrid& g, int k, double a) {
    SpectralField f(g);
    f[k] = a;
    f[g.num_points() - k] = a;
    return f;
}

/// Direct-summation X_{s,b} norm of pure modes amp e^{i xi x} e^{i tau0 t},
/// mirroring the windowed temporal transform with a plain DFT.
double oracle_norm(const std::vector<std::tuple<double, double, Complex>>& modes,
                   double L, double Tw, int M, const XsbParams& p) {
    double acc = 0.0;
    for (const auto& [xi, tau0, amp] : modes) {
        const double ws = std::pow(1.0 + xi * xi, p.s);
        for (int m = 0; m < M; ++m) {
            const int km = m < M / 2 ? m : m - M;
            const double tau = 2.0 * pi * km / Tw;
            Complex c(0.0, 0.0);
            for (int i = 0; i < M; ++i) {
                const double t = Tw * i / M;
                c += bump_window(static_cast<double>(i) / M) * amp *
                     std::polar(1.0, tau0 * t) *
                     std::polar(1.0, -2.0 * pi * m * i / static_cast<double>(M));
            }
            c /= static_cast<double>(M);
            const double dev = tau - xi * xi * xi;
            acc += ws * std::pow(1.0 + dev * dev, p.b) * std::norm(c);
        }
    }
    return std::sqrt(L * Tw * acc);
}

}  // namespace

TEST_CASE("rescale: lambda = 1 is the identity") {
    SpatialGrid g(128, 2 * pi);
    auto phi = random_rough_field(g, -0.3, 40, 1);
    auto out = rescale(phi, 1.0);
    CHECK(out.grid().length() == g.length());
    for (int j = 0; j < g.num_points(); ++j) CHECK(out[j] == phi[j]);
}

TEST_CASE("rescale: L^2 scaling exponent is -3/2") {
    SpatialGrid g(256, 2 * pi);
    auto phi = random_rough_field(g, -0.3, 80, 2);
    const double n0 = phi.l2_norm();
    for (double lam : {1.5, 2.0, 7.3, 64.0}) {
        const double nl = rescale(phi, lam).l2_norm();
        const double expo = std::log(nl / n0) / std::log(lam);
        CHECK(expo == doctest::Approx(-1.5).epsilon(1e-10));
    }
}

TEST_CASE("rescale: round trip is the identity to 1e-12") {
    SpatialGrid g(128, 2 * pi);
    auto phi = random_rough_field(g, -0.3, 40, 3);
    for (double lam : {2.0, 5.5}) {
        auto back = undo_rescale(rescale(phi, lam), lam);
        CHECK(back.grid().length() == doctest::Approx(g.length()).epsilon(1e-14));
        for (int j = 0; j < g.num_points(); ++j)
            CHECK(std::abs(back[j] - phi[j]) <= 1e-12 * (std::abs(phi[j]) + 1.0));
    }
}

TEST_CASE("rescale: lambda < 1 is rejected") {
    SpatialGrid g(64, 2 * pi);
    SpectralField phi(g);
    CHECK_THROWS_AS((void)rescale(phi, 0.5), std::invalid_argument);
    CHECK_THROWS_AS((void)undo_rescale(phi, 0.5), std::invalid_argument);
}

TEST_CASE("rescale: single-mode bound on ||I phi_lambda||") {
    // For a pure mode at xi0 that lands below N after rescaling, the bound
    // ||I phi_lambda|| <= lambda^{-3/2-s} N^{-s} ||phi||_{H^s} is a direct
    // computation: the left side is exactly lambda^{-3/2} ||phi||_{L^2}.
    SpatialGrid g(128, 2 * pi);
    const double s = -0.25;
    for (double N : {16.0, 64.0}) {
        MultiplierSpec spec(s, N);
        for (int k : {2, 5, 11}) {
            auto phi = two_sided_mode(g, k, 1.0);
            const double lam = choose_lambda(Rational(-1, 4), N).lambda;
            auto phil = rescale(phi, lam);
            const double xi_resc = phil.grid().frequency(k);
            REQUIRE(xi_resc < N);  // m = 1 there
            const double lhs = std::sqrt(energy(spec, phil));
            CHECK(lhs == doctest::Approx(std::pow(lam, -1.5) * phi.l2_norm())
                             .epsilon(1e-12));
            const double hs = sobolev_norm(phi, s);
            const double xi0 = g.frequency(k);
            if (1.0 + xi0 * xi0 <= std::pow(lam * N, 2.0))
                CHECK(lhs <= std::pow(lam, -1.5 - s) * std::pow(N, -s) * hs *
                                 (1 + 1e-12));
        }
    }
}

TEST_CASE("choose_lambda: exact rational exponents") {
    CHECK(choose_lambda(Rational(-3, 10), 16.0).exponent == Rational(1, 4));
    CHECK(choose_lambda(Rational(-1, 4), 64.0).exponent == Rational(1, 5));
    CHECK(choose_lambda(Rational(-3, 10), 16.0).lambda ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK(choose_lambda(Rational(-1, 4), 64.0).lambda ==
          doctest::Approx(std::pow(64.0, 0.2)).epsilon(1e-14));
    CHECK_THROWS_AS((void)choose_lambda(Rational(-3, 2), 16.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)choose_lambda(Rational(0), 16.0), std::invalid_argument);
}

TEST_CASE("check_s_condition: exact verdicts") {
    auto marg = check_s_condition(Rational(-3, 10), 10.0);
    CHECK(marg.verdict == SCondition::marginal);
    CHECK(marg.demand_exponent == Rational(3, 4));
    CHECK_FALSE(marg.minimal_N.has_value());

    auto holds = check_s_condition(Rational(-1, 4), 10.0);
    CHECK(holds.verdict == SCondition::holds_for_large_N);
    CHECK(holds.demand_exponent == Rational(3, 5));
    REQUIRE(holds.minimal_N.has_value());
    const double N = *holds.minimal_N;
    const double d = to_double(holds.demand_exponent);
    CHECK(std::pow(N, 0.75 - 0.05) >= std::pow(N, d) * 10.0);
    if (N > 4.0)
        CHECK(std::pow(N / 2, 0.75 - 0.05) < std::pow(N / 2, d) * 10.0);

    auto fails = check_s_condition(Rational(-1, 2), 10.0);
    CHECK(fails.verdict == SCondition::fails);
    CHECK(fails.demand_exponent == Rational(3, 2));
}

TEST_CASE("s-condition property: -6s/(3+2s) < 3/4 for rational s in (-3/10, 0)") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long long> den(11, 4000);
    for (int trial = 0; trial < 400; ++trial) {
        const long long q = den(rng);
        std::uniform_int_distribution<long long> num(1, (3 * q - 1) / 10);
        const Rational s(-num(rng), q);
        REQUIRE(s > Rational(-3, 10));
        REQUIRE(s < Rational(0));
        const Rational demand = Rational(-6) * s / (Rational(3) + Rational(2) * s);
        CHECK(demand < Rational(3, 4));
        CHECK(check_s_condition(s, 1.0).verdict == SCondition::holds_for_large_N);
    }
}

TEST_CASE("local_step: zero field stays zero with no ratio") {
    SpatialGrid g(64, 2 * pi);
    MultiplierSpec spec(-0.25, 16.0);
    auto rep = local_step(spec, SpectralField(g));
    CHECK_FALSE(rep.blew_up);
    CHECK_FALSE(rep.xnorm_ratio.has_value());
    for (int j = 0; j < g.num_points(); ++j) CHECK(std::abs(rep.u_final[j]) == 0.0);
}

TEST_CASE("local_step: linear-only ratio matches the window oracle") {
    SpatialGrid g(64, 2 * pi);
    MultiplierSpec spec(-0.25, 16.0);
    const double a = 0.04;
    auto u0 = two_sided_mode(g, 1, a);

    DriverConfig cfg;
    cfg.solver.nonlinear = false;
    cfg.solver.dt = 1.0 / 256;
    cfg.window_samples = 64;
    auto rep = local_step(spec, u0, cfg);
    REQUIRE(rep.xnorm_ratio.has_value());

    // mode +-1 evolves with tau0 = +-1; m(1) = 1 cancels between numerator
    // and the L^2 normalization up to the explicit factors below
    const double num = oracle_norm({{1.0, 1.0, a}, {-1.0, -1.0, a}},
                                   g.length(), 1.0, 64, XsbParams(0.0, 0.55, 0.05));
    const double den = std::sqrt(g.length() * 2.0 * a * a);
    CHECK(*rep.xnorm_ratio == doctest::Approx(num / den).epsilon(1e-10));
}

TEST_CASE("local_step: ratio stable across resolutions for a small pulse") {
    MultiplierSpec spec(-0.25, 16.0);
    std::vector<double> ratios;
    for (int n : {512, 1024, 2048}) {
        SpatialGrid g(n, 16 * pi);
        auto u0 = to_spectral(g, soliton_samples(g, 1.0, 0.0));
        u0 *= 0.1 / std::sqrt(energy(spec, u0));
        DriverConfig cfg;
        cfg.solver.dt = 1.0 / 256;
        auto rep = local_step(spec, u0, cfg);
        REQUIRE(rep.xnorm_ratio.has_value());
        ratios.push_back(*rep.xnorm_ratio);
    }
    for (double r : ratios) {
        CHECK(r <= 2.0 * ratios[0]);
        CHECK(r >= 0.5 * ratios[0]);
    }
}

TEST_CASE("make_plan: step budget for s = -1/4, N = 64, T = 4 is 49") {
    ScalingPlan plan = make_plan(Rational(-1, 4), 4.0, 64.0);
    CHECK(plan.step_budget == 49);
    CHECK(plan.lambda == doctest::Approx(std::pow(64.0, 0.2)).epsilon(1e-14));
}

TEST_CASE("global_run: identity multiplier regime always succeeds") {
    // N above the grid maximum: I is the identity and E is the conserved
    // L^2 mass; with the nonlinearity disabled the drift is roundoff.
    SpatialGrid g(128, 2 * pi);
    auto phi = random_rough_field(g, -0.3, 30, 7);
    GlobalRunConfig cfg;
    cfg.driver.solver.nonlinear = false;
    cfg.driver.solver.dt = 0.01;
    cfg.driver.record_xnorm = false;
    cfg.max_steps_override = 5;
    auto rep = global_run(phi, Rational(-1, 4), 4096.0, 4.0, cfg);
    CHECK(rep.success);
    CHECK_FALSE(rep.doubling_step.has_value());
    CHECK(rep.steps_completed == 5);
    REQUIRE(rep.energy_trace.size() == 6);
    const double E0 = rep.energy_trace[0];
    CHECK(E0 == doctest::Approx(0.01).epsilon(1e-12));  // eps0^2
    for (double E : rep.energy_trace) CHECK(std::abs(E - E0) <= 1e-10 * E0);
}

TEST_CASE("global_run: report bookkeeping and per-step increment bound") {
    SpatialGrid g(256, 4 * pi);
    auto phi = random_rough_field(g, -0.25, 60, 8);
    GlobalRunConfig cfg;
    cfg.driver.solver.dt = 1e-2;
    cfg.driver.record_xnorm = true;
    cfg.driver.window_samples = 32;
    cfg.max_steps_override = 3;
    auto rep = global_run(phi, Rational(-1, 4), 16.0, 4.0, cfg);
    CHECK(rep.steps_completed == 3);
    CHECK(rep.energy_trace.size() == 4);
    CHECK(rep.xnorm_ratios.size() == 3);
    CHECK(rep.success);

    double max_inc = 0.0;
    for (size_t i = 1; i < rep.energy_trace.size(); ++i)
        max_inc = std::max(max_inc,
                           std::abs(rep.energy_trace[i] - rep.energy_trace[i - 1]));
    const double total = std::abs(rep.energy_trace.back() - rep.energy_trace[0]);
    CHECK(total <= 3.0 * max_inc * (1 + 1e-12));
}

TEST_CASE("global_run: doubling is detected and stops the run") {
    SpatialGrid g(256, 4 * pi);
    auto phi = random_rough_field(g, -0.25, 60, 9);
    GlobalRunConfig cfg;
    cfg.driver.solver.dt = 1e-2;
    cfg.driver.record_xnorm = false;
    cfg.max_steps_override = 5;
    cfg.doubling_factor = 1.0 - 1e-9;  // threshold just below E(0): trips at once
    auto rep = global_run(phi, Rational(-1, 4), 16.0, 4.0, cfg);
    CHECK_FALSE(rep.success);
    REQUIRE(rep.doubling_step.has_value());
    CHECK(*rep.doubling_step >= 1);
    CHECK(rep.steps_completed == *rep.doubling_step);
}

// Experiment runner: every verification in the library exposed as a
// subcommand with reproducible seeded configs and machine-readable output.
//
//   simulate         pseudospectral KdV run + conservation report
//   sweep-n          energy-increment decay across N (fitted slope)
//   verify-identity  almost-conservation identity residuals
//   verify-bilinear  extra-smoothing / lemma ratio tables
//   exponents        exact rational exponent bookkeeping
//   global-run       the rescale-normalize-iterate continuation loop
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure (blow-up or
// degenerate data), 3 --check mode failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "kdvlab/bilinear.hpp"
#include "kdvlab/driver.hpp"
#include "kdvlab/report.hpp"

using namespace kdvlab;
using nlohmann::json;

namespace {

Rational parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos)
        throw CLI::ValidationError("expected a rational like -1/4: " + text);
    return Rational(std::stoll(text.substr(0, slash)),
                    std::stoll(text.substr(slash + 1)));
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

void emit(const CsvReport& rep, const std::string& out_path) {
    if (out_path.empty() || out_path == "-")
        std::cout << rep.str();
    else
        rep.write(out_path);
}

struct Common {
    std::string out;
    std::uint64_t seed = 1;
    int workers = 1;
    bool check = false;
    std::string config;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("-o,--out", c.out, "output path ('-' or empty: stdout)");
    sub->add_option("--seed", c.seed, "base RNG seed");
    sub->add_option("--workers", c.workers, "worker pool size");
    sub->add_flag("--check", c.check, "exit 3 if the built-in check fails");
    sub->add_option("--config", c.config,
                    "key=value config file (flags override)");
}

// Subcommand-level config files: plain key=value lines, '#' comments.
// Applied after parsing so explicit flags always win.
void apply_config(CLI::App* sub, const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file: " + path);
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        CLI::Option* op = sub->get_option_no_throw("--" + key);
        if (op == nullptr || key.empty())
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        if (op->count() > 0) continue;
        std::istringstream vals(line.substr(eq + 1));
        for (std::string tok; vals >> tok;) op->add_result(tok);
        op->run_callback();
    }
}

int run_simulate(const Common& c, const std::string& preset, int n, double length,
                 double dt, double t_final, bool dealias) {
    SpatialGrid grid(n, length);
    SpectralField u0(grid);
    if (preset == "soliton") {
        u0 = to_spectral(grid, soliton_samples(grid, 1.0));
    } else if (preset == "zero") {
        // stays zero
    } else if (preset == "rough") {
        u0 = random_rough_field(grid, -0.25, n / 3, c.seed);
        u0 *= 0.1 / u0.l2_norm();
    } else {
        std::cerr << "unknown preset: " << preset << "\n";
        return 1;
    }

    SolverConfig cfg;
    cfg.dt = dt;
    cfg.dealias = dealias;
    Trajectory traj = integrate(u0, t_final, cfg, t_final / 16.0);

    std::ostringstream conf;
    conf << "simulate preset=" << preset << " n=" << n << " length=" << length
         << " dt=" << dt << " t_final=" << t_final << " dealias=" << dealias
         << " seed=" << c.seed;
    CsvReport rep("t,l2_norm,l2_drift_rel,max_amp", conf.str());
    const double norm0 = traj.fields[0].l2_norm();
    for (size_t i = 0; i < traj.size(); ++i) {
        const double nrm = traj.fields[i].l2_norm();
        rep.row(fmt(traj.times[i]) + "," + fmt(nrm) + "," +
                fmt(norm0 > 0 ? std::abs(nrm - norm0) / norm0 : 0.0) + "," +
                fmt(max_abs(to_spatial(traj.fields[i]))));
    }
    emit(rep, c.out);
    if (traj.blew_up) {
        std::cerr << "blow-up detected at t=" << traj.times.back() << "\n";
        return 2;
    }
    return 0;
}

int run_sweep_n(const Common& c, const std::string& s_text,
                std::vector<double> N_list, int ensemble, double eps0, int n,
                double length, double dt) {
    const Rational s = parse_rational(s_text);
    SweepConfig cfg;
    cfg.num_points = n;
    cfg.length = length;
    cfg.eps0 = eps0;
    cfg.dt = dt;
    cfg.seed_base = c.seed;

    // One task per N; rows are merged in N-list order regardless of workers.
    std::vector<SweepResult> parts = parallel_map<SweepResult>(
        static_cast<int>(N_list.size()), c.workers, [&](int i) {
            return increment_decay_sweep(s, {N_list[static_cast<size_t>(i)]}, ensemble, cfg);
        });
    SweepResult merged;
    merged.N_values = N_list;
    for (auto& p : parts) {
        merged.rows.insert(merged.rows.end(), p.rows.begin(), p.rows.end());
        merged.medians.push_back(p.medians.at(0));
        merged.blowup_count += p.blowup_count;
    }
    const double floor = 1e-13 * eps0 * eps0;
    size_t live = 0;
    for (double m : merged.medians)
        if (m > floor) ++live;
    if (N_list.size() >= 3 && live == N_list.size()) {
        std::vector<double> lx, ly;
        for (size_t i = 0; i < N_list.size(); ++i) {
            lx.push_back(std::log(N_list[i]));
            ly.push_back(std::log(merged.medians[i]));
        }
        merged.slope = fit_slope(lx, ly);
        merged.slope_valid = true;
    }

    std::ostringstream conf;
    conf << "sweep-n s=" << s_text << " ensemble=" << ensemble << " eps0=" << eps0
         << " n=" << n << " length=" << length << " dt=" << dt
         << " seed=" << c.seed << " N=";
    for (double N : N_list) conf << N << ";";
    CsvReport rep("s,N,seed,eps0,deltaE,blowup_flag", conf.str());
    for (const auto& r : merged.rows)
        rep.row(fmt(r.s) + "," + fmt(r.N) + "," + std::to_string(r.seed) + "," +
                fmt(r.eps0) + "," + fmt(r.deltaE) + "," + (r.blowup ? "1" : "0"));
    for (size_t i = 0; i < N_list.size(); ++i)
        rep.row("# median N=" + fmt(N_list[i]) + " deltaE=" + fmt(merged.medians[i]));
    if (merged.slope_valid)
        rep.row("# fitted_slope=" + fmt(merged.slope));
    else
        rep.row("# fitted_slope=refused (need >= 3 N values with non-degenerate increments)");
    emit(rep, c.out);

    if (!merged.slope_valid && N_list.size() >= 3) return 2;
    if (c.check && merged.slope_valid && merged.slope > -0.70) return 3;
    return 0;
}

int run_verify_identity(const Common& c, const std::string& s_text, double N,
                        int n, double length, double dt, double t_final) {
    const Rational s = parse_rational(s_text);
    MultiplierSpec spec(to_double(s), N);
    SpatialGrid grid(n, length);
    SpectralField u0 = random_rough_field(grid, -to_double(s) - 0.5, n / 3, c.seed);
    u0 *= 0.5 / sobolev_norm(u0, to_double(s));

    SolverConfig cfg;
    cfg.dt = dt;
    const int samples = 128;
    Trajectory traj = integrate(u0, t_final, cfg, t_final / samples);
    if (traj.blew_up) {
        std::cerr << "blow-up during identity run\n";
        return 2;
    }
    EnergyTrace tr = identity_residual(spec, traj);

    std::ostringstream conf;
    conf << "verify-identity s=" << s_text << " N=" << N << " n=" << n
         << " length=" << length << " dt=" << dt << " t_final=" << t_final
         << " seed=" << c.seed;
    CsvReport rep("t,E,commutator_integral,residual", conf.str());
    for (size_t i = 0; i < tr.times.size(); ++i)
        rep.row(fmt(tr.times[i]) + "," + fmt(tr.E[i]) + "," +
                fmt(tr.commutator_integral[i]) + "," + fmt(tr.residual[i]));
    rep.row("# max_residual=" + fmt(tr.max_residual) +
            " max_dEdt=" + fmt(tr.max_dEdt));
    emit(rep, c.out);
    if (c.check && tr.max_residual > 1e-3 * tr.max_dEdt) return 3;
    return 0;
}

int run_verify_bilinear(const Common& c, const std::string& mode,
                        const std::string& s_text, std::vector<double> N_list,
                        int ensemble, double eps, int n, double length) {
    const double s = to_double(parse_rational(s_text));
    TestPairConfig pcfg;
    pcfg.num_points = n;
    pcfg.length = length;

    std::ostringstream conf;
    conf << "verify-bilinear mode=" << mode << " s=" << s_text
         << " ensemble=" << ensemble << " eps=" << eps << " n=" << n
         << " length=" << length << " seed=" << c.seed;
    CsvReport rep("case,N,alpha,gamma1,gamma2,eps,seed,ratio,scaled_ratio",
                  conf.str());

    bool bounded = true;
    if (mode == "smoothing") {
        for (InteractionKind kind : {InteractionKind::vl_high,
                                     InteractionKind::low_high,
                                     InteractionKind::high_high}) {
            std::vector<double> first_median;
            for (double N : N_list) {
                MultiplierSpec spec(s, N);
                std::vector<double> scaled;
                std::vector<double> ratios = parallel_map<double>(
                    ensemble, c.workers, [&](int e) {
                        auto [u, v] = make_test_pair(
                            {kind, 0.8}, spec,
                            c.seed + static_cast<std::uint64_t>(e), pcfg);
                        return smoothing_ratio(u, v, spec, eps);
                    });
                for (int e = 0; e < ensemble; ++e) {
                    const double sc = ratios[static_cast<size_t>(e)] * std::pow(N, 0.75 - eps);
                    scaled.push_back(sc);
                    rep.row(to_string(kind) + "," + fmt(N) + ",,,," + fmt(eps) +
                            "," + std::to_string(c.seed + static_cast<std::uint64_t>(e)) + "," +
                            fmt(ratios[static_cast<size_t>(e)]) + "," + fmt(sc));
                }
                first_median.push_back(median(scaled));
                rep.row("# median " + to_string(kind) + " N=" + fmt(N) +
                        " scaled=" + fmt(median(scaled)));
            }
            const auto [lo, hi] = std::minmax_element(first_median.begin(),
                                                      first_median.end());
            if (*hi > 4.0 * *lo) bounded = false;
        }
    } else if (mode == "lemma-boundary") {
        std::vector<LemmaParams> grid_pts = {
            {0.0, 0.0, 0.0, eps},          // Kenig-Ponce-Vega shape
            {0.0, -0.375 + eps, -0.375 + eps, eps},  // the paper's application
            {0.0, -0.5, -0.5, eps},        // deep interior
            {1.0, 0.0, 0.0, eps},          // violating: alpha-(g1+g2) = 1
        };
        auto table = boundary_explorer(grid_pts, N_list, ensemble, pcfg);
        for (const auto& r : table)
            rep.row(std::string(r.admissible ? "admissible" : "violating") + "," +
                    fmt(r.N) + "," + fmt(r.params.alpha) + "," +
                    fmt(r.params.gamma1) + "," + fmt(r.params.gamma2) + "," +
                    fmt(eps) + "," + std::to_string(c.seed) + "," +
                    fmt(r.max_ratio) + ",");
    } else {
        std::cerr << "unknown mode: " << mode << "\n";
        return 1;
    }
    emit(rep, c.out);
    if (c.check && !bounded) return 3;
    return 0;
}

int run_exponents(const Common& c, const std::string& s_text, double T,
                  double eps) {
    const Rational s = parse_rational(s_text);
    json out;
    out["s"] = to_string(s);
    out["T"] = T;
    out["eps"] = eps;
    const LambdaChoice lc = choose_lambda(s, 64.0);
    out["lambda_exponent"] = to_string(lc.exponent);
    const SConditionReport rep = check_s_condition(s, T, eps);
    out["steps_exponent"] = to_string(rep.steps_exponent);
    out["demand_exponent"] = to_string(rep.demand_exponent);
    out["verdict"] = rep.verdict == SCondition::holds_for_large_N ? "holds"
                     : rep.verdict == SCondition::marginal        ? "marginal"
                                                                  : "fails";
    if (rep.minimal_N) out["minimal_N"] = *rep.minimal_N;
    out["version"] = kVersion;
    const std::string body = out.dump(2) + "\n";
    if (c.out.empty() || c.out == "-") {
        std::cout << body;
    } else {
        std::ofstream f(c.out, std::ios::binary);
        f << body;
    }
    return 0;
}

int run_global(const Common& c, const std::string& s_text, double N, double T,
               int n, double length, double eps0, double dt, bool linear_only,
               int ensemble) {
    const Rational s = parse_rational(s_text);
    SpatialGrid grid(n, length);

    std::ostringstream conf;
    conf << "global-run s=" << s_text << " N=" << N << " T=" << T << " n=" << n
         << " length=" << length << " eps0=" << eps0 << " dt=" << dt
         << " linear_only=" << linear_only << " ensemble=" << ensemble
         << " seed=" << c.seed;
    CsvReport rep("seed,steps_completed,budget,doubling_step,success,E_final",
                  conf.str());

    GlobalRunConfig cfg;
    cfg.eps0 = eps0;
    cfg.driver.solver.dt = dt;
    cfg.driver.solver.nonlinear = !linear_only;

    std::vector<RunReport> reports = parallel_map<RunReport>(
        ensemble, c.workers, [&](int e) {
            SpectralField phi = random_rough_field(
                grid, -to_double(s) - 0.5, n / 3,
                c.seed + static_cast<std::uint64_t>(e));
            return global_run(phi, s, N, T, cfg);
        });

    json summary;
    int successes = 0;
    for (int e = 0; e < ensemble; ++e) {
        const RunReport& r = reports[static_cast<size_t>(e)];
        if (r.success) ++successes;
        rep.row(std::to_string(c.seed + static_cast<std::uint64_t>(e)) + "," +
                std::to_string(r.steps_completed) + "," +
                std::to_string(r.plan.step_budget) + "," +
                (r.doubling_step ? std::to_string(*r.doubling_step) : "") + "," +
                (r.success ? "1" : "0") + "," + fmt(r.energy_trace.back()));
    }
    rep.row("# successes=" + std::to_string(successes) + "/" +
            std::to_string(ensemble));
    emit(rep, c.out);
    if (c.check && successes * 8 < ensemble * 7) return 3;
    for (const auto& r : reports)
        if (r.blew_up) return 2;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kdvlab: spectral laboratory for almost-L2 conservation of KdV"};
    app.require_subcommand(1);

    Common c_sim, c_sweep, c_ident, c_bil, c_exp, c_glob;

    auto* sim = app.add_subcommand("simulate", "integrate KdV and report conservation");
    std::string preset = "soliton";
    int sim_n = 1024;
    double sim_len = 80.0, sim_dt = 5e-4, sim_T = 1.0;
    bool sim_dealias = true;
    sim->add_option("--preset", preset, "soliton|zero|rough");
    sim->add_option("--n", sim_n);
    sim->add_option("--length", sim_len);
    sim->add_option("--dt", sim_dt);
    sim->add_option("--t-final", sim_T);
    sim->add_flag("--dealias,!--no-dealias", sim_dealias);
    add_common(sim, c_sim);

    auto* sweep = app.add_subcommand("sweep-n", "energy increment decay in N");
    std::string sweep_s = "-1/4";
    std::vector<double> sweep_N = {16, 32, 64, 128};
    int sweep_ens = 8, sweep_n_pts = 8192;
    double sweep_eps0 = 0.1, sweep_len = 16.0 * std::numbers::pi, sweep_dt = 0.02;
    sweep->add_option("--s", sweep_s, "regularity index as a rational, e.g. -1/4");
    sweep->add_option("--N", sweep_N, "threshold list");
    sweep->add_option("--ensemble", sweep_ens);
    sweep->add_option("--eps0", sweep_eps0);
    sweep->add_option("--n", sweep_n_pts);
    sweep->add_option("--length", sweep_len);
    sweep->add_option("--dt", sweep_dt);
    add_common(sweep, c_sweep);

    auto* ident = app.add_subcommand("verify-identity", "almost-conservation identity residual");
    std::string ident_s = "-1/4";
    // Defaults keep every active resonance frequency 3*xi*xi1*xi2 well below
    // 1/dt so the centered difference of E can track the commutator integral.
    double ident_N = 8, ident_len = 4.0 * std::numbers::pi, ident_dt = 1e-4,
           ident_T = 0.0128;
    int ident_n = 64;
    ident->add_option("--s", ident_s);
    ident->add_option("--N", ident_N);
    ident->add_option("--n", ident_n);
    ident->add_option("--length", ident_len);
    ident->add_option("--dt", ident_dt);
    ident->add_option("--t-final", ident_T);
    add_common(ident, c_ident);

    auto* bil = app.add_subcommand("verify-bilinear", "smoothing / lemma ratio tables");
    std::string bil_mode = "smoothing", bil_s = "-1/4";
    std::vector<double> bil_N = {16, 32, 64, 128};
    int bil_ens = 4, bil_n = 1024;
    double bil_eps = 0.05, bil_len = 8.0 * std::numbers::pi;
    bil->add_option("--mode", bil_mode, "smoothing|lemma-boundary");
    bil->add_option("--s", bil_s);
    bil->add_option("--N", bil_N);
    bil->add_option("--ensemble", bil_ens);
    bil->add_option("--eps", bil_eps);
    bil->add_option("--n", bil_n);
    bil->add_option("--length", bil_len);
    add_common(bil, c_bil);

    auto* expo = app.add_subcommand("exponents", "exact rational exponent report");
    std::string exp_s = "-1/4";
    double exp_T = 100.0, exp_eps = 0.05;
    expo->add_option("--s", exp_s);
    expo->add_option("--T", exp_T);
    expo->add_option("--eps", exp_eps);
    add_common(expo, c_exp);

    auto* glob = app.add_subcommand("global-run", "rescale-normalize-iterate continuation");
    std::string glob_s = "-1/4";
    double glob_N = 64, glob_T = 4.0, glob_len = 16.0 * std::numbers::pi,
           glob_eps0 = 0.1, glob_dt = 0.02;
    int glob_n = 4096, glob_ens = 1;
    bool glob_linear = false;
    glob->add_option("--s", glob_s);
    glob->add_option("--N", glob_N);
    glob->add_option("--T", glob_T);
    glob->add_option("--n", glob_n);
    glob->add_option("--length", glob_len);
    glob->add_option("--eps0", glob_eps0);
    glob->add_option("--dt", glob_dt);
    glob->add_option("--ensemble", glob_ens);
    glob->add_flag("--linear-only", glob_linear);
    add_common(glob, c_glob);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        apply_config(sim, c_sim.config);
        apply_config(sweep, c_sweep.config);
        apply_config(ident, c_ident.config);
        apply_config(bil, c_bil.config);
        apply_config(expo, c_exp.config);
        apply_config(glob, c_glob.config);
        if (sim->parsed())
            return run_simulate(c_sim, preset, sim_n, sim_len, sim_dt, sim_T,
                                sim_dealias);
        if (sweep->parsed())
            return run_sweep_n(c_sweep, sweep_s, sweep_N, sweep_ens, sweep_eps0,
                               sweep_n_pts, sweep_len, sweep_dt);
        if (ident->parsed())
            return run_verify_identity(c_ident, ident_s, ident_N, ident_n,
                                       ident_len, ident_dt, ident_T);
        if (bil->parsed())
            return run_verify_bilinear(c_bil, bil_mode, bil_s, bil_N, bil_ens,
                                       bil_eps, bil_n, bil_len);
        if (expo->parsed()) return run_exponents(c_exp, exp_s, exp_T, exp_eps);
        if (glob->parsed())
            return run_global(c_glob, glob_s, glob_N, glob_T, glob_n, glob_len,
                              glob_eps0, glob_dt, glob_linear, glob_ens);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

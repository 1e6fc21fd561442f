// etdms — spectral ETD multistep solver CLI.
//
// Subcommands:
//   constants    — stabilization-constant calculator report
//   convergence  — manufactured-solution temporal convergence sweep
//   coarsen      — long-time coarsening run with diagnostics and snapshots
#include <CLI11.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "etdms/diagnostics.hpp"
#include "etdms/field.hpp"
#include "etdms/grid.hpp"
#include "etdms/lagrange.hpp"
#include "etdms/model.hpp"
#include "etdms/phi.hpp"
#include "etdms/runconfig.hpp"
#include "etdms/snapshot.hpp"
#include "etdms/stabilization.hpp"
#include "etdms/stepper.hpp"
#include "etdms/version.hpp"

namespace {

using namespace etdms;

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmtg(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", x);
    return buf;
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

// Pre-scan for --config so file values land under explicit flags.
void apply_config_prescan(int argc, char** argv, RunConfig& cfg) {
    for (int i = 1; i < argc - 1; ++i) {
        if (std::string(argv[i]) == "--config") {
            parse_config_file(argv[i + 1], cfg);
            return;
        }
    }
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a.rfind("--config=", 0) == 0) {
            parse_config_file(a.substr(9), cfg);
            return;
        }
    }
}

void add_run_flags(CLI::App* cmd, RunConfig& cfg, std::string& config_path,
                   std::string& A_list, std::string& p_list,
                   std::string& tau_list) {
    cmd->add_option("--config", config_path, "config file (key = value)");
    cmd->add_option("--model", cfg.model, "model: nss | linear")
        ->check(CLI::IsMember({"nss", "linear"}));
    cmd->add_option("--N", cfg.N, "grid points per dimension (even)");
    cmd->add_option("--L", cfg.L, "domain edge length");
    cmd->add_option("--eps", cfg.eps, "model parameter epsilon");
    cmd->add_option("--nu-convention", cfg.nu_convention,
                    "biharmonic coefficient: eps2 (nu=eps^2) | eps (nu=eps)")
        ->check(CLI::IsMember({"eps", "eps2"}));
    cmd->add_option("--order", cfg.order, "multistep order k");
    cmd->add_option("--tau", tau_list, "time step (comma list for sweeps)");
    cmd->add_option("--schedule", cfg.schedule,
                    "piecewise-constant tau schedule file ('t_end tau' lines)");
    cmd->add_option("--T", cfg.T, "final time");
    cmd->add_option("--A", A_list,
                    "stabilization coefficient: auto | number (comma list for sweeps)");
    cmd->add_option("--p", p_list,
                    "regularization power: auto | number (comma list for sweeps)");
    cmd->add_option("--seed", cfg.seed, "RNG seed for random initial data");
    cmd->add_option("--out", cfg.out, "output directory");
    cmd->add_flag("--dealias", cfg.dealias, "enable the 2/3-rule mask");
    cmd->add_option("--monitor-etilde", cfg.monitor_etilde,
                    "modified-energy monitor stride (0 = off)");
    cmd->add_option("--series-every", cfg.series_every,
                    "time-series emission stride (steps)");
    cmd->add_option("--snapshot-every", cfg.snapshot_every,
                    "snapshot emission stride (steps, 0 = named times only)");
    cmd->add_flag("--full-horizon", cfg.full_horizon,
                  "run the published T=30000 horizon (overnight)");
}

double parse_A_token(const std::string& tok, const StabilizationParams& sp) {
    if (tok == "auto" || tok == "formula") return sp.A;
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size())
        throw std::invalid_argument("bad A value '" + tok + "'");
    return v;
}

double parse_p_token(const std::string& tok, const StabilizationParams& sp) {
    if (tok == "auto") return sp.p;
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size())
        throw std::invalid_argument("bad p value '" + tok + "'");
    return v;
}

std::unique_ptr<GradientFlowModel> make_model(const RunConfig& cfg,
                                              const SpectralGrid& grid,
                                              const Fourier& fft,
                                              bool manufactured) {
    if (cfg.model == "nss") {
        const NuConvention conv = cfg.nu_convention == "eps"
                                      ? NuConvention::Eps
                                      : NuConvention::EpsSquared;
        return std::make_unique<NssModel>(grid, fft, cfg.eps, conv,
                                          manufactured);
    }
    return std::make_unique<LinearModel>(grid, resolve_nu(cfg));
}

// ---------------------------------------------------------------- constants

int cmd_constants(int k, double beta, double gamma, double C_L) {
    const LagrangeTable lt = lagrange_table(k);
    const StabilizationParams sp = stabilization_params(k, beta, gamma, C_L);
    const std::vector<Rational> cs2 = cstar_squared(lt);

    std::cout << "stabilization constants (k = " << k << ", beta = " << fmtg(beta)
              << ", gamma = " << fmtg(gamma) << ", C_L = " << fmtg(C_L) << ")\n\n";

    std::cout << "Lagrange extrapolation weights xi_hat[i][j] (l_i(s) = sum_j "
                 "xi_hat[i][j] s^j):\n";
    for (int i = 0; i < k; ++i) {
        std::cout << "  i=" << i << ":";
        for (int j = 0; j < k; ++j) std::cout << "  " << lt.xi_hat_exact[i][j];
        std::cout << "\n";
    }

    std::cout << "\ninterpolation constants:\n";
    for (int j = 0; j < k; ++j) {
        std::cout << "  C*_" << j << "^2 = " << cs2[j]
                  << "    C*_" << j << " = " << fmt17(sp.Cstar[j]) << "\n";
    }
    for (int j = 0; j < k; ++j)
        std::cout << "  Cbar_" << j << " = " << fmt17(sp.Cbar[j]) << "\n";

    std::cout << "\nderived parameters:\n";
    std::cout << "  p = " << fmt17(sp.p) << "\n";
    std::cout << "  q = " << fmt17(sp.q) << "\n";
    std::cout << "  C_hat = " << fmt17(sp.C_hat) << "\n";
    std::cout << "  C_tilde = " << fmt17(sp.C_tilde) << "\n";
    std::cout << "  C1 = " << fmt17(sp.C1) << "\n";
    std::cout << "  C2 = " << fmt17(sp.C2) << "\n";
    std::cout << "  C3 = " << fmt17(sp.C3) << "\n";
    std::cout << "  C4 = " << fmt17(sp.C4) << "\n";
    std::cout << "  A = " << fmt17(sp.A) << "\n";
    std::cout << "  A_strict = " << fmt17(sp.A_strict) << "\n";
    std::cout << "  slack1 = " << fmt17(sp.slack1) << "\n";
    std::cout << "  slack_A_operative = " << fmt17(sp.slack_A_operative) << "\n";
    std::cout << "  slack_A_strict = " << fmt17(sp.slack_A_strict) << "\n";
    return 0;
}

// -------------------------------------------------------------- convergence

struct SweepRow {
    double A, p, tau, error;
    bool has_order = false;
    double order = 0.0;
    bool blowup = false;
};

int cmd_convergence(RunConfig cfg, const std::vector<std::string>& A_tokens,
                    const std::vector<std::string>& p_tokens,
                    std::vector<double> taus) {
    if (cfg.model != "nss") {
        std::cerr << "convergence: manufactured sweep requires the nss model\n";
        return 1;
    }
    if (std::abs(cfg.L - 2.0 * M_PI) > 1e-12) {
        std::cerr << "convergence: manufactured mode requires L = 2*pi\n";
        return 1;
    }
    std::filesystem::create_directories(cfg.out);

    const SpectralGrid grid = make_grid(cfg.N, cfg.L, cfg.dealias);
    const Fourier fft(grid);
    auto model = make_model(cfg, grid, fft, /*manufactured=*/true);
    const StabilizationParams sp = stabilization_params(
        cfg.order, model->beta(), model->gamma(), model->C_L());
    write_run_meta(cfg, "convergence", sp.A, sp.p);

    if (taus.empty())
        taus = {2.5e-3, 1.25e-3, 6.25e-4, 3.125e-4, 1.5625e-4};

    const Field u0 = manufactured_exact(grid, 0.0);
    const Field uT = manufactured_exact(grid, cfg.T);

    std::vector<SweepRow> rows;
    for (const std::string& Atok : A_tokens) {
        const double A = parse_A_token(Atok, sp);
        for (const std::string& ptok : p_tokens) {
            const double p = parse_p_token(ptok, sp);
            double prev_err = 0.0, prev_tau = 0.0;
            bool have_prev = false;
            for (const double tau : taus) {
                SweepRow row{A, p, tau, 0.0};
                const long long n = std::llround(cfg.T / tau);
                if (n < cfg.order ||
                    std::abs(static_cast<double>(n) * tau - cfg.T) > tau * 1e-6) {
                    std::cerr << "convergence: T is not an integer multiple of tau = "
                              << fmtg(tau) << "; skipping row\n";
                    continue;
                }
                try {
                    Stepper st(grid, fft, *model, tau,
                               StepperOptions{cfg.order, A, p, false});
                    st.set_state(u0, 0.0);
                    st.bootstrap();
                    st.advance(static_cast<std::uint64_t>(n) -
                               static_cast<std::uint64_t>(cfg.order - 1));
                    const Field uN = st.state_field();
                    double acc = 0.0;
                    for (std::size_t i = 0; i < grid.size(); ++i) {
                        const double d = uN.v[i] - uT.v[i];
                        acc += d * d;
                    }
                    row.error =
                        std::sqrt(acc / static_cast<double>(grid.size())) * grid.L;
                } catch (const BlowUpError& e) {
                    row.blowup = true;
                    row.error = std::numeric_limits<double>::infinity();
                    std::cerr << "convergence: blow-up (A=" << fmtg(A)
                              << ", p=" << fmtg(p) << ", tau=" << fmtg(tau)
                              << "): " << e.what() << "\n";
                }
                if (have_prev && !row.blowup && row.error > 0.0) {
                    row.order = std::log(prev_err / row.error) /
                                std::log(prev_tau / tau);
                    row.has_order = true;
                }
                have_prev = !row.blowup;
                prev_err = row.error;
                prev_tau = tau;
                rows.push_back(row);
            }
        }
    }

    const std::string csv_path = cfg.out + "/convergence.csv";
    std::ofstream csv(csv_path);
    if (!csv) {
        std::cerr << "cannot write " << csv_path << "\n";
        return 1;
    }
    csv << "A,p,tau,error,order\n";
    for (const SweepRow& r : rows) {
        csv << fmt17(r.A) << "," << fmt17(r.p) << "," << fmt17(r.tau) << ","
            << fmt17(r.error) << ",";
        if (r.has_order) csv << fmt17(r.order);
        csv << "\n";
    }
    csv.close();

    std::printf("%12s %6s %12s %14s %10s\n", "A", "p", "tau", "error", "order");
    for (const SweepRow& r : rows) {
        std::printf("%12.6g %6g %12.6g %14.6e %10s\n", r.A, r.p, r.tau, r.error,
                    r.has_order ? fmtg(r.order).c_str()
                                : (r.blowup ? "blow-up" : "-"));
    }
    std::printf("\nwrote %s\n", csv_path.c_str());
    return 0;
}

// ------------------------------------------------------------------ coarsen

int cmd_coarsen(RunConfig cfg, bool T_explicit) {
    if (cfg.full_horizon && !T_explicit) cfg.T = 30000.0;
    std::filesystem::create_directories(cfg.out);

    const SpectralGrid grid = make_grid(cfg.N, cfg.L, cfg.dealias);
    const Fourier fft(grid);
    auto model = make_model(cfg, grid, fft, /*manufactured=*/false);
    const StabilizationParams sp = stabilization_params(
        cfg.order, model->beta(), model->gamma(), model->C_L());
    const double A = parse_A_token(cfg.A, sp);
    const double p = parse_p_token(cfg.p, sp);
    write_run_meta(cfg, "coarsen", A, p);

    std::vector<ScheduleSegment> schedule;
    if (!cfg.schedule.empty()) {
        schedule = parse_schedule_file(cfg.schedule);
        cfg.T = schedule.back().t_end;
    } else {
        schedule = {{cfg.T, cfg.tau}};
    }

    const bool monitor = cfg.monitor_etilde > 0;
    Stepper st(grid, fft, *model, schedule.front().tau,
               StepperOptions{cfg.order, A, p, monitor});
    st.set_state(white_noise_init(grid, cfg.seed), 0.0);

    const std::string csv_path = cfg.out + "/series.csv";
    std::ofstream csv(csv_path);
    if (!csv) {
        std::cerr << "cannot write " << csv_path << "\n";
        return 1;
    }
    csv << "t,E,h,m,E_mod\n";

    std::vector<double> ts, Es, hs, ms;
    const auto emit_series = [&](const Stepper& s) {
        const Field f = s.state_field();
        const double E = s.energy();
        const double h = roughness(f);
        const double m = mean_slope(f, fft);
        ts.push_back(s.time());
        Es.push_back(E);
        hs.push_back(h);
        ms.push_back(m);
        csv << fmt17(s.time()) << "," << fmt17(E) << "," << fmt17(h) << ","
            << fmt17(m) << ",";
        if (monitor && s.step_count() > 0 &&
            s.step_count() % static_cast<std::uint64_t>(cfg.monitor_etilde) == 0 &&
            s.modified_energy_available()) {
            csv << fmt17(s.modified_energy());
        }
        csv << "\n";
        csv.flush();
    };

    // Named snapshot targets (reference timestamps clipped to the horizon)
    // plus T.
    std::vector<double> targets;
    for (const double t : {1.0, 5000.0, 10000.0, 15000.0, 20000.0, 30000.0})
        if (t <= cfg.T) targets.push_back(t);
    if (targets.empty() || targets.back() < cfg.T) targets.push_back(cfg.T);
    std::size_t next_target = 0;

    const auto snapshot_path = [&](double label) {
        return cfg.out + "/snap_t" + fmtg(label) + ".etds";
    };
    const auto per_step = [&](const Stepper& s) {
        if (cfg.series_every > 0 &&
            s.step_count() % static_cast<std::uint64_t>(cfg.series_every) == 0)
            emit_series(s);
        while (next_target < targets.size() &&
               s.time() >= targets[next_target] - s.tau() * 1e-6) {
            write_snapshot(snapshot_path(targets[next_target]), s.state_field(),
                           s.time());
            ++next_target;
        }
        if (cfg.snapshot_every > 0 &&
            s.step_count() % static_cast<std::uint64_t>(cfg.snapshot_every) == 0)
            write_snapshot(snapshot_path(s.time()), s.state_field(), s.time());
    };

    emit_series(st);  // initial record at t = 0
    try {
        run_schedule(st, schedule, per_step);
    } catch (const BlowUpError& e) {
        std::cerr << "coarsen: " << e.what() << "\n";
        write_snapshot(snapshot_path(st.time()), st.state_field(), st.time());
        std::cerr << "coarsen: last good state preserved as "
                  << snapshot_path(st.time()) << "\n";
        return 2;
    }
    csv.close();

    // Scaling-law fits over the configured window, clipped to the horizon.
    const double w0 = 1.0, w1 = std::min(400.0, cfg.T);
    const std::string fits_path = cfg.out + "/fits.txt";
    std::ofstream fits(fits_path);
    const auto report_fit = [&](const char* label, const char* form,
                                const std::vector<double>& y, bool loglog) {
        try {
            const FitResult r = loglog ? fit_loglog(ts, y, w0, w1)
                                       : fit_semilog(ts, y, w0, w1);
            fits << label << ": " << form << "  a = " << fmt17(r.a)
                 << "  b = " << fmt17(r.b) << "  residual = " << fmt17(r.residual)
                 << "  window = [" << fmtg(r.t0) << ", " << fmtg(r.t1)
                 << "]  n = " << r.n << "\n";
        } catch (const std::exception& e) {
            fits << label << ": fit skipped (" << e.what() << ")\n";
        }
    };
    report_fit("E", "a*ln(t) + b", Es, false);
    report_fit("h", "a*t^b", hs, true);
    report_fit("m", "a*t^b", ms, true);
    fits.close();

    std::printf("coarsen: %" PRIu64 " steps to T = %s\n", st.step_count(),
                fmtg(st.time()).c_str());
    std::printf("wrote %s, %s and %zu snapshot(s)\n", csv_path.c_str(),
                fits_path.c_str(), next_target);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"etdms — arbitrary-order energy-stable ETD multistep spectral "
                 "solver (thin-film epitaxy without slope selection)"};
    app.set_version_flag("--version", etdms::kVersion);
    app.require_subcommand(1);

    // constants
    auto* c_const = app.add_subcommand(
        "constants", "print the stabilization-constant calculator report");
    int k = 4;
    double beta = 0.5, gamma = 0.5, C_L = 1.0;
    c_const->add_option("--order", k, "multistep order k");
    c_const->add_option("--beta", beta, "Lipschitz index beta");
    c_const->add_option("--gamma", gamma, "Lipschitz index gamma");
    c_const->add_option("--CL", C_L, "Lipschitz constant C_L");

    // convergence
    auto* c_conv = app.add_subcommand(
        "convergence", "manufactured-solution temporal convergence sweep");
    RunConfig conv_cfg;
    conv_cfg.nu_convention = "eps";  // the convention that reproduces the tables
    conv_cfg.T = 1.0;
    std::string conv_config, conv_A = "auto", conv_p = "auto", conv_tau;

    // coarsen
    auto* c_coar = app.add_subcommand(
        "coarsen", "long-time coarsening run with diagnostics and snapshots");
    RunConfig coar_cfg;
    coar_cfg.L = 12.8;
    coar_cfg.eps = 0.005;
    coar_cfg.nu_convention = "eps2";
    coar_cfg.T = 50.0;
    coar_cfg.tau = 1e-3;
    std::string coar_config, coar_A = "auto", coar_p = "auto", coar_tau;

    try {
        apply_config_prescan(argc, argv, conv_cfg);
        apply_config_prescan(argc, argv, coar_cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    conv_A = conv_cfg.A;
    conv_p = conv_cfg.p;
    coar_A = coar_cfg.A;
    coar_p = coar_cfg.p;
    add_run_flags(c_conv, conv_cfg, conv_config, conv_A, conv_p, conv_tau);
    add_run_flags(c_coar, coar_cfg, coar_config, coar_A, coar_p, coar_tau);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (c_const->parsed()) return cmd_constants(k, beta, gamma, C_L);
        if (c_conv->parsed()) {
            conv_cfg.A = conv_A;
            conv_cfg.p = conv_p;
            std::vector<double> taus;
            for (const std::string& t : split_csv(conv_tau))
                taus.push_back(std::stod(t));
            return cmd_convergence(conv_cfg, split_csv(conv_A), split_csv(conv_p),
                                   taus);
        }
        if (c_coar->parsed()) {
            coar_cfg.A = coar_A;
            coar_cfg.p = coar_p;
            if (!coar_tau.empty()) coar_cfg.tau = std::stod(coar_tau);
            return cmd_coarsen(coar_cfg,
                               c_coar->get_option("--T")->count() > 0);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

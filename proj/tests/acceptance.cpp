// Acceptance suite: one self-contained check per shipped guarantee, each
// reported as a single PASS/FAIL line. The exit code is the failure count.
//
// Usage: acceptance <path-to-etdms-cli>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "etdms/diagnostics.hpp"
#include "etdms/field.hpp"
#include "etdms/grid.hpp"
#include "etdms/lagrange.hpp"
#include "etdms/model.hpp"
#include "etdms/phi.hpp"
#include "etdms/quadrature.hpp"
#include "etdms/stabilization.hpp"
#include "etdms/stepper.hpp"

using namespace etdms;
namespace fs = std::filesystem;

namespace {

std::string g_cli;  // path to the command-line binary (argv[1])

struct CmdResult {
    int code = -1;
    std::string out;
};

CmdResult sh(const std::string& cmd) {
    CmdResult r;
    FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int rc = pclose(pipe);
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return std::string(buf);
}

// ---- shared convergence machinery ------------------------------------------

// Discrete L2 error of the forced run against the closed-form solution at T.
// Blow-up is reported as +inf (a sweep row may diverge without aborting).
double run_cell(const SpectralGrid& g, const Fourier& fft,
                const NssModel& model, double A, double p, double tau,
                double T) {
    try {
        Stepper st(g, fft, model, tau, StepperOptions{4, A, p, false});
        st.set_state(manufactured_exact(g, 0.0), 0.0);
        st.bootstrap();
        st.advance(std::llround(T / tau) - 3);
        const Field got = st.state_field();
        const Field want = manufactured_exact(g, T);
        double acc = 0.0;
        for (std::size_t m = 0; m < g.size(); ++m) {
            const double d = got.v[m] - want.v[m];
            acc += d * d;
        }
        return g.L * std::sqrt(acc / static_cast<double>(g.size()));
    } catch (const BlowUpError&) {
        return std::numeric_limits<double>::infinity();
    }
}

constexpr std::array<double, 5> kTaus = {2.5e-3, 1.25e-3, 6.25e-4, 3.125e-4,
                                         1.5625e-4};

struct SweepResult {
    std::array<double, 5> err{};
    std::array<double, 4> ord{};
};

SweepResult run_sweep(const SpectralGrid& g, const Fourier& fft,
                      const NssModel& model, double A, double p) {
    SweepResult r;
    for (std::size_t i = 0; i < kTaus.size(); ++i)
        r.err[i] = run_cell(g, fft, model, A, p, kTaus[i], 1.0);
    for (std::size_t i = 0; i + 1 < kTaus.size(); ++i)
        r.ord[i] = std::log(r.err[i] / r.err[i + 1]) /
                   std::log(kTaus[i] / kTaus[i + 1]);
    return r;
}

// ---- criteria ---------------------------------------------------------------

bool criterion1(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    const CmdResult r = sh(g_cli + " constants --order 4");
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (r.code != 0) {
        detail = "constants exited with code " + std::to_string(r.code);
        return false;
    }
    for (const char* token : {"9143/3780", "157441/7560", "212/945"}) {
        if (r.out.find(token) == std::string::npos) {
            detail = std::string("missing exact constant ") + token;
            return false;
        }
    }
    // Parse the reported stabilization coefficient.
    double a_cli = 0.0;
    bool found = false;
    std::istringstream lines(r.out);
    for (std::string line; std::getline(lines, line);) {
        const auto pos = line.find_first_not_of(' ');
        if (pos == std::string::npos) continue;
        if (line.compare(pos, 4, "A = ") == 0) {
            a_cli = std::strtod(line.c_str() + pos + 4, nullptr);
            found = true;
            break;
        }
    }
    if (!found) {
        detail = "no 'A = ' line in the constants report";
        return false;
    }
    // Independent radical evaluation of the same closed form.
    const double cbar1 =
        (std::sqrt(18286.0) + std::sqrt(157441.0) + std::sqrt(1696.0)) /
        std::sqrt(7560.0);
    const double a_radical = 27.0 * std::pow(1.0 + cbar1, 4.0) / 512.0;
    if (std::abs(a_cli - a_radical) > 1e-12 * a_radical) {
        detail = fmt("A = %.17g deviates from the radical form %.17g", a_cli,
                     a_radical);
        return false;
    }
    if (secs >= 1.0) {
        detail = fmt("constants took %.2fs (budget 1s)", secs);
        return false;
    }
    detail = fmt("exact rationals present, A = %.17g matches radicals, %.0f ms",
                 a_cli, secs * 1e3);
    return true;
}

// Reference convergence table for the forced run at N = 128, T = 1:
// rows A in {1, 5, 10, formula}, five step sizes halving from 2.5e-3.
constexpr double kRefErr[4][5] = {
    {6.53e-07, 4.10e-08, 2.57e-09, 1.59e-10, 8.94e-12},
    {3.26e-06, 2.05e-07, 1.28e-08, 8.04e-10, 4.96e-11},
    {6.52e-06, 4.10e-07, 2.57e-08, 1.61e-09, 9.99e-11},
    {1.12e-04, 7.18e-06, 4.50e-07, 2.82e-08, 1.76e-09},
};
constexpr double kRefOrd[4][4] = {
    {3.993, 3.997, 4.009, 4.157},
    {3.992, 3.996, 3.999, 4.017},
    {3.991, 3.996, 4.000, 4.007},
    {3.959, 3.994, 3.998, 4.000},
};

// Chosen by criterion 2, consumed by criterion 3.
NuConvention g_table_convention = NuConvention::Eps;

bool criterion2(std::string& detail) {
    const auto grid = make_grid(128, 2.0 * M_PI);
    const Fourier fft(grid);
    const auto sp = stabilization_params(4, 0.5, 0.5, 1.0);
    const double A_rows[4] = {1.0, 5.0, 10.0, sp.A};

    // The parameter is nominally epsilon = 0.01; the coefficient convention
    // (nu = eps^2 vs nu = eps) is probed on one cell and the match recorded.
    const auto probe = [&](NuConvention conv) {
        const NssModel model(grid, fft, 0.01, conv, /*manufactured=*/true);
        const double e = run_cell(grid, fft, model, 1.0, 2.0, kTaus[0], 1.0);
        return std::isfinite(e) && std::abs(e - kRefErr[0][0]) <= 0.10 * kRefErr[0][0];
    };

    NuConvention conv;
    const char* conv_name;
    if (probe(NuConvention::EpsSquared)) {
        conv = NuConvention::EpsSquared;
        conv_name = "nu = eps^2";
    } else if (probe(NuConvention::Eps)) {
        conv = NuConvention::Eps;
        conv_name = "nu = eps";
    } else {
        detail = "neither coefficient convention reproduces the A = 1, "
                 "tau = 2.5e-3 reference cell";
        return false;
    }
    g_table_convention = conv;

    const NssModel model(grid, fft, 0.01, conv, /*manufactured=*/true);
    int err_in = 0, ord_in = 0;
    std::string first_miss;
    for (int row = 0; row < 4; ++row) {
        const SweepResult r = run_sweep(grid, fft, model, A_rows[row], 2.0);
        for (int i = 0; i < 5; ++i) {
            const double rel = std::abs(r.err[i] - kRefErr[row][i]) / kRefErr[row][i];
            if (rel <= 0.10) {
                ++err_in;
            } else if (first_miss.empty()) {
                first_miss = fmt("error[A-row %d, tau %.4g] = %.3e vs %.3e "
                                 "(off %.1f%%)",
                                 row, kTaus[i], r.err[i], kRefErr[row][i],
                                 rel * 100);
            }
        }
        for (int i = 0; i < 4; ++i) {
            if (std::abs(r.ord[i] - kRefOrd[row][i]) <= 0.1) {
                ++ord_in;
            } else if (first_miss.empty()) {
                first_miss = fmt("order[A-row %d, pair %d] = %.3f vs %.3f", row,
                                 i, r.ord[i], kRefOrd[row][i]);
            }
        }
    }
    if (err_in == 20 && ord_in == 16) {
        detail = fmt("%s: 20/20 errors within 10%%, 16/16 orders within 0.1",
                     conv_name);
        return true;
    }
    detail = fmt("%s: %d/20 errors, %d/16 orders in band; first miss: %s",
                 conv_name, err_in, ord_in, first_miss.c_str());
    return false;
}

// Reference orders at the two finest step-size pairs for the regularization
// sweep p in {1.5, 1.9, 2.1, 2.5} at the formula coefficient.
constexpr double kRefOrdP[4][2] = {
    {3.998, 4.006}, {3.998, 3.998}, {3.998, 4.000}, {3.983, 3.998}};

bool criterion3(std::string& detail) {
    const auto grid = make_grid(128, 2.0 * M_PI);
    const Fourier fft(grid);
    const auto sp = stabilization_params(4, 0.5, 0.5, 1.0);
    const NssModel model(grid, fft, 0.01, g_table_convention,
                         /*manufactured=*/true);
    const double ps[4] = {1.5, 1.9, 2.1, 2.5};

    std::array<SweepResult, 4> rs;
    for (int c = 0; c < 4; ++c) rs[c] = run_sweep(grid, fft, model, sp.A, ps[c]);

    // Orders at the two finest pairs stay within 0.15 of the references.
    for (int c = 0; c < 4; ++c) {
        for (int i = 0; i < 2; ++i) {
            const double got = rs[c].ord[2 + i];
            if (std::abs(got - kRefOrdP[c][i]) > 0.15) {
                detail = fmt("order[p = %.1f, pair %d] = %.3f vs %.3f", ps[c],
                             2 + i, got, kRefOrdP[c][i]);
                return false;
            }
        }
    }
    // At fixed tau the error grows monotonically with p.
    for (int i = 0; i < 5; ++i) {
        for (int c = 0; c + 1 < 4; ++c) {
            if (!(rs[c].err[i] < rs[c + 1].err[i])) {
                detail = fmt("error not monotone in p at tau %.4g: "
                             "p=%.1f gives %.3e, p=%.1f gives %.3e",
                             kTaus[i], ps[c], rs[c].err[i], ps[c + 1],
                             rs[c + 1].err[i]);
                return false;
            }
        }
    }
    detail = "orders at the two finest pairs within 0.15 of the references; "
             "errors monotone in p at every tau";
    return true;
}

bool criterion4(std::string& detail) {
    const auto grid = make_grid(32, 2.0 * M_PI);
    const Fourier fft(grid);
    const LinearModel model(grid, 0.01);
    const double tau = 1e-3;
    const Field u0f = smooth_random_init(grid, 3, 5, 0.5);
    const Spectrum u0 = fft.forward(u0f);

    double worst_all = 0.0;
    for (double A : {0.0, 10.0, 175.2}) {
        Stepper st(grid, fft, model, tau, StepperOptions{4, A, 2.0, false});
        st.set_state(u0f, 0.0);
        st.bootstrap();
        st.advance(97);
        double worst = 0.0;
        for (std::size_t m = 0; m < grid.size(); ++m) {
            if (std::abs(u0.c[m]) < 1e-13) continue;
            const double z = 0.01 * grid.biharm_symbol[m];
            const std::complex<double> ref =
                std::exp(-3.0 * z * tau) *
                std::exp(-97.0 * st.K_table()[m] * tau) * u0.c[m];
            worst = std::max(worst,
                             std::abs(st.state().c[m] - ref) / std::abs(ref));
        }
        worst_all = std::max(worst_all, worst);
        if (worst > 1e-12) {
            detail = fmt("A = %g: per-mode deviation %.3e after 100 steps "
                         "(budget 1e-12)",
                         A, worst);
            return false;
        }
    }
    detail = fmt("A in {0, 10, 175.2}: worst per-mode deviation %.3e over "
                 "100 steps",
                 worst_all);
    return true;
}

bool criterion5(std::string& detail) {
    const GaussLegendre gl = gauss_legendre(64);
    const double tau = 1.0;
    double worst = 0.0;
    for (double x : {1e-12, 1e-6, 1e-2, 1.0, 1e2, 1e6}) {
        const double z = x / tau;
        double got[8];
        phi_values(z, tau, 7, got);
        for (int j = 0; j <= 7; ++j) {
            // Quadrature of the theta form over [0, min(tau, 60/z)]; the
            // discarded tail is below e^{-60} relative.
            const double h = z > 0.0 ? std::min(tau, 60.0 / z) : tau;
            double ref = 0.0;
            for (std::size_t q = 0; q < gl.x.size(); ++q) {
                const double th = 0.5 * h * (gl.x[q] + 1.0);
                ref += 0.5 * h * gl.w[q] * std::exp(-z * th) *
                       std::pow(tau - th, j);
            }
            const double rel = std::abs(got[j] - ref) / ref;
            worst = std::max(worst, rel);
            if (rel > 1e-12) {
                detail = fmt("phi_%d at z tau = %.4g off by %.3e", j, x, rel);
                return false;
            }
        }
    }
    detail = fmt("j <= 7, z tau in {1e-12 .. 1e6}: worst relative deviation "
                 "%.2e vs 64-point quadrature",
                 worst);
    return true;
}

bool criterion6(std::string& detail) {
    const auto grid = make_grid(64, 12.8);
    const Fourier fft(grid);
    const NssModel model(grid, fft, 0.005, NuConvention::EpsSquared);
    const auto sp = stabilization_params(4, 0.5, 0.5, 1.0);
    const double tau = 1e-3, T = 50.0;

    Stepper st(grid, fft, model, tau, StepperOptions{4, sp.A, 2.0, true});
    st.set_state(smooth_random_init(grid, 1, 4, 0.05), 0.0);
    st.bootstrap();

    const long long total = std::llround(T / tau);
    double prev_mod = std::numeric_limits<double>::quiet_NaN();
    double prev_raw = std::numeric_limits<double>::quiet_NaN();
    long long mod_samples = 0, mod_violations = 0, raw_violations = 0;
    double worst_mod_rise = 0.0, worst_raw_rise = 0.0;

    for (long long n = 3; n < total; ++n) {
        st.step();
        // Raw energy must be non-increasing once the startup transient has
        // passed (t >= 0.1).
        const double E = st.energy();
        if (st.time() >= 0.1) {
            if (!std::isnan(prev_raw) && E > prev_raw + 1e-12 * std::abs(prev_raw)) {
                ++raw_violations;
                worst_raw_rise = std::max(worst_raw_rise, E - prev_raw);
            }
            prev_raw = E;
        }
        // Modified energy sampled every 10 steps on 6-point quadrature.
        if (st.step_count() % 10 == 0 && st.modified_energy_available()) {
            const double Em = st.modified_energy(6);
            ++mod_samples;
            if (!std::isnan(prev_mod) &&
                Em > prev_mod + 1e-8 * std::abs(prev_mod)) {
                ++mod_violations;
                worst_mod_rise = std::max(worst_mod_rise, Em - prev_mod);
            }
            prev_mod = Em;
        }
    }
    if (mod_samples < 100) {
        detail = fmt("only %lld monitored samples", mod_samples);
        return false;
    }
    if (mod_violations > 0 || raw_violations > 0) {
        detail = fmt("%lld modified-energy violations (worst rise %.3e), "
                     "%lld raw-energy violations (worst rise %.3e)",
                     mod_violations, worst_mod_rise, raw_violations,
                     worst_raw_rise);
        return false;
    }
    detail = fmt("%lld monitored samples over T = 50: modified energy "
                 "non-increasing (tol 1e-8), raw energy non-increasing for "
                 "t >= 0.1",
                 mod_samples);
    return true;
}

bool criterion7(std::string& detail) {
    const auto grid = make_grid(64, 12.8);
    const Fourier fft(grid);
    const NssModel model(grid, fft, 0.005, NuConvention::EpsSquared);
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> kdist(2, 8);
    std::uniform_real_distribution<double> adist(0.01, 0.5);

    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const Field u = smooth_random_init(grid, rng(), kdist(rng), adist(rng));
        const Field v = smooth_random_init(grid, rng(), kdist(rng), adist(rng));
        const double r = lipschitz_ratio(model, u, v, fft);
        worst = std::max(worst, r);
        if (!(r <= 1.0 + 1e-10)) {
            detail = fmt("trial %d: ratio %.12f exceeds 1 + 1e-10", trial, r);
            return false;
        }
    }
    detail = fmt("200 seeded pairs: max ratio %.12f <= 1 + 1e-10", worst);
    return true;
}

bool criterion8(std::string& detail) {
    // (a) partition of unity and cardinality of the extrapolation basis.
    const auto table = lagrange_table(4);
    double worst_part = 0.0;
    for (int s = 0; s <= 20; ++s) {
        const double sigma = s / 20.0;
        double sum = 0.0;
        for (int i = 0; i < 4; ++i) sum += lagrange_eval(table, i, sigma);
        worst_part = std::max(worst_part, std::abs(sum - 1.0));
    }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            worst_part = std::max(
                worst_part, std::abs(lagrange_eval(table, i, -double(j)) -
                                     (i == j ? 1.0 : 0.0)));
    if (worst_part > 1e-14) {
        detail = fmt("basis identity off by %.3e (budget 1e-14)", worst_part);
        return false;
    }

    // (b) the history weights sum to phi_0 on every mode.
    const auto grid = make_grid(64, 12.8);
    const Fourier fft(grid);
    const NssModel model(grid, fft, 0.005, NuConvention::EpsSquared);
    const auto sp = stabilization_params(4, 0.5, 0.5, 1.0);
    double worst_w = 0.0;
    for (double A : {0.0, sp.A}) {
        Stepper st(grid, fft, model, 1e-3, StepperOptions{4, A, 2.0, false});
        for (std::size_t m = 0; m < grid.size(); ++m) {
            double sum = 0.0;
            for (int i = 0; i < 4; ++i) sum += st.w_tables()[i][m];
            double phi0[1];
            phi_values(st.K_table()[m], 1e-3, 0, phi0);
            worst_w = std::max(worst_w, std::abs(sum - phi0[0]) / phi0[0]);
        }
    }
    if (worst_w > 1e-12) {
        detail = fmt("weight partition off by %.3e (budget 1e-12)", worst_w);
        return false;
    }

    // (c) the mean survives 1e4 nonlinear steps to 1e-12 absolute.
    const auto g32 = make_grid(32, 12.8);
    const Fourier fft32(g32);
    const NssModel m32(g32, fft32, 0.005, NuConvention::EpsSquared);
    Stepper st(g32, fft32, m32, 1e-3, StepperOptions{4, sp.A, 2.0, false});
    st.set_state(smooth_random_init(g32, 5, 4, 0.05), 0.0);
    const std::complex<double> mean0 = st.state().c[0];
    st.bootstrap();
    st.advance(10000 - 3);
    const double drift = std::abs(st.state().c[0] - mean0);
    if (drift > 1e-12) {
        detail = fmt("mean drifted by %.3e over 1e4 steps (budget 1e-12)", drift);
        return false;
    }

    // (d) the emitted series is bitwise deterministic for a fixed seed.
    const fs::path base = "/tmp/etdms_acceptance";
    const fs::path d1 = base / "det1", d2 = base / "det2";
    fs::remove_all(d1);
    fs::remove_all(d2);
    fs::create_directories(d1);
    fs::create_directories(d2);
    const std::string args =
        " coarsen --N 32 --T 0.05 --tau 1e-3 --seed 77 --monitor-etilde 10 ";
    const CmdResult r1 = sh(g_cli + args + "--out " + d1.string());
    const CmdResult r2 = sh(g_cli + args + "--out " + d2.string());
    if (r1.code != 0 || r2.code != 0) {
        detail = "deterministic coarsening reruns failed to execute";
        return false;
    }
    const std::string s1 = slurp(d1 / "series.csv"), s2 = slurp(d2 / "series.csv");
    if (s1.empty() || s1 != s2) {
        detail = "series.csv differs between identical seeded runs";
        return false;
    }

    detail = fmt("basis identities %.1e, weight partition %.1e, mean drift "
                 "%.1e over 1e4 steps, series bitwise reproducible",
                 worst_part, worst_w, drift);
    return true;
}

bool criterion9(std::string& detail) {
    std::vector<double> t, yE, yh, ym;
    for (int i = 0; i < 200; ++i) {
        const double ti = 0.5 * std::pow(1000.0, i / 199.0);  // 0.5 .. 500
        t.push_back(ti);
        yE.push_back(-1.25 * std::log(ti) + 0.75);
        yh.push_back(0.5 * std::pow(ti, 0.5));
        ym.push_back(2.0 * std::pow(ti, 0.25));
    }
    const FitResult fE = fit_semilog(t, yE, 1.0, 400.0);
    const FitResult fh = fit_loglog(t, yh, 1.0, 400.0);
    const FitResult fm = fit_loglog(t, ym, 1.0, 400.0);
    const double devs[] = {
        std::abs(fE.a - (-1.25)), std::abs(fE.b - 0.75),
        std::abs(fh.a - 0.5),     std::abs(fh.b - 0.5),
        std::abs(fm.a - 2.0),     std::abs(fm.b - 0.25),
    };
    double worst = 0.0;
    for (double d : devs) worst = std::max(worst, d);
    if (worst > 1e-10) {
        detail = fmt("planted coefficients recovered only to %.3e "
                     "(budget 1e-10)",
                     worst);
        return false;
    }
    detail = fmt("planted log and power laws recovered to %.2e over the "
                 "[1, 400] window",
                 worst);
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli = argv[1];

    struct Entry {
        int id;
        std::function<bool(std::string&)> fn;
    };
    const std::vector<Entry> entries = {
        {1, criterion1}, {2, criterion2}, {3, criterion3},
        {4, criterion4}, {5, criterion5}, {6, criterion6},
        {7, criterion7}, {8, criterion8}, {9, criterion9},
    };

    int failures = 0;
    for (const auto& e : entries) {
        std::string detail;
        bool pass = false;
        try {
            pass = e.fn(detail);
        } catch (const std::exception& ex) {
            detail = std::string("unexpected exception: ") + ex.what();
        }
        if (!pass) ++failures;
        std::printf("CRITERION %d: %s - %s\n", e.id, pass ? "PASS" : "FAIL",
                    detail.c_str());
        std::fflush(stdout);
    }
    return failures;
}

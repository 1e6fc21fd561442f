#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "etdms/stepper.hpp"

namespace etdms {

// Fully-resolved run parameters. Commands seed their own defaults, a config
// file (plain `key = value`, '#' comments) overlays them, and explicit CLI
// flags override both. Keys match the long flag names with '-' -> '_'.
struct RunConfig {
    std::string model = "nss";         // nss | linear
    int N = 128;
    double L = 2.0 * M_PI;
    double eps = 0.01;
    std::string nu_convention = "eps2";  // eps2: nu = eps^2 | eps: nu = eps
    int order = 4;                     // k
    double tau = 1e-3;
    std::string schedule;              // path; empty = uniform tau
    double T = 1.0;
    std::string A = "auto";            // stabilization coefficient or "auto"
    std::string p = "auto";            // regularization power or "auto"
    std::uint64_t seed = 1;
    std::string out = ".";
    bool dealias = false;
    int monitor_etilde = 0;            // monitor stride; 0 = off
    int series_every = 10;
    int snapshot_every = 0;            // 0 = named timestamps only
    bool full_horizon = false;
};

// Overlays `path` onto cfg. Unknown keys and malformed lines are errors
// reported with their line number.
void parse_config_file(const std::string& path, RunConfig& cfg);

// Parses a schedule file: one "t_end tau" pair per line ('#' comments,
// blank lines allowed); t_end strictly increasing, tau > 0.
std::vector<ScheduleSegment> parse_schedule_file(const std::string& path);

// Resolves "auto"/numeric A and p against the model's stabilization
// parameters (k = cfg.order, beta/gamma/C_L from the model).
double resolve_A(const RunConfig& cfg, const StabilizationParams& sp);
double resolve_p(const RunConfig& cfg, const StabilizationParams& sp);

// nu derived from eps under the configured convention.
double resolve_nu(const RunConfig& cfg);

// Writes the fully-resolved config (plus code version) as `run_meta` in
// cfg.out; deterministic content, no timestamps.
void write_run_meta(const RunConfig& cfg, const std::string& command,
                    double A_resolved, double p_resolved);

}  // namespace etdms

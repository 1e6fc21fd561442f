#include "etdms/runconfig.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "etdms/version.hpp"

namespace etdms {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void config_error(const std::string& path, int line,
                               const std::string& msg) {
    std::ostringstream os;
    os << path << ":" << line << ": " << msg;
    throw std::invalid_argument(os.str());
}

double to_double(const std::string& path, int line, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        config_error(path, line, "expected a number, got '" + v + "'");
    }
}

long long to_int(const std::string& path, int line, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        config_error(path, line, "expected an integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& path, int line, const std::string& v) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    config_error(path, line, "expected a boolean, got '" + v + "'");
}

}  // namespace

void parse_config_file(const std::string& path, RunConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            config_error(path, lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) config_error(path, lineno, "empty key");
        if (val.empty()) config_error(path, lineno, "empty value for '" + key + "'");

        if (key == "model") {
            if (val != "nss" && val != "linear")
                config_error(path, lineno, "model must be nss or linear");
            cfg.model = val;
        } else if (key == "N") {
            cfg.N = static_cast<int>(to_int(path, lineno, val));
        } else if (key == "L") {
            cfg.L = to_double(path, lineno, val);
        } else if (key == "eps") {
            cfg.eps = to_double(path, lineno, val);
        } else if (key == "nu_convention") {
            if (val != "eps" && val != "eps2")
                config_error(path, lineno, "nu_convention must be eps or eps2");
            cfg.nu_convention = val;
        } else if (key == "order") {
            cfg.order = static_cast<int>(to_int(path, lineno, val));
        } else if (key == "tau") {
            cfg.tau = to_double(path, lineno, val);
        } else if (key == "schedule") {
            cfg.schedule = val;
        } else if (key == "T") {
            cfg.T = to_double(path, lineno, val);
        } else if (key == "A") {
            if (val != "auto") to_double(path, lineno, val);  // validate
            cfg.A = val;
        } else if (key == "p") {
            if (val != "auto") to_double(path, lineno, val);  // validate
            cfg.p = val;
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(to_int(path, lineno, val));
        } else if (key == "out") {
            cfg.out = val;
        } else if (key == "dealias") {
            cfg.dealias = to_bool(path, lineno, val);
        } else if (key == "monitor_etilde") {
            cfg.monitor_etilde = static_cast<int>(to_int(path, lineno, val));
        } else if (key == "series_every") {
            cfg.series_every = static_cast<int>(to_int(path, lineno, val));
        } else if (key == "snapshot_every") {
            cfg.snapshot_every = static_cast<int>(to_int(path, lineno, val));
        } else if (key == "full_horizon") {
            cfg.full_horizon = to_bool(path, lineno, val);
        } else {
            config_error(path, lineno, "unknown key '" + key + "'");
        }
    }
}

std::vector<ScheduleSegment> parse_schedule_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open schedule file: " + path);
    std::vector<ScheduleSegment> out;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream ss(line);
        ScheduleSegment seg;
        std::string extra;
        if (!(ss >> seg.t_end >> seg.tau) || (ss >> extra))
            config_error(path, lineno, "expected 't_end tau'");
        if (!(seg.tau > 0.0)) config_error(path, lineno, "tau must be > 0");
        if (!out.empty() && !(seg.t_end > out.back().t_end))
            config_error(path, lineno, "t_end must be strictly increasing");
        out.push_back(seg);
    }
    if (out.empty())
        throw std::invalid_argument(path + ": schedule file has no segments");
    return out;
}

double resolve_nu(const RunConfig& cfg) {
    return cfg.nu_convention == "eps" ? cfg.eps : cfg.eps * cfg.eps;
}

double resolve_A(const RunConfig& cfg, const StabilizationParams& sp) {
    if (cfg.A == "auto") return sp.A;
    return std::strtod(cfg.A.c_str(), nullptr);
}

double resolve_p(const RunConfig& cfg, const StabilizationParams& sp) {
    if (cfg.p == "auto") return sp.p;
    return std::strtod(cfg.p.c_str(), nullptr);
}

void write_run_meta(const RunConfig& cfg, const std::string& command,
                    double A_resolved, double p_resolved) {
    const std::string path = cfg.out + "/run_meta";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    char buf[64];
    auto fmt = [&buf](double x) {
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return std::string(buf);
    };
    out << "command = " << command << "\n";
    out << "version = " << kVersion << "\n";
    out << "model = " << cfg.model << "\n";
    out << "N = " << cfg.N << "\n";
    out << "L = " << fmt(cfg.L) << "\n";
    out << "eps = " << fmt(cfg.eps) << "\n";
    out << "nu_convention = " << cfg.nu_convention << "\n";
    out << "nu = " << fmt(resolve_nu(cfg)) << "\n";
    out << "order = " << cfg.order << "\n";
    out << "tau = " << fmt(cfg.tau) << "\n";
    if (!cfg.schedule.empty()) out << "schedule = " << cfg.schedule << "\n";
    out << "T = " << fmt(cfg.T) << "\n";
    out << "A = " << cfg.A << "\n";
    out << "A_resolved = " << fmt(A_resolved) << "\n";
    out << "p = " << cfg.p << "\n";
    out << "p_resolved = " << fmt(p_resolved) << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "out = " << cfg.out << "\n";
    out << "dealias = " << (cfg.dealias ? "true" : "false") << "\n";
    out << "monitor_etilde = " << cfg.monitor_etilde << "\n";
    out << "series_every = " << cfg.series_every << "\n";
    out << "snapshot_every = " << cfg.snapshot_every << "\n";
    out << "full_horizon = " << (cfg.full_horizon ? "true" : "false") << "\n";
}

}  // namespace etdms

#include "critwave/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <map>
#include <sstream>
#include <vector>

#include "critwave/artifacts.hpp"

namespace critwave {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

struct RawConfig {
    // ordered (section, key) -> value
    std::vector<std::pair<std::string, std::string>> items;

    const std::string* find(const std::string& path) const {
        for (const auto& [k, v] : items)
            if (k == path) return &v;
        return nullptr;
    }
};

RawConfig tokenize(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(ConfigErrorKind::TypeMismatch, line,
                                  "malformed section header at line " + std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(ConfigErrorKind::TypeMismatch, line,
                              "expected key = value at line " + std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(ConfigErrorKind::TypeMismatch, line,
                              "empty key at line " + std::to_string(line_no));
        raw.items.emplace_back(section + "." + key, value);
    }
    return raw;
}

double parse_real(const std::string& path, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError(ConfigErrorKind::TypeMismatch, path,
                          path + ": expected a real number, got '" + value + "'");
    return v;
}

long long parse_integer(const std::string& path, const std::string& value) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0' || errno == ERANGE)
        throw ConfigError(ConfigErrorKind::TypeMismatch, path,
                          path + ": expected an integer, got '" + value + "'");
    return v;
}

void constraint(bool ok, const std::string& path, const std::string& message) {
    if (!ok) throw ConfigError(ConfigErrorKind::ConstraintViolation, path, path + ": " + message);
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "damping.a0", "damping.alpha", "damping.beta",
        "problem.dim", "problem.p", "problem.epsilon", "problem.support_radius",
        "problem.u0_shape", "problem.u0_amplitude", "problem.u0_radius",
        "problem.u1_shape", "problem.u1_amplitude", "problem.u1_radius",
        "grid.dr", "grid.pad",
        "controls.t_max", "controls.cfl", "controls.blowup_threshold", "controls.record_dt",
        "controls.snapshot_dt", "controls.snapshot_t_max", "controls.delta0",
        "controls.support_tol", "controls.seed", "controls.threads",
        "controls.sweep_eps0", "controls.sweep_count", "controls.sweep_ratio",
        "controls.m_convention",
        "output.dir",
    };
    return keys;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    const RawConfig raw = tokenize(text);
    for (const auto& [path, value] : raw.items) {
        bool known = false;
        for (const std::string& k : known_keys())
            if (k == path) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError(ConfigErrorKind::UnknownKey, path, "unknown key: " + path);
        (void)value;
    }

    RunConfig cfg;
    auto real_or = [&](const std::string& path, double fallback) {
        const std::string* v = raw.find(path);
        return v ? parse_real(path, *v) : fallback;
    };
    auto int_or = [&](const std::string& path, long long fallback) {
        const std::string* v = raw.find(path);
        return v ? parse_integer(path, *v) : fallback;
    };
    auto string_or = [&](const std::string& path, const std::string& fallback) {
        const std::string* v = raw.find(path);
        return v ? *v : fallback;
    };

    cfg.damping.a0 = real_or("damping.a0", cfg.damping.a0);
    cfg.damping.alpha = real_or("damping.alpha", cfg.damping.alpha);
    cfg.damping.beta = real_or("damping.beta", cfg.damping.beta);
    constraint(cfg.damping.a0 > 0.0, "damping.a0", "must be > 0");
    constraint(cfg.damping.alpha < 2.0, "damping.alpha", "must be < 2");
    constraint(cfg.damping.beta > -1.0, "damping.beta", "must be > -1");

    cfg.problem.dim = static_cast<int>(int_or("problem.dim", cfg.problem.dim));
    cfg.problem.p = real_or("problem.p", cfg.problem.p);
    cfg.problem.epsilon = real_or("problem.epsilon", cfg.problem.epsilon);
    cfg.problem.support_radius = real_or("problem.support_radius", cfg.problem.support_radius);
    constraint(cfg.problem.dim >= 1, "problem.dim", "must be >= 1");
    constraint(cfg.problem.p > 1.0, "problem.p", "must be > 1");
    constraint(cfg.problem.epsilon >= 0.0, "problem.epsilon", "must be >= 0");
    constraint(cfg.problem.support_radius > 0.0, "problem.support_radius", "must be > 0");
    constraint(cfg.damping.alpha < cfg.problem.dim, "damping.alpha", "must be < problem.dim");

    try {
        cfg.problem.u0.shape = profile_shape_from_string(string_or("problem.u0_shape", "bump"));
        cfg.problem.u1.shape = profile_shape_from_string(string_or("problem.u1_shape", "bump"));
    } catch (const std::invalid_argument& err) {
        throw ConfigError(ConfigErrorKind::TypeMismatch, "problem.u0_shape", err.what());
    }
    cfg.problem.u0.amplitude = real_or("problem.u0_amplitude", 1.0);
    cfg.problem.u1.amplitude = real_or("problem.u1_amplitude", 1.0);
    cfg.problem.u0.radius = real_or("problem.u0_radius", cfg.problem.support_radius);
    cfg.problem.u1.radius = real_or("problem.u1_radius", cfg.problem.support_radius);
    constraint(cfg.problem.u0.radius > 0.0 && cfg.problem.u0.radius <= cfg.problem.support_radius,
               "problem.u0_radius", "must lie in (0, support_radius]");
    constraint(cfg.problem.u1.radius > 0.0 && cfg.problem.u1.radius <= cfg.problem.support_radius,
               "problem.u1_radius", "must lie in (0, support_radius]");

    cfg.grid_dr = real_or("grid.dr", cfg.grid_dr);
    cfg.grid_pad = real_or("grid.pad", cfg.grid_pad);
    constraint(cfg.grid_dr > 0.0, "grid.dr", "must be > 0");
    constraint(cfg.grid_pad >= 0.0, "grid.pad", "must be >= 0");

    cfg.t_max = real_or("controls.t_max", cfg.t_max);
    cfg.cfl = real_or("controls.cfl", cfg.cfl);
    cfg.blowup_threshold = real_or("controls.blowup_threshold", cfg.blowup_threshold);
    cfg.record_dt = real_or("controls.record_dt", cfg.record_dt);
    cfg.snapshot_dt = real_or("controls.snapshot_dt", cfg.snapshot_dt);
    cfg.snapshot_t_max = real_or("controls.snapshot_t_max", cfg.snapshot_t_max);
    cfg.delta0 = real_or("controls.delta0", cfg.delta0);
    cfg.support_tol = real_or("controls.support_tol", cfg.support_tol);
    cfg.seed = int_or("controls.seed", cfg.seed);
    cfg.threads = static_cast<int>(int_or("controls.threads", cfg.threads));
    cfg.sweep_eps0 = real_or("controls.sweep_eps0", cfg.sweep_eps0);
    cfg.sweep_count = static_cast<int>(int_or("controls.sweep_count", cfg.sweep_count));
    cfg.sweep_ratio = real_or("controls.sweep_ratio", cfg.sweep_ratio);
    cfg.m_convention = string_or("controls.m_convention", cfg.m_convention);

    constraint(cfg.t_max > 0.0, "controls.t_max", "must be > 0");
    constraint(cfg.cfl > 0.0 && cfg.cfl <= 0.9, "controls.cfl", "must lie in (0, 0.9]");
    constraint(cfg.blowup_threshold > 0.0, "controls.blowup_threshold", "must be > 0");
    constraint(cfg.record_dt > 0.0, "controls.record_dt", "must be > 0");
    constraint(cfg.snapshot_dt >= 0.0, "controls.snapshot_dt", "must be >= 0");
    constraint(cfg.snapshot_t_max >= 0.0, "controls.snapshot_t_max", "must be >= 0");
    constraint(cfg.delta0 >= 0.0, "controls.delta0", "must be >= 0 (0 = default)");
    constraint(cfg.support_tol > 0.0, "controls.support_tol", "must be > 0");
    constraint(cfg.threads >= 0, "controls.threads", "must be >= 0");
    constraint(cfg.sweep_eps0 > 0.0, "controls.sweep_eps0", "must be > 0");
    constraint(cfg.sweep_count >= 2, "controls.sweep_count", "must be >= 2");
    constraint(cfg.sweep_ratio > 0.0 && cfg.sweep_ratio < 1.0, "controls.sweep_ratio",
               "must lie in (0, 1)");
    constraint(cfg.m_convention == "effective" || cfg.m_convention == "time_scaled",
               "controls.m_convention", "must be 'effective' or 'time_scaled'");

    cfg.output_dir = string_or("output.dir", "");
    return cfg;
}

void validate_sweep_request(const RunConfig& config) {
    if (!(config.damping.alpha < 0.0))
        throw ConfigError(ConfigErrorKind::ConstraintViolation, "damping.alpha",
                          "damping.alpha: blow-up sweeps require alpha < 0");
    if (!(config.damping.beta == 0.0 || config.damping.beta == 1.0))
        throw ConfigError(ConfigErrorKind::ConstraintViolation, "damping.beta",
                          "damping.beta: blow-up sweeps require beta = 0 or beta = 1");
    const double pc = critical_exponent(config.problem.dim, config.damping.alpha);
    if (config.problem.p > pc)
        throw ConfigError(ConfigErrorKind::ConstraintViolation, "problem.p",
                          "problem.p: blow-up sweeps require p <= the critical exponent");
}

std::string emit_manifest(const RunConfig& c) {
    std::string out;
    auto real_line = [&](const char* key, double v) {
        out += key;
        out += " = ";
        out += format_double(v);
        out += '\n';
    };
    auto int_line = [&](const char* key, long long v) {
        out += key;
        out += " = ";
        out += std::to_string(v);
        out += '\n';
    };
    auto str_line = [&](const char* key, const std::string& v) {
        out += key;
        out += " = ";
        out += v;
        out += '\n';
    };

    out += "[damping]\n";
    real_line("a0", c.damping.a0);
    real_line("alpha", c.damping.alpha);
    real_line("beta", c.damping.beta);
    out += "\n[problem]\n";
    int_line("dim", c.problem.dim);
    real_line("p", c.problem.p);
    real_line("epsilon", c.problem.epsilon);
    real_line("support_radius", c.problem.support_radius);
    str_line("u0_shape", to_string(c.problem.u0.shape));
    real_line("u0_amplitude", c.problem.u0.amplitude);
    real_line("u0_radius", c.problem.u0.radius);
    str_line("u1_shape", to_string(c.problem.u1.shape));
    real_line("u1_amplitude", c.problem.u1.amplitude);
    real_line("u1_radius", c.problem.u1.radius);
    out += "\n[grid]\n";
    real_line("dr", c.grid_dr);
    real_line("pad", c.grid_pad);
    out += "\n[controls]\n";
    real_line("t_max", c.t_max);
    real_line("cfl", c.cfl);
    real_line("blowup_threshold", c.blowup_threshold);
    real_line("record_dt", c.record_dt);
    real_line("snapshot_dt", c.snapshot_dt);
    real_line("snapshot_t_max", c.snapshot_t_max);
    real_line("delta0", c.delta0);
    real_line("support_tol", c.support_tol);
    int_line("seed", c.seed);
    int_line("threads", c.threads);
    real_line("sweep_eps0", c.sweep_eps0);
    int_line("sweep_count", c.sweep_count);
    real_line("sweep_ratio", c.sweep_ratio);
    str_line("m_convention", c.m_convention);
    out += "\n[output]\n";
    str_line("dir", c.output_dir);
    return out;
}

}  // namespace critwave

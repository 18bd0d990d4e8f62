#ifndef CRITWAVE_CONFIG_HPP
#define CRITWAVE_CONFIG_HPP

#include <stdexcept>
#include <string>

#include "critwave/core.hpp"

namespace critwave {

enum class ConfigErrorKind { UnknownKey, TypeMismatch, ConstraintViolation };

class ConfigError : public std::runtime_error {
public:
    ConfigError(ConfigErrorKind kind, std::string key, const std::string& message)
        : std::runtime_error(message), kind_(kind), key_(std::move(key)) {}
    ConfigErrorKind kind() const { return kind_; }
    const std::string& key() const { return key_; }

private:
    ConfigErrorKind kind_;
    std::string key_;
};

// Flat INI-style configuration: sections [damping], [problem], [grid],
// [controls], [output]; every parameter is scalar. Unknown keys are
// rejected; the emitted manifest echoes every effective value.
struct RunConfig {
    DampingSpec damping;
    ProblemSpec problem;

    double grid_dr = 1.0 / 128.0;
    double grid_pad = 1.0;

    double t_max = 10.0;
    double cfl = 0.5;
    double blowup_threshold = 1e6;
    double record_dt = 0.05;
    double snapshot_dt = 0.0;
    double snapshot_t_max = 0.0;
    double delta0 = 0.0;  // 0 selects the admissible default
    double support_tol = 1e-12;
    long long seed = 20240901;
    int threads = 0;
    double sweep_eps0 = 0.2;
    int sweep_count = 6;
    double sweep_ratio = 0.5;
    std::string m_convention = "effective";  // effective | time_scaled

    std::string output_dir;
};

RunConfig parse_config(const std::string& text);
std::string emit_manifest(const RunConfig& config);

// Blow-up sweeps additionally require alpha < 0, beta in {0, 1}, and p at or
// below the critical exponent.
void validate_sweep_request(const RunConfig& config);

}  // namespace critwave

#endif

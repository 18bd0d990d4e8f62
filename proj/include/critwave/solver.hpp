#ifndef CRITWAVE_SOLVER_HPP
#define CRITWAVE_SOLVER_HPP

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "critwave/core.hpp"
#include "critwave/weight.hpp"

namespace critwave {

struct RadialGrid {
    int dim = 1;
    double dr = 1.0 / 128.0;
    int n_r = 0;

    double r_max() const { return dr * (n_r - 1); }
    double radius(int j) const { return dr * j; }

    // Sizes the grid so the light cone of compactly supported data plus a
    // four-cell halo stays interior up to t_max.
    static RadialGrid for_horizon(int dim, double dr, double support_radius, double t_max,
                                  double pad = 1.0);
};

struct StateSnapshot {
    double t = 0.0;
    double dt = 0.0;
    std::vector<double> u_prev, u_curr;
};

enum class SimStatus { Decayed, Blowup, HorizonReached };
std::string to_string(SimStatus status);

struct TimeRecord {
    double t = 0.0;
    double sup_u = 0.0;
    double l2_u = 0.0;
    double energy = 0.0;
    double weighted_energy = 0.0;
    double support_radius = 0.0;
    double e_w = 0.0;  // weighted kinetic+gradient
    double v_w = 0.0;  // weighted damped mass
    double f_w = 0.0;  // weighted nonlinear potential
};

struct FieldSnapshot {
    double t = 0.0;
    std::vector<double> u;
};

struct RunControls {
    double t_max = 10.0;
    double cfl = 0.5;
    double blowup_threshold = 1e6;
    double record_dt = 0.05;
    bool nonlinear = true;
    double support_tol = 1e-12;
    bool track_cone_leak = false;
    bool track_energy_balance = false;  // discrete energy law, linear runs only
    double snapshot_dt = 0.0;           // 0 disables field snapshots
    double snapshot_t_max = 0.0;
    const WeightFunction* weight = nullptr;  // fills the weighted columns
    std::function<double(double, double)> forcing;  // verification hook
    // Verification hook: direct (u, u_t) arrays at t = 0 instead of the
    // epsilon-scaled problem profiles.
    std::optional<std::pair<std::vector<double>, std::vector<double>>> initial_override;
};

struct LifespanBracket {
    double estimate = 0.0;  // extrapolated blow-up time, clamped to the final time
    double lo = 0.0;
    double hi = 0.0;
    double crossing = 0.0;  // raw threshold-crossing time
};

struct SimOutcome {
    SimStatus status = SimStatus::HorizonReached;
    std::optional<LifespanBracket> lifespan;
    std::vector<TimeRecord> time_series;
    std::vector<FieldSnapshot> snapshots;
    double final_time = 0.0;
    bool energy_balance_valid = false;
    double energy_balance_residual = 0.0;  // compatible-energy defect / E(0)
    double energy_snapshot_residual = 0.0; // centered-sample energy defect / E(0)
    double energy_max_uptick = 0.0;        // max per-step relative increase
    double max_cone_leak = 0.0;            // relative L2 mass beyond R0+t+4dr
};

class NonFiniteError : public std::runtime_error {
public:
    explicit NonFiniteError(const std::string& msg) : std::runtime_error(msg) {}
};

class CflError : public std::invalid_argument {
public:
    explicit CflError(const std::string& msg) : std::invalid_argument(msg) {}
};

StateSnapshot make_initial_state(const DampingSpec& spec, const ProblemSpec& prob,
                                 const RadialGrid& grid, const RunControls& controls);

// One leapfrog update with semi-implicit damping; throws NonFiniteError if
// the result leaves the representable range.
StateSnapshot step(const StateSnapshot& state, const DampingSpec& spec, const ProblemSpec& prob,
                   const RadialGrid& grid, const RunControls& controls = {});

SimOutcome run(const DampingSpec& spec, const ProblemSpec& prob, const RadialGrid& grid,
               const RunControls& controls);

// Largest grid radius at which |u| exceeds tol; 0 when none does.
double support_radius(const StateSnapshot& state, const RadialGrid& grid, double tol);

// Maximum cumulative defect of the discrete energy law of a tracked linear
// run, relative to the initial energy.
double energy_identity_residual(const SimOutcome& outcome);

}  // namespace critwave

#endif

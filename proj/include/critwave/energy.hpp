#ifndef CRITWAVE_ENERGY_HPP
#define CRITWAVE_ENERGY_HPP

#include <utility>
#include <vector>

#include "critwave/solver.hpp"
#include "critwave/weight.hpp"

namespace critwave {

struct WeightedEnergies {
    double kinetic_gradient = 0.0;    // int e^{2 psi} (u_t^2 + |grad u|^2)
    double damped_mass = 0.0;         // int e^{2 psi} a(x) u^2
    double nonlinear_potential = 0.0; // int e^{2 psi} |u|^{p+1} / (p+1)
};

// Spans must have grid.n_r entries; evaluated in log space so the huge
// weight at the light cone never multiplies an underflowed field value.
WeightedEnergies weighted_energies_raw(const std::vector<double>& u, const std::vector<double>& ut,
                                       const RadialGrid& grid, const WeightFunction& weight,
                                       double p, double t);

WeightedEnergies weighted_energies(const StateSnapshot& state, const RadialGrid& grid,
                                   const WeightFunction& weight, double p);

struct EnergyRecord {
    double t = 0.0;
    double kinetic_gradient = 0.0;
    double damped_mass = 0.0;
    double nonlinear_potential = 0.0;
};

struct EnergyTracker {
    double t0 = 1.0;
    double delta0 = 0.25;
    std::vector<EnergyRecord> records;

    static EnergyTracker from_outcome(const SimOutcome& outcome, const WeightFunction& weight);
};

// Convention for the decay-rate powers: Effective uses the time-independent
// coefficient rate; TimeScaled uses the (1+beta)-scaled family rate, which
// does not reduce to the former at beta = 0.
enum class DecayConvention { Effective, TimeScaled };

// Running supremum of the rate-weighted energy sum; shift is the offset in
// the (shift + t)^power factors (1 or the calibrated t0).
std::vector<std::pair<double, double>> decay_weighted_supremum(const EnergyTracker& tracker,
                                                               int dim, double alpha, double beta,
                                                               DecayConvention convention,
                                                               double shift);

// Least-squares slope of log(value) against log(1+t) over the trailing
// fraction of the series. Requires >= 8 points with positive values there.
double fit_decay_rate(const std::vector<std::pair<double, double>>& series, double window);

// Admissible default for the decay-rate offset, halving the binding bound.
double default_delta0(int dim, double alpha, double p);

}  // namespace critwave

#endif

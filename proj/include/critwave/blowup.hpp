#ifndef CRITWAVE_BLOWUP_HPP
#define CRITWAVE_BLOWUP_HPP

#include <vector>

#include "critwave/core.hpp"
#include "critwave/solver.hpp"

namespace critwave {

// Space-time cutoff scaled by R: [eta(arg)]^{2 p'} with
//   arg = (r^{2-alpha} + t^2) / R^2   (beta = 1)
//   arg = (r^{2-alpha} + t) / R       (beta = 0)
// where eta is 1 on [0,1/2], a C^2 quintic descent on (1/2,1), 0 beyond.
struct TestFunctionProbe {
    double R = 1.0;
    double p = 2.0;
    double alpha = -1.0;
    double beta = 1.0;  // 0 or 1
    int dim = 1;

    double conjugate() const { return p / (p - 1.0); }
    double arg(double t, double r) const;
    double value(double t, double r) const;       // psi_R
    double value_star(double t, double r) const;  // psi_R with the inner plateau zeroed
    double dt(double t, double r) const;
    double dtt(double t, double r) const;
    double laplacian(double t, double r) const;
};

TestFunctionProbe make_probe(const DampingSpec& spec, const ProblemSpec& prob, double R);

struct ProbeEvaluation {
    double lhs = 0.0;        // data term + weighted nonlinear mass
    double rhs_shape = 0.0;  // R^{-power} * (star nonlinear mass)^{1/p}
    double data_term = 0.0;
    double nonlinear_weighted = 0.0;
    double nonlinear_weighted_star = 0.0;
    double r_power = 0.0;

    double ratio() const { return rhs_shape > 0.0 ? lhs / rhs_shape : 0.0; }
};

// Evaluates both sides of the scaled test-function estimate along a run
// record with field snapshots covering [0, R].
ProbeEvaluation probe_inequality(const SimOutcome& outcome, const TestFunctionProbe& probe,
                                 const DampingSpec& spec, const ProblemSpec& prob,
                                 const RadialGrid& grid);

struct ScaleIntegralResult {
    double value = 0.0;  // int_1^rho (star nonlinear mass at scale R) dR/R
    double bound = 0.0;  // log 2 * (full nonlinear mass at scale rho)
};

// Critical-case functional: log-spaced quadrature over scales R in [1, rho].
ScaleIntegralResult y_functional(const SimOutcome& outcome, const DampingSpec& spec,
                                 const ProblemSpec& prob, const RadialGrid& grid, double rho,
                                 int n_scales = 33);

struct ProbeDerivativeBounds {
    double sup_dt = 0.0;
    double sup_dtt = 0.0;
    double sup_laplacian = 0.0;
};

// Grid suprema of the scaled derivative quotients of the probe cutoff; the
// testable content is finiteness and stability across R.
ProbeDerivativeBounds probe_derivative_bounds(const TestFunctionProbe& probe, int n_t = 257,
                                              int n_r = 257);

struct SweepPoint {
    double eps = 0.0;
    SimStatus status = SimStatus::HorizonReached;
    double t_fit = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    bool used_in_fit = false;
};

struct SweepResult {
    LifespanClass kind = LifespanClass::Subcritical;
    std::vector<SweepPoint> points;
    double fitted_slope = 0.0;
    double target_slope = 0.0;
    double rel_err = 0.0;
    int used_points = 0;
};

// Runs the solver once per epsilon (concurrently) and fits the measured
// lifespans against the predicted scaling law.
SweepResult lifespan_sweep(const DampingSpec& spec, const ProblemSpec& prob_template,
                           const std::vector<double>& eps_list, const RadialGrid& grid,
                           const RunControls& controls, int threads = 0);

// Slope of log T against log eps.
double fit_power_slope(const std::vector<double>& eps, const std::vector<double>& lifespan);
// Slope of log log T against log eps; requires T > 1.
double fit_loglog_slope(const std::vector<double>& eps, const std::vector<double>& lifespan);

// Thread budget: explicit request, else CRITWAVE_THREADS, else hardware.
int resolve_thread_count(int requested);

}  // namespace critwave

#endif

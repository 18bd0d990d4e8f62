#ifndef CRITWAVE_WEIGHT_HPP
#define CRITWAVE_WEIGHT_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "critwave/core.hpp"
#include "critwave/numerics.hpp"

namespace critwave {

// Radial cutoff: 1 on [0, r_plateau], C^2 quintic transition, 0 beyond
// 2*r_plateau.
double cutoff(double r, double r_plateau);
double cutoff_d1(double r, double r_plateau);
double cutoff_d2(double r, double r_plateau);

// Tabulated radial solution v of  Delta v = f,  with
// f(s) = alpha (2-alpha) <s>^{-2-alpha} * cutoff(s, r_delta).
// Inside [0, table_end] the table is interpolated; beyond the source
// support the decaying/kernel-growth branch is evaluated in closed form.
class CorrectionTable {
public:
    CorrectionTable() = default;
    CorrectionTable(int dim, double alpha, double r_delta, double h,
                    std::vector<double> v, std::vector<double> dv, double source_moment);

    int dim() const { return dim_; }
    double r_delta() const { return r_delta_; }
    double spacing() const { return h_; }
    double table_end() const { return h_ * (static_cast<double>(v_.size()) - 1.0); }
    double source_moment() const { return source_moment_; }
    const std::vector<double>& samples() const { return v_; }
    const std::vector<double>& derivative_samples() const { return dv_; }

    double value(double r) const;
    double derivative(double r) const;

private:
    double tail_value(double r) const;
    double tail_derivative(double r) const;

    int dim_ = 1;
    double alpha_ = -1.0;
    double r_delta_ = 0.0;
    double h_ = 1.0;
    std::vector<double> v_, dv_;
    double source_moment_ = 0.0;
    MonotoneCubic v_interp_, dv_interp_;
};

// Builds the correction table by two cumulative radial integrations.
// r_max must exceed the source support 2*r_delta. r_delta <= 0 is the
// zero-source degenerate case (v identically 0).
CorrectionTable newton_correction(int dim, double alpha, double r_delta, double r_max,
                                  double h_target = 5e-4);

// mu = a0 / ((2-alpha)^2 (2+delta)) for delta in (0,1).
double weight_amplitude(double a0, double alpha, double delta);

struct WeightParams {
    int dim = 1;
    double a0 = 1.0;
    double alpha = -1.0;
    double delta0 = 0.25;
    double delta = 0.0;
    double mu = 0.0;
    double delta1 = 0.0, delta2 = 0.0, delta3 = 0.0;
    double delta4 = 0.0, delta5 = 0.0, delta6 = 0.0;
    double nu = 0.0;
    double t0 = 1.0;
    double A0 = 1.0;
    double R_delta = 1.0;
};

// Populates the derived constant ladder from (dim, a0, alpha, delta0).
WeightParams make_weight_params(const DampingSpec& spec, int dim, double delta0,
                                double R_delta, double A0);

// Exponential-weight generator psi(t,r) = mu * B(r) / (1+t) with
// B(r) = <r>^{2-alpha} + A0 - v(r). Immutable after construction.
class WeightFunction {
public:
    WeightFunction(DampingSpec spec, WeightParams params, CorrectionTable table);

    double bracket(double r) const;
    double bracket_derivative(double r) const;

    double value(double t, double r) const;
    double dt(double t, double r) const;
    double dr(double t, double r) const;
    double laplacian(double t, double r) const;  // closed form

    // Time-rescaled family psi_b(t,r) = mu * B(r) (1+b) / (1+t)^{1+b},
    // restricted to b in (-1, 1]; b = 0 recovers value().
    double value_scaled(double b, double t, double r) const;
    double dt_scaled(double b, double t, double r) const;
    double dr_scaled(double b, double t, double r) const;
    double laplacian_scaled(double b, double t, double r) const;

    const WeightParams& params() const { return params_; }
    const DampingSpec& damping() const { return spec_; }
    const CorrectionTable& correction() const { return table_; }

private:
    static void check_scaled(double b);
    DampingSpec spec_;
    WeightParams params_;
    CorrectionTable table_;
};

struct CalibrationGrid {
    std::vector<double> radii;
    std::vector<double> times;
    static CalibrationGrid standard(double r_max = 100.0, double t_max = 100.0,
                                    int n_r = 512, int n_t = 64, double r_min = 1e-2);
};

struct MarginReport {
    double min_margin_damping = 0.0;    // -psi_t a - (2+delta1)|psi_r|^2
    double min_margin_laplacian = 0.0;  // Delta psi - (rate - delta2) a/(1+t)
    double min_bracket = 0.0;
    double argmin_damping_t = 0.0, argmin_damping_r = 0.0;
    double argmin_laplacian_t = 0.0, argmin_laplacian_r = 0.0;
};

MarginReport weight_margins(const WeightFunction& w, const CalibrationGrid& grid);

// Same two inequalities with the full time-dependent coefficient and the
// (1+b)-scaled decay rate, for the rescaled weight family.
MarginReport weight_margins_scaled(const WeightFunction& w, double b, const CalibrationGrid& grid);

class CalibrationError : public std::runtime_error {
public:
    explicit CalibrationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CalibrationResult {
    WeightFunction weight;
    MarginReport margins;
    int r_doublings = 0;
    int a_doublings = 0;
};

// Grows R_delta until the Laplacian margin holds at every grid node, then
// grows A0 until the damping margin holds; both on geometric doubling
// schedules with a bounded number of attempts.
CalibrationResult calibrate_weight(const DampingSpec& spec, int dim, double delta0,
                                   const CalibrationGrid& grid, int max_doublings = 40);

}  // namespace critwave

#endif

#include "critwave/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "critwave/numerics.hpp"

namespace critwave {

namespace {

// exp(2 psi) * q accumulated safely: the contribution is dropped when the
// field part has underflowed to zero and capped at inf on true overflow.
inline double weighted_contribution(double two_psi, double q) {
    if (q <= 0.0) return 0.0;
    const double e = two_psi + std::log(q);
    if (e > 709.0) return std::numeric_limits<double>::infinity();
    return std::exp(e);
}

}  // namespace

WeightedEnergies weighted_energies_raw(const std::vector<double>& u, const std::vector<double>& ut,
                                       const RadialGrid& grid, const WeightFunction& weight,
                                       double p, double t) {
    const int n = grid.n_r;
    if (u.size() != static_cast<std::size_t>(n) || ut.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("weighted_energies: arrays must match the grid");
    const double area = sphere_area(grid.dim);
    WeightedEnergies out;
    for (int j = 0; j < n; ++j) {
        const double r = grid.radius(j);
        const double rad = (grid.dim == 1) ? 1.0 : std::pow(r, grid.dim - 1);
        const double end = (j == 0 || j == n - 1) ? 0.5 : 1.0;
        const double w = area * rad * grid.dr * end;
        if (w == 0.0) continue;
        double g = 0.0;
        if (j > 0 && j + 1 < n) g = (u[j + 1] - u[j - 1]) / (2.0 * grid.dr);
        const double two_psi = 2.0 * weight.value(t, r);
        const double a = weight.damping().spatial_factor(r);
        out.kinetic_gradient += weighted_contribution(two_psi, w * (ut[j] * ut[j] + g * g));
        out.damped_mass += weighted_contribution(two_psi, w * a * u[j] * u[j]);
        out.nonlinear_potential +=
            weighted_contribution(two_psi, w * std::pow(std::fabs(u[j]), p + 1.0) / (p + 1.0));
    }
    return out;
}

WeightedEnergies weighted_energies(const StateSnapshot& state, const RadialGrid& grid,
                                   const WeightFunction& weight, double p) {
    const int n = grid.n_r;
    std::vector<double> ut(n);
    for (int j = 0; j < n; ++j) ut[j] = (state.u_curr[j] - state.u_prev[j]) / state.dt;
    return weighted_energies_raw(state.u_curr, ut, grid, weight, p, state.t);
}

EnergyTracker EnergyTracker::from_outcome(const SimOutcome& outcome, const WeightFunction& weight) {
    EnergyTracker tracker;
    tracker.t0 = weight.params().t0;
    tracker.delta0 = weight.params().delta0;
    tracker.records.reserve(outcome.time_series.size());
    for (const TimeRecord& rec : outcome.time_series)
        tracker.records.push_back({rec.t, rec.e_w, rec.v_w, rec.f_w});
    return tracker;
}

std::vector<std::pair<double, double>> decay_weighted_supremum(const EnergyTracker& tracker,
                                                               int dim, double alpha, double beta,
                                                               DecayConvention convention,
                                                               double shift) {
    if (tracker.records.empty())
        throw std::invalid_argument("decay_weighted_supremum: no records");
    const double d0 = tracker.delta0;
    double pw_energy, pw_mass;
    if (convention == DecayConvention::Effective) {
        const double lam = (dim - alpha) / (2.0 - alpha);
        pw_energy = lam + 1.0 - d0;
        pw_mass = lam - d0;
    } else {
        const double rate = (dim - alpha) * (1.0 + beta) / (2.0 * (2.0 - alpha));
        pw_energy = rate + beta + 1.0 - d0;
        pw_mass = rate - d0;
    }
    std::vector<std::pair<double, double>> series;
    series.reserve(tracker.records.size());
    double sup = 0.0;
    for (const EnergyRecord& rec : tracker.records) {
        const double s = shift + rec.t;
        const double value =
            std::pow(s, pw_energy) * rec.kinetic_gradient + std::pow(s, pw_mass) * rec.damped_mass;
        sup = std::max(sup, value);
        series.emplace_back(rec.t, sup);
    }
    return series;
}

double fit_decay_rate(const std::vector<std::pair<double, double>>& series, double window) {
    if (!(window > 0.0 && window <= 1.0))
        throw std::invalid_argument("fit_decay_rate: window must lie in (0, 1]");
    if (series.empty()) throw std::invalid_argument("fit_decay_rate: empty series");
    const double t_final = series.back().first;
    const double t_start = t_final * (1.0 - window);
    std::vector<double> xs, ys;
    for (const auto& [t, v] : series) {
        if (t < t_start) continue;
        if (!(v > 0.0)) throw std::invalid_argument("fit_decay_rate: nonpositive value in window");
        xs.push_back(std::log1p(t));
        ys.push_back(std::log(v));
    }
    if (xs.size() < 8) throw std::invalid_argument("fit_decay_rate: fewer than 8 points in window");
    return linear_fit(xs, ys).slope;
}

double default_delta0(int dim, double alpha, double p) {
    const double lam = (dim - alpha) / (2.0 - alpha);
    const double supercrit = 2.0 / (2.0 - alpha) * (dim - alpha - 2.0 / (p - 1.0));
    if (supercrit > 0.0) return 0.5 * std::min(lam, supercrit);
    return 0.5 * lam;
}

}  // namespace critwave

#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "critwave/energy.hpp"
#include "critwave/numerics.hpp"
#include "oracles.hpp"

using namespace critwave;

namespace {

const WeightFunction& unit_weight() {
    static WeightFunction w =
        calibrate_weight(DampingSpec{1.0, -1.0, 0.0}, 1, 0.25,
                         CalibrationGrid::standard(210.0, 200.0))
            .weight;
    return w;
}

}  // namespace

TEST_CASE("weighted energies vanish for the zero state") {
    const RadialGrid grid = RadialGrid::for_horizon(1, 1.0 / 64, 1.0, 1.0);
    std::vector<double> zero(grid.n_r, 0.0);
    const WeightedEnergies we = weighted_energies_raw(zero, zero, grid, unit_weight(), 2.0, 0.0);
    CHECK(we.kinetic_gradient == 0.0);
    CHECK(we.damped_mass == 0.0);
    CHECK(we.nonlinear_potential == 0.0);
}

TEST_CASE("weighted mass of a plateau state against dense quadrature") {
    const RadialGrid grid = RadialGrid::for_horizon(1, 1.0 / 256, 2.0, 1.0);
    const RadialProfile plateau{ProfileShape::Plateau, 0.8, 2.0};
    std::vector<double> u(grid.n_r, 0.0), ut(grid.n_r, 0.0);
    for (int j = 0; j < grid.n_r; ++j) u[j] = plateau.value(grid.radius(j));
    const double t = 0.5;
    const WeightedEnergies we = weighted_energies_raw(u, ut, grid, unit_weight(), 2.0, t);
    const double oracle =
        sphere_area(1) * oracles::adaptive_quadrature(
                             [&](double r) {
                                 const double psi = unit_weight().value(t, r);
                                 const double a = unit_weight().damping().spatial_factor(r);
                                 const double val = plateau.value(r);
                                 return std::exp(2.0 * psi) * a * val * val;
                             },
                             0.0, 2.0, 1e-13);
    CHECK(we.damped_mass == doctest::Approx(oracle).epsilon(2e-4));
    // with a nonnegative weight exponent the weighted mass dominates the bare one
    const double bare = sphere_area(1) * oracles::adaptive_quadrature(
                                             [&](double r) {
                                                 const double a =
                                                     unit_weight().damping().spatial_factor(r);
                                                 const double val = plateau.value(r);
                                                 return a * val * val;
                                             },
                                             0.0, 2.0, 1e-13);
    CHECK(we.damped_mass >= bare * (1.0 - 1e-9));
}

TEST_CASE("running supremum basics") {
    EnergyTracker tracker;
    tracker.delta0 = 0.25;
    tracker.records.push_back({0.0, 0.4, 0.3, 0.0});
    auto series = decay_weighted_supremum(tracker, 1, -1.0, 0.0, DecayConvention::Effective, 1.0);
    REQUIRE(series.size() == 1);
    CHECK(series[0].second == doctest::Approx(0.7).epsilon(1e-15));

    // records lying exactly on the rate power make the supremum constant
    EnergyTracker synthetic;
    synthetic.delta0 = 0.25;
    const double lam = 2.0 / 3.0;
    for (double t = 0.0; t <= 50.0; t += 0.5) {
        synthetic.records.push_back({t, std::pow(1.0 + t, -(lam + 1.0 - 0.25)),
                                     std::pow(1.0 + t, -(lam - 0.25)), 0.0});
    }
    series = decay_weighted_supremum(synthetic, 1, -1.0, 0.0, DecayConvention::Effective, 1.0);
    for (const auto& [t, v] : series) CHECK(v == doctest::Approx(2.0).epsilon(1e-12));

    CHECK_THROWS_AS(
        decay_weighted_supremum(EnergyTracker{}, 1, -1.0, 0.0, DecayConvention::Effective, 1.0),
        std::invalid_argument);
}

TEST_CASE("supremum series is monotone and conventions differ at beta > 0") {
    EnergyTracker tracker;
    tracker.delta0 = 0.1;
    for (double t = 0.0; t <= 20.0; t += 0.25)
        tracker.records.push_back({t, 1.0 / (1.0 + t), 0.5 / (1.0 + t), 0.0});
    for (DecayConvention conv : {DecayConvention::Effective, DecayConvention::TimeScaled}) {
        const auto series = decay_weighted_supremum(tracker, 1, -1.0, 1.0, conv, 1.0);
        double prev = 0.0;
        for (const auto& [t, v] : series) {
            CHECK(v >= prev);
            prev = v;
        }
    }
    const auto eff = decay_weighted_supremum(tracker, 1, -1.0, 1.0, DecayConvention::Effective, 1.0);
    const auto ts = decay_weighted_supremum(tracker, 1, -1.0, 1.0, DecayConvention::TimeScaled, 1.0);
    CHECK(eff.back().second != ts.back().second);
}

TEST_CASE("decay-rate fit is exact on power laws") {
    std::vector<std::pair<double, double>> series;
    for (double t = 0.0; t <= 40.0; t += 0.25) series.emplace_back(t, std::pow(1.0 + t, -2.0));
    CHECK(fit_decay_rate(series, 0.5) == doctest::Approx(-2.0).epsilon(1e-10));
    series.clear();
    for (double t = 0.0; t <= 40.0; t += 0.25)
        series.emplace_back(t, 5.0 * std::pow(1.0 + t, -0.75));
    CHECK(fit_decay_rate(series, 0.4) == doctest::Approx(-0.75).epsilon(1e-10));

    CHECK_THROWS_AS(fit_decay_rate(series, 0.0), std::invalid_argument);
    std::vector<std::pair<double, double>> short_series(series.begin(), series.begin() + 4);
    CHECK_THROWS_AS(fit_decay_rate(short_series, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(fit_decay_rate(
                        std::vector<std::pair<double, double>>{{0, 1}, {1, -1}, {2, 1}, {3, 1},
                                                               {4, 1}, {5, 1}, {6, 1}, {7, 1}},
                        1.0),
                    std::invalid_argument);
}

TEST_CASE("default rate offset is admissible") {
    const double d0 = default_delta0(1, -1.0, 3.0);
    CHECK(d0 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(d0 > 0.0);
    CHECK(d0 < 2.0 / 3.0);
    // subcritical p: the binding bound is nonpositive, fall back to the rate itself
    CHECK(default_delta0(1, -1.0, 1.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("supercritical run: bounded supremum, sharp decay rate, banded summands") {
    DampingSpec spec{1.0, -1.0, 0.0};
    const double t_max = 150.0;

    // sharp decay rate on narrow data
    {
        const double d0 = 0.05;
        const CalibrationResult cal =
            calibrate_weight(spec, 1, d0, CalibrationGrid::standard(t_max + 5.0, t_max));
        ProblemSpec prob;
        prob.dim = 1;
        prob.p = 3.0;
        prob.epsilon = 0.01;
        prob.support_radius = 0.5;
        prob.u0 = {ProfileShape::Bump, 20.0, 0.5};
        prob.u1 = {ProfileShape::Bump, 20.0, 0.5};
        const RadialGrid grid = RadialGrid::for_horizon(1, 1.0 / 128, 0.5, t_max);
        RunControls rc;
        rc.t_max = t_max;
        rc.record_dt = 0.1;
        rc.weight = &cal.weight;
        const SimOutcome out = run(spec, prob, grid, rc);
        CHECK(out.status == SimStatus::Decayed);
        const EnergyTracker tracker = EnergyTracker::from_outcome(out, cal.weight);
        std::vector<std::pair<double, double>> ew;
        for (const EnergyRecord& r : tracker.records) ew.emplace_back(r.t, r.kinetic_gradient);
        const double rate = fit_decay_rate(ew, 0.5);
        CHECK(rate == doctest::Approx(-(2.0 / 3.0 + 1.0)).epsilon(0.18));  // within +-0.3

        const auto m = decay_weighted_supremum(tracker, 1, -1.0, 0.0,
                                               DecayConvention::Effective, 1.0);
        double m1 = 0.0;
        for (const auto& [t, v] : m)
            if (t >= 1.0) {
                m1 = v;
                break;
            }
        CHECK(m.back().second <= 2.0 * m1);
        double prev = 0.0;
        for (const auto& [t, v] : m) {
            CHECK(v >= prev);
            prev = v;
        }
    }

    // factor-4 band on wide data past the absorption phase of the initial burst
    {
        const double d0 = 0.05;
        const CalibrationResult cal =
            calibrate_weight(spec, 1, d0, CalibrationGrid::standard(t_max + 5.0, t_max));
        ProblemSpec prob;
        prob.dim = 1;
        prob.p = 3.0;
        prob.epsilon = 0.01;
        prob.support_radius = 3.0;
        prob.u0 = {ProfileShape::Bump, 20.0, 3.0};
        prob.u1 = {ProfileShape::Bump, 20.0, 3.0};
        const RadialGrid grid = RadialGrid::for_horizon(1, 1.0 / 128, 3.0, t_max);
        RunControls rc;
        rc.t_max = t_max;
        rc.record_dt = 0.1;
        rc.weight = &cal.weight;
        const SimOutcome out = run(spec, prob, grid, rc);
        CHECK(out.status == SimStatus::Decayed);
        const double lam = 2.0 / 3.0;
        double e_min = 1e300, e_max = 0.0, v_min = 1e300, v_max = 0.0;
        for (const TimeRecord& r : out.time_series) {
            if (r.t < 1.0) continue;
            const double es = std::pow(1.0 + r.t, lam + 1.0 - d0) * r.e_w;
            const double vs = std::pow(1.0 + r.t, lam - d0) * r.v_w;
            e_min = std::min(e_min, es);
            e_max = std::max(e_max, es);
            v_min = std::min(v_min, vs);
            v_max = std::max(v_max, vs);
        }
        CHECK(e_max <= 4.0 * e_min);
        CHECK(v_max <= 4.0 * v_min);
    }
}

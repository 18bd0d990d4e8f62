#include <doctest.h>

#include <cmath>
#include <vector>

#include "critwave/numerics.hpp"
#include "critwave/solver.hpp"

using namespace critwave;

namespace {

double mms_exact(double t, double r) { return std::exp(-t) * std::exp(-r * r); }

// forcing that makes mms_exact solve the damped equation with |u|^p
RunControls mms_controls(const DampingSpec& spec, const ProblemSpec& prob, const RadialGrid& grid,
                         double t_max) {
    RunControls rc;
    rc.t_max = t_max;
    rc.cfl = 0.5;
    rc.nonlinear = true;
    rc.record_dt = 0.5;
    rc.snapshot_dt = t_max;
    rc.snapshot_t_max = t_max;
    const int dim = prob.dim;
    const double p = prob.p;
    rc.forcing = [spec, dim, p](double t, double r) {
        const double u = mms_exact(t, r);
        return u * (1.0 + 2.0 * dim - 4.0 * r * r - spec.coefficient(t, r)) - std::pow(u, p);
    };
    std::vector<double> u0(grid.n_r), v0(grid.n_r);
    for (int j = 0; j < grid.n_r; ++j) {
        u0[j] = mms_exact(0.0, grid.radius(j));
        v0[j] = -u0[j];
    }
    rc.initial_override = std::make_pair(u0, v0);
    return rc;
}

}  // namespace

TEST_CASE("grid sizing keeps the light cone interior") {
    const RadialGrid grid = RadialGrid::for_horizon(1, 1.0 / 64, 2.0, 10.0);
    CHECK(grid.r_max() >= 2.0 + 10.0 + 4.0 * grid.dr);
    CHECK(grid.radius(0) == 0.0);
    CHECK_THROWS_AS(RadialGrid::for_horizon(1, -0.1, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("zero data stays zero") {
    DampingSpec spec{1.0, -1.0, 0.0};
    ProblemSpec prob;
    prob.dim = 1;
    prob.p = 2.0;
    prob.epsilon = 0.0;
    const RadialGrid grid = RadialGrid::for_horizon(1, 1.0 / 32, 1.0, 2.0);
    RunControls rc;
    rc.t_max = 2.0;
    const SimOutcome out = run(spec, prob, grid, rc);
    CHECK(out.status == SimStatus::Decayed);
    for (const TimeRecord& rec : out.time_series) {
        CHECK(rec.sup_u == 0.0);
        CHECK(rec.l2_u == 0.0);
        CHECK(rec.energy == 0.0);
    }
}

TEST_CASE("single step rejects a bad time step and matches run") {
    DampingSpec spec{1.0, -1.0, 0.0};
    ProblemSpec prob;
    prob.dim = 1;
    prob.p = 2.0;
    prob.epsilon = 0.5;
    prob.support_radius = 1.0;
    prob.u0 = {ProfileShape::Bump, 1.0, 1.0};
    prob.u1 = {ProfileShape::Zero, 0.0, 1.0};
    const RadialGrid grid = RadialGrid::for_horizon(1, 1.0 / 32, 1.0, 1.0);
    RunControls rc;
    rc.t_max = 1.0;
    StateSnapshot state = make_initial_state(spec, prob, grid, rc);
    StateSnapshot bad = state;
    bad.dt = grid.dr;  // violates dt <= 0.9 dr
    CHECK_THROWS_AS(step(bad, spec, prob, grid, rc), CflError);
    const StateSnapshot next = step(state, spec, prob, grid, rc);
    CHECK(next.t == doctest::Approx(state.t + state.dt));
    CHECK(next.u_curr.back() == 0.0);

    RunControls bad_cfl;
    bad_cfl.cfl = 0.95;
    CHECK_THROWS_AS(run(spec, prob, grid, bad_cfl), CflError);
}

TEST_CASE("non-finite updates are flagged") {
    DampingSpec spec{1.0, -1.0, 0.0};
    ProblemSpec prob;
    prob.dim = 1;
    prob.p = 3.0;
    const RadialGrid grid = RadialGrid::for_horizon(1, 1.0 / 32, 1.0, 1.0);
    RunControls rc;
    StateSnapshot state = make_initial_state(spec, prob, grid, rc);
    state.u_curr.assign(grid.n_r, 1e300);
    state.u_curr.back() = 0.0;
    CHECK_THROWS_AS(step(state, spec, prob, grid, rc), NonFiniteError);
}

TEST_CASE("linear evolution matches the half-line closed form") {
    DampingSpec spec{0.0, 0.0, 0.0};  // undamped reference, test-only override
    ProblemSpec prob;
    prob.dim = 1;
    prob.p = 2.0;
    prob.epsilon = 1.0;
    prob.support_radius = 1.0;
    prob.u0 = {ProfileShape::Bump, 1.0, 1.0};
    prob.u1 = {ProfileShape::Zero, 0.0, 1.0};
    const RadialProfile phi{ProfileShape::Bump, 1.0, 1.0};
    double prev_err = 0.0;
    for (double dr : {1.0 / 128, 1.0 / 256}) {
        const RadialGrid grid = RadialGrid::for_horizon(1, dr, 1.0, 1.0);
        RunControls rc;
        rc.t_max = 1.0;
        rc.nonlinear = false;
        rc.snapshot_dt = 1.0;
        rc.snapshot_t_max = 1.0;
        const SimOutcome out = run(spec, prob, grid, rc);
        const FieldSnapshot& last = out.snapshots.back();
        double err = 0.0;
        for (int j = 0; j < grid.n_r; ++j) {
            const double r = grid.radius(j);
            const double exact =
                0.5 * (phi.value(std::fabs(r + last.t)) + phi.value(std::fabs(r - last.t)));
            err = std::max(err, std::fabs(last.u[j] - exact));
        }
        if (prev_err > 0.0) CHECK(prev_err / err >= 3.0);
        prev_err = err;
        CHECK(err < 5e-3);
    }
}

TEST_CASE("manufactured solution converges at second order") {
    DampingSpec spec{1.0, -1.0, 0.0};
    ProblemSpec prob;
    prob.dim = 1;
    prob.p = 2.0;
    prob.epsilon = 0.0;
    std::vector<double> log_dr, log_err;
    for (double dr : {1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128}) {
        RadialGrid grid;
        grid.dim = 1;
        grid.dr = dr;
        grid.n_r = static_cast<int>(std::lround(8.0 / dr)) + 1;
        const RunControls rc = mms_controls(spec, prob, grid, 1.0);
        const SimOutcome out = run(spec, prob, grid, rc);
        const FieldSnapshot& last = out.snapshots.back();
        double err = 0.0;
        for (int j = 0; j < grid.n_r; ++j)
            err = std::max(err, std::fabs(last.u[j] - mms_exact(last.t, grid.radius(j))));
        log_dr.push_back(std::log(dr));
        log_err.push_back(std::log(err));
    }
    const double order = linear_fit(log_dr, log_err).slope;
    CHECK(order >= 1.9);
    CHECK(order <= 2.1);
}

TEST_CASE("support radius accessor") {
    DampingSpec spec{1.0, -1.0, 0.0};
    ProblemSpec prob;
    prob.dim = 1;
    prob.p = 2.0;
    prob.epsilon = 1.0;
    prob.support_radius = 1.0;
    prob.u0 = {ProfileShape::Bump, 1.0, 1.0};
    prob.u1 = {ProfileShape::Zero, 0.0, 1.0};
    const RadialGrid grid = RadialGrid::for_horizon(1, 1.0 / 64, 1.0, 2.0);
    RunControls rc;
    StateSnapshot state = make_initial_state(spec, prob, grid, rc);
    CHECK(support_radius(state, grid, 1e-10) <= 1.0 + 2.0 * grid.dr);
    state.u_curr.assign(grid.n_r, 0.0);
    CHECK(support_radius(state, grid, 1e-10) == 0.0);
    CHECK_THROWS_AS(support_radius(state, grid, -1.0), std::invalid_argument);
}

TEST_CASE("finite propagation speed with the four-cell halo") {
    DampingSpec spec{1.0, -1.0, 0.0};
    ProblemSpec prob;
    prob.dim = 1;
    prob.p = 2.0;
    prob.epsilon = 1.0;
    prob.support_radius = 1.0;
    prob.u0 = {ProfileShape::Bump, 1.0, 1.0};
    prob.u1 = {ProfileShape::Bump, 0.5, 1.0};
    const RadialGrid grid = RadialGrid::for_horizon(1, 1.0 / 512, 1.0, 2.0);
    RunControls rc;
    rc.t_max = 2.0;
    rc.nonlinear = false;
    rc.track_cone_leak = true;
    rc.support_tol = 1e-10;
    const SimOutcome out = run(spec, prob, grid, rc);
    CHECK(out.max_cone_leak < 1e-10);
    for (const TimeRecord& rec : out.time_series)
        CHECK(rec.support_radius <= 1.0 + rec.t + 4.0 * grid.dr + 1e-12);
}

TEST_CASE("discrete energy law: exact balance and monotone decay") {
    DampingSpec spec{1.0, -1.0, 0.0};
    ProblemSpec prob;
    prob.dim = 1;
    prob.p = 2.0;
    prob.epsilon = 1.0;
    prob.support_radius = 1.0;
    prob.u0 = {ProfileShape::Bump, 1.0, 1.0};
    prob.u1 = {ProfileShape::Zero, 0.0, 1.0};
    const RadialGrid grid = RadialGrid::for_horizon(1, 1.0 / 256, 1.0, 2.0);
    RunControls rc;
    rc.t_max = 2.0;
    rc.nonlinear = false;
    rc.track_energy_balance = true;
    const SimOutcome out = run(spec, prob, grid, rc);
    CHECK(energy_identity_residual(out) < 1e-6);
    CHECK(out.energy_max_uptick <= 1e-9);

    // zero data: identically zero balance
    ProblemSpec zero = prob;
    zero.epsilon = 0.0;
    const SimOutcome out0 = run(spec, zero, grid, rc);
    CHECK(energy_identity_residual(out0) == 0.0);

    // the residual accessor refuses untracked or nonlinear runs
    RunControls nl = rc;
    nl.nonlinear = true;
    const SimOutcome outn = run(spec, prob, grid, nl);
    CHECK_THROWS_AS(energy_identity_residual(outn), std::invalid_argument);
}

TEST_CASE("centered-sample energy residual shrinks at second order") {
    DampingSpec spec{1.0, -1.0, 0.0};
    ProblemSpec prob;
    prob.dim = 1;
    prob.p = 2.0;
    prob.epsilon = 1.0;
    prob.support_radius = 1.0;
    prob.u0 = {ProfileShape::Bump, 1.0, 1.0};
    prob.u1 = {ProfileShape::Zero, 0.0, 1.0};
    std::vector<double> resid;
    for (double dr : {1.0 / 64, 1.0 / 128, 1.0 / 256}) {
        const RadialGrid grid = RadialGrid::for_horizon(1, dr, 1.0, 2.0);
        RunControls rc;
        rc.t_max = 2.0;
        rc.nonlinear = false;
        rc.track_energy_balance = true;
        resid.push_back(run(spec, prob, grid, rc).energy_snapshot_residual);
    }
    CHECK(resid[0] / resid[1] >= 3.4);
    CHECK(resid[0] / resid[1] <= 4.6);
    CHECK(resid[1] / resid[2] >= 3.4);
    CHECK(resid[1] / resid[2] <= 4.6);
}

TEST_CASE("strongly growing damping stays stable over 1e5 steps") {
    DampingSpec spec{1.0, -2.0, 0.0};
    ProblemSpec prob;
    prob.dim = 1;
    prob.p = 2.0;
    prob.epsilon = 1.0;
    prob.support_radius = 1.0;
    prob.u0 = {ProfileShape::Bump, 1.0, 1.0};
    prob.u1 = {ProfileShape::Bump, 1.0, 1.0};
    const double dr = 1.0 / 1024;
    const RadialGrid grid = RadialGrid::for_horizon(1, dr, 1.0, 50.0);
    RunControls rc;
    rc.t_max = 50.0;  // 102400 steps at cfl = 0.5
    rc.nonlinear = false;
    rc.record_dt = 1.0;
    const SimOutcome out = run(spec, prob, grid, rc);
    CHECK(out.status == SimStatus::Decayed);
    for (const TimeRecord& rec : out.time_series) CHECK(std::isfinite(rec.sup_u));
}

TEST_CASE("blow-up detection and bracket") {
    DampingSpec spec{1.0, -1.0, 0.0};
    ProblemSpec prob;
    prob.dim = 1;
    prob.p = 1.5;
    prob.epsilon = 0.2;
    prob.support_radius = 0.5;
    prob.u0 = {ProfileShape::Bump, 20.0, 0.5};
    prob.u1 = {ProfileShape::Bump, 20.0, 0.5};
    const RadialGrid grid = RadialGrid::for_horizon(1, 1.0 / 128, 0.5, 20.0);
    RunControls rc;
    rc.t_max = 20.0;
    const SimOutcome out = run(spec, prob, grid, rc);
    CHECK(out.status == SimStatus::Blowup);
    REQUIRE(out.lifespan.has_value());
    CHECK(out.lifespan->estimate <= out.final_time);
    CHECK(out.lifespan->lo <= out.lifespan->hi);
    CHECK(out.lifespan->crossing >= out.lifespan->lo);
    CHECK(out.lifespan->crossing <= out.lifespan->hi);
    double prev = -1.0;
    for (const TimeRecord& rec : out.time_series) {
        CHECK(rec.t > prev);  // strictly increasing records
        prev = rec.t;
    }
}

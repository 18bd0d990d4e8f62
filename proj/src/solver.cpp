#include "critwave/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <utility>

#include "critwave/energy.hpp"
#include "critwave/numerics.hpp"

namespace critwave {

namespace {

std::vector<double> quadrature_weights(const RadialGrid& grid) {
    const double area = sphere_area(grid.dim);
    std::vector<double> w(grid.n_r);
    for (int j = 0; j < grid.n_r; ++j) {
        const double r = grid.radius(j);
        const double rad = (grid.dim == 1) ? 1.0 : std::pow(r, grid.dim - 1);
        const double end = (j == 0 || j == grid.n_r - 1) ? 0.5 : 1.0;
        w[j] = area * rad * grid.dr * end;
    }
    return w;
}

void radial_laplacian(const std::vector<double>& u, const RadialGrid& grid,
                      std::vector<double>& lap) {
    const int n = grid.n_r;
    const double inv_dr2 = 1.0 / (grid.dr * grid.dr);
    const double nm1 = grid.dim - 1.0;
    lap[0] = grid.dim * 2.0 * (u[1] - u[0]) * inv_dr2;
    for (int j = 1; j + 1 < n; ++j) {
        lap[j] = (u[j + 1] - 2.0 * u[j] + u[j - 1]) * inv_dr2 +
                 nm1 * (u[j + 1] - u[j - 1]) / (2.0 * grid.dr * grid.radius(j));
    }
    lap[n - 1] = 0.0;
}

// Discrete half-step energy compatible with the leapfrog update:
// 1/2 ||(u_b - u_a)/dt||^2 - 1/2 <L u_a, u_b>. The balance against the
// damping dissipation telescopes exactly when L is self-adjoint in the
// quadrature product (exact for dim = 1).
double half_step_energy(const std::vector<double>& lap_a, const std::vector<double>& ua,
                        const std::vector<double>& ub, double dt,
                        const std::vector<double>& wq) {
    double kinetic = 0.0, potential = 0.0;
    const std::size_t n = ua.size();
    for (std::size_t j = 0; j < n; ++j) {
        const double v = (ub[j] - ua[j]) / dt;
        kinetic += 0.5 * wq[j] * v * v;
        potential -= 0.5 * wq[j] * lap_a[j] * ub[j];
    }
    return kinetic + potential;
}

TimeRecord make_record(double t, const std::vector<double>& u, const std::vector<double>& ut,
                       const RadialGrid& grid, const std::vector<double>& wq,
                       const RunControls& controls, const ProblemSpec& prob) {
    TimeRecord rec;
    rec.t = t;
    double sup = 0.0, l2 = 0.0, en = 0.0;
    const int n = grid.n_r;
    for (int j = 0; j < n; ++j) {
        sup = std::max(sup, std::fabs(u[j]));
        l2 += wq[j] * u[j] * u[j];
        double g = 0.0;
        if (j > 0 && j + 1 < n) g = (u[j + 1] - u[j - 1]) / (2.0 * grid.dr);
        en += 0.5 * wq[j] * (ut[j] * ut[j] + g * g);
    }
    rec.sup_u = sup;
    rec.l2_u = std::sqrt(l2);
    rec.energy = en;
    rec.support_radius = 0.0;
    for (int j = n - 1; j >= 0; --j) {
        if (std::fabs(u[j]) > controls.support_tol) {
            rec.support_radius = grid.radius(j);
            break;
        }
    }
    if (controls.weight != nullptr) {
        const WeightedEnergies we = weighted_energies_raw(u, ut, grid, *controls.weight, prob.p, t);
        rec.e_w = we.kinetic_gradient;
        rec.v_w = we.damped_mass;
        rec.f_w = we.nonlinear_potential;
        rec.weighted_energy = we.kinetic_gradient;
    }
    return rec;
}

double cone_leak(const std::vector<double>& u, double t, const RadialGrid& grid,
                 const std::vector<double>& wq, double support_radius) {
    const double bound = support_radius + t + 4.0 * grid.dr;
    double outside = 0.0, total = 0.0;
    for (int j = 0; j < grid.n_r; ++j) {
        const double m = wq[j] * u[j] * u[j];
        total += m;
        if (grid.radius(j) > bound) outside += m;
    }
    if (total <= 0.0) return 0.0;
    return std::sqrt(outside / total);
}

}  // namespace

RadialGrid RadialGrid::for_horizon(int dim, double dr, double support_radius, double t_max,
                                   double pad) {
    if (!(dr > 0.0)) throw std::invalid_argument("RadialGrid: dr must be > 0");
    RadialGrid g;
    g.dim = dim;
    g.dr = dr;
    const double r_needed = support_radius + t_max + 4.0 * dr + pad;
    g.n_r = static_cast<int>(std::ceil(r_needed / dr)) + 1;
    return g;
}

std::string to_string(SimStatus status) {
    switch (status) {
        case SimStatus::Decayed: return "decayed";
        case SimStatus::Blowup: return "blowup";
        case SimStatus::HorizonReached: return "horizon_reached";
    }
    return "unknown";
}

StateSnapshot make_initial_state(const DampingSpec& spec, const ProblemSpec& prob,
                                 const RadialGrid& grid, const RunControls& controls) {
    if (!(controls.cfl > 0.0) || controls.cfl > 0.9)
        throw CflError("run: cfl must lie in (0, 0.9]");
    const int n = grid.n_r;
    if (n < 8) throw std::invalid_argument("run: grid too small");
    const double dt = controls.cfl * grid.dr;

    std::vector<double> u0(n), v0(n);
    if (controls.initial_override) {
        if (controls.initial_override->first.size() != static_cast<std::size_t>(n) ||
            controls.initial_override->second.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("run: initial override arrays must match the grid");
        u0 = controls.initial_override->first;
        v0 = controls.initial_override->second;
    } else {
        for (int j = 0; j < n; ++j) {
            const double r = grid.radius(j);
            u0[j] = prob.epsilon * prob.u0.value(r);
            v0[j] = prob.epsilon * prob.u1.value(r);
        }
    }
    u0[n - 1] = 0.0;
    v0[n - 1] = 0.0;

    std::vector<double> lap(n);
    radial_laplacian(u0, grid, lap);
    StateSnapshot state;
    state.dt = dt;
    state.t = dt;
    state.u_prev = u0;
    state.u_curr.resize(n);
    for (int j = 0; j < n; ++j) {
        double rhs = lap[j];
        if (controls.nonlinear) rhs += abs_pow(u0[j], prob.p);
        if (controls.forcing) rhs += controls.forcing(0.0, grid.radius(j));
        const double c = spec.coefficient(0.0, grid.radius(j));
        state.u_curr[j] = u0[j] + dt * v0[j] + 0.5 * dt * dt * (rhs - c * v0[j]);
    }
    state.u_curr[n - 1] = 0.0;
    return state;
}

StateSnapshot step(const StateSnapshot& state, const DampingSpec& spec, const ProblemSpec& prob,
                   const RadialGrid& grid, const RunControls& controls) {
    const int n = grid.n_r;
    const double dt = state.dt;
    if (!(dt > 0.0) || dt > 0.9 * grid.dr) throw CflError("step: dt must satisfy dt <= 0.9*dr");
    if (state.u_prev.size() != static_cast<std::size_t>(n) ||
        state.u_curr.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("step: state does not match the grid");

    StateSnapshot next;
    next.dt = dt;
    next.t = state.t + dt;
    next.u_prev = state.u_curr;
    next.u_curr.resize(n);

    std::vector<double> lap(n);
    radial_laplacian(state.u_curr, grid, lap);
    const double bt = spec.temporal_factor(state.t);
    bool finite = true;
    for (int j = 0; j + 1 < n; ++j) {
        const double r = grid.radius(j);
        double rhs = lap[j];
        if (controls.nonlinear) rhs += abs_pow(state.u_curr[j], prob.p);
        if (controls.forcing) rhs += controls.forcing(state.t, r);
        const double half_c = 0.5 * dt * spec.spatial_factor(r) * bt;
        const double out = (dt * dt * rhs + 2.0 * state.u_curr[j] - state.u_prev[j] +
                            half_c * state.u_prev[j]) /
                           (1.0 + half_c);
        next.u_curr[j] = out;
        if (!std::isfinite(out)) finite = false;
    }
    next.u_curr[n - 1] = 0.0;
    if (!finite) throw NonFiniteError("step: non-finite update (blow-up passage)");
    return next;
}

double support_radius(const StateSnapshot& state, const RadialGrid& grid, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("support_radius: tol must be > 0");
    for (int j = grid.n_r - 1; j >= 0; --j)
        if (std::fabs(state.u_curr[j]) > tol) return grid.radius(j);
    return 0.0;
}

SimOutcome run(const DampingSpec& spec, const ProblemSpec& prob, const RadialGrid& grid,
               const RunControls& controls) {
    const int n = grid.n_r;
    const double dt = controls.cfl * grid.dr;
    StateSnapshot init = make_initial_state(spec, prob, grid, controls);

    std::vector<double> u_prev = std::move(init.u_prev);
    std::vector<double> u_curr = std::move(init.u_curr);
    std::vector<double> u_next(n), lap(n), ut(n);
    std::vector<double> a_vals(n);
    for (int j = 0; j < n; ++j) a_vals[j] = spec.spatial_factor(grid.radius(j));
    const std::vector<double> wq = quadrature_weights(grid);

    const long long record_every = std::max<long long>(1, std::llround(controls.record_dt / dt));
    const long long snapshot_every =
        controls.snapshot_dt > 0.0 ? std::max<long long>(1, std::llround(controls.snapshot_dt / dt))
                                   : 0;
    const double snapshot_t_max =
        controls.snapshot_t_max > 0.0 ? controls.snapshot_t_max : controls.t_max;
    // u_curr sits at level*dt; levels run up to t_max
    const long long total_levels = std::max<long long>(1, std::llround(controls.t_max / dt));

    SimOutcome out;
    out.energy_balance_valid =
        controls.track_energy_balance && !controls.nonlinear && !controls.forcing;

    {
        std::vector<double> v0(n);
        if (controls.initial_override) {
            v0 = controls.initial_override->second;
        } else {
            for (int j = 0; j < n; ++j) v0[j] = prob.epsilon * prob.u1.value(grid.radius(j));
        }
        out.time_series.push_back(make_record(0.0, u_prev, v0, grid, wq, controls, prob));
        if (controls.track_cone_leak)
            out.max_cone_leak =
                std::max(out.max_cone_leak, cone_leak(u_prev, 0.0, grid, wq, prob.support_radius));
        if (snapshot_every > 0) out.snapshots.push_back({0.0, u_prev});
    }

    const double sup_initial = out.time_series.front().sup_u;
    double sup_overall = sup_initial;

    double e_init = 0.0, e_last = 0.0, balance_cum = 0.0;
    double snap_init = 0.0, snap_last = -1.0, snap_cum = 0.0;
    if (controls.track_energy_balance) {
        radial_laplacian(u_prev, grid, lap);
        e_init = half_step_energy(lap, u_prev, u_curr, dt, wq);
        e_last = e_init;
    }

    std::deque<std::pair<double, double>> dense;
    const double dense_floor = std::max(1e-4 * controls.blowup_threshold, 10.0 * sup_initial);
    bool crossed = false;
    double t_cross = 0.0;
    bool nonfinite = false;
    double t_curr = dt;  // time of u_curr

    for (long long level = 2; level <= total_levels; ++level) {
        // advance from level-1 to level; scheme centered at t_curr = (level-1)*dt
        radial_laplacian(u_curr, grid, lap);
        const double bt = spec.temporal_factor(t_curr);
        const double dt2 = dt * dt;
        double sup_next = 0.0;
        const bool nl = controls.nonlinear;
        const bool has_force = static_cast<bool>(controls.forcing);
        const double p = prob.p;
        for (int j = 0; j + 1 < n; ++j) {
            double rhs = lap[j];
            if (nl) rhs += abs_pow(u_curr[j], p);
            if (has_force) rhs += controls.forcing(t_curr, grid.radius(j));
            const double half_c = 0.5 * dt * a_vals[j] * bt;
            const double val =
                (dt2 * rhs + 2.0 * u_curr[j] - u_prev[j] + half_c * u_prev[j]) / (1.0 + half_c);
            u_next[j] = val;
            const double av = std::fabs(val);
            if (av > sup_next) sup_next = av;
        }
        u_next[n - 1] = 0.0;

        if (!std::isfinite(sup_next)) {
            nonfinite = true;
            break;  // u_curr at t_curr stays the last finite level
        }

        if (controls.track_energy_balance) {
            const double e_next = half_step_energy(lap, u_curr, u_next, dt, wq);
            double dissipation = 0.0;
            for (int j = 0; j < n; ++j) {
                const double v = (u_next[j] - u_prev[j]) / (2.0 * dt);
                dissipation += wq[j] * a_vals[j] * bt * v * v;
            }
            balance_cum += e_next - e_last + dt * dissipation;
            if (e_init > 0.0)
                out.energy_balance_residual =
                    std::max(out.energy_balance_residual, std::fabs(balance_cum) / e_init);
            if (e_last > 0.0)
                out.energy_max_uptick = std::max(out.energy_max_uptick, (e_next - e_last) / e_last);
            e_last = e_next;

            // centered-sample energy at the current integer level, for the
            // convergence study of the continuum identity
            double e_snap = 0.0;
            for (int j = 0; j < n; ++j) {
                const double v = (u_next[j] - u_prev[j]) / (2.0 * dt);
                double g = 0.0;
                if (j > 0 && j + 1 < n) g = (u_curr[j + 1] - u_curr[j - 1]) / (2.0 * grid.dr);
                e_snap += 0.5 * wq[j] * (v * v + g * g);
            }
            if (snap_last >= 0.0) {
                const double bt_half = spec.temporal_factor(t_curr - 0.5 * dt);
                double diss_half = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double v = (u_curr[j] - u_prev[j]) / dt;
                    diss_half += wq[j] * a_vals[j] * bt_half * v * v;
                }
                snap_cum += e_snap - snap_last + dt * diss_half;
                if (snap_init > 0.0)
                    out.energy_snapshot_residual =
                        std::max(out.energy_snapshot_residual, std::fabs(snap_cum) / snap_init);
            } else {
                snap_init = e_snap;
            }
            snap_last = e_snap;
        }

        std::swap(u_prev, u_curr);
        std::swap(u_curr, u_next);
        t_curr = dt * static_cast<double>(level);
        sup_overall = std::max(sup_overall, sup_next);

        if (sup_next >= dense_floor && dense_floor > 0.0) {
            dense.emplace_back(t_curr, sup_next);
            if (dense.size() > (1u << 17)) dense.pop_front();
        }
        if (!crossed && sup_next >= controls.blowup_threshold) {
            crossed = true;
            t_cross = t_curr;
        }
        if (crossed && sup_next >= 1e3 * controls.blowup_threshold) break;

        if (level % record_every == 0 || level == total_levels) {
            for (int j = 0; j < n; ++j) ut[j] = (u_curr[j] - u_prev[j]) / dt;
            out.time_series.push_back(make_record(t_curr, u_curr, ut, grid, wq, controls, prob));
            if (controls.track_cone_leak)
                out.max_cone_leak = std::max(
                    out.max_cone_leak, cone_leak(u_curr, t_curr, grid, wq, prob.support_radius));
        }
        if (snapshot_every > 0 && level % snapshot_every == 0 &&
            t_curr <= snapshot_t_max + 0.5 * dt)
            out.snapshots.push_back({t_curr, u_curr});
    }

    out.final_time = t_curr;

    if (crossed || nonfinite) {
        out.status = SimStatus::Blowup;
        if (!crossed) t_cross = out.final_time;
        LifespanBracket ls;
        ls.crossing = t_cross;
        double t_fit = t_cross;
        std::vector<double> ts, ys;
        for (const auto& [t, s] : dense) {
            if (s >= 1e-2 * controls.blowup_threshold && s <= controls.blowup_threshold) {
                ts.push_back(t);
                ys.push_back(std::pow(s, -0.5 * (prob.p - 1.0)));
            }
        }
        if (ts.size() >= 8) {
            const LinearFit fit = linear_fit(ts, ys);
            if (fit.slope < 0.0) {
                const double root = -fit.intercept / fit.slope;
                const double span = ts.back() - ts.front();
                if (root >= ts.front() && root <= out.final_time + 10.0 * span + 10.0 * dt)
                    t_fit = root;
            }
        }
        ls.estimate = std::min(t_fit, out.final_time);
        ls.lo = std::min(t_fit, t_cross);
        ls.hi = std::max(t_fit, t_cross);
        out.lifespan = ls;
        return out;
    }

    if (sup_overall == 0.0) {
        out.status = SimStatus::Decayed;
        return out;
    }
    const double sup_final = out.time_series.back().sup_u;
    bool monotone = true;
    const double t_tail = 0.8 * controls.t_max;
    double prev_sup = -1.0;
    for (const TimeRecord& rec : out.time_series) {
        if (rec.t < t_tail) continue;
        if (prev_sup >= 0.0 && rec.sup_u > prev_sup * (1.0 + 1e-9)) {
            monotone = false;
            break;
        }
        prev_sup = rec.sup_u;
    }
    out.status =
        (sup_final < sup_initial && monotone) ? SimStatus::Decayed : SimStatus::HorizonReached;
    return out;
}

double energy_identity_residual(const SimOutcome& outcome) {
    if (!outcome.energy_balance_valid)
        throw std::invalid_argument(
            "energy_identity_residual: requires a linear run tracked with "
            "track_energy_balance and no forcing");
    return outcome.energy_balance_residual;
}

}  // namespace critwave

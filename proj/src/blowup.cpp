#include "critwave/blowup.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

#include "critwave/numerics.hpp"
#include "critwave/weight.hpp"

namespace critwave {

namespace {

double eta(double s) { return s <= 0.0 ? 1.0 : cutoff(s, 0.5); }
double eta_d1(double s) { return s <= 0.0 ? 0.0 : cutoff_d1(s, 0.5); }
double eta_d2(double s) { return s <= 0.0 ? 0.0 : cutoff_d2(s, 0.5); }

}  // namespace

double TestFunctionProbe::arg(double t, double r) const {
    const double w = std::pow(r, 2.0 - alpha);
    if (beta == 1.0) return (w + t * t) / (R * R);
    return (w + t) / R;
}

double TestFunctionProbe::value(double t, double r) const {
    return std::pow(eta(arg(t, r)), 2.0 * conjugate());
}

double TestFunctionProbe::value_star(double t, double r) const {
    const double s = arg(t, r);
    if (s <= 0.5) return 0.0;
    return std::pow(eta(s), 2.0 * conjugate());
}

double TestFunctionProbe::dt(double t, double r) const {
    const double s = arg(t, r);
    const double tp = 2.0 * conjugate();
    const double ds_dt = (beta == 1.0) ? 2.0 * t / (R * R) : 1.0 / R;
    return tp * std::pow(eta(s), tp - 1.0) * eta_d1(s) * ds_dt;
}

double TestFunctionProbe::dtt(double t, double r) const {
    const double s = arg(t, r);
    const double tp = 2.0 * conjugate();
    const double e = eta(s);
    const double chain2 = tp * (tp - 1.0) * std::pow(e, tp - 2.0) * eta_d1(s) * eta_d1(s) +
                          tp * std::pow(e, tp - 1.0) * eta_d2(s);
    if (beta == 1.0) {
        const double ds_dt = 2.0 * t / (R * R);
        return chain2 * ds_dt * ds_dt + tp * std::pow(e, tp - 1.0) * eta_d1(s) * (2.0 / (R * R));
    }
    return chain2 / (R * R);
}

double TestFunctionProbe::laplacian(double t, double r) const {
    const double s = arg(t, r);
    const double tp = 2.0 * conjugate();
    const double e = eta(s);
    const double scale = (beta == 1.0) ? R * R : R;
    const double w1 = (2.0 - alpha) * std::pow(r, 1.0 - alpha);
    const double w2 = (2.0 - alpha) * (1.0 - alpha) * std::pow(r, -alpha);
    const double chain1 = tp * std::pow(e, tp - 1.0) * eta_d1(s);
    const double chain2 = tp * (tp - 1.0) * std::pow(e, tp - 2.0) * eta_d1(s) * eta_d1(s) +
                          tp * std::pow(e, tp - 1.0) * eta_d2(s);
    const double d2 = chain2 * (w1 / scale) * (w1 / scale) + chain1 * w2 / scale;
    double first = 0.0;
    if (dim > 1) {
        // w1/r = (2-alpha) r^{-alpha} -> 0 at the origin for alpha < 0
        const double w1_over_r = (2.0 - alpha) * std::pow(r, -alpha);
        first = (dim - 1.0) * chain1 * w1_over_r / scale;
    }
    return d2 + first;
}

TestFunctionProbe make_probe(const DampingSpec& spec, const ProblemSpec& prob, double R) {
    if (!(spec.beta == 0.0 || spec.beta == 1.0))
        throw std::invalid_argument("make_probe: probes are defined for beta = 0 or beta = 1");
    if (!(R > 0.0)) throw std::invalid_argument("make_probe: R must be > 0");
    TestFunctionProbe probe;
    probe.R = R;
    probe.p = prob.p;
    probe.alpha = spec.alpha;
    probe.beta = spec.beta;
    probe.dim = prob.dim;
    return probe;
}

namespace {

// Space-time mass int int |u|^p [time factor] cutoff dx dt over the snapshots.
double spacetime_mass(const SimOutcome& outcome, const RadialGrid& grid,
                      const TestFunctionProbe& probe, double p, bool star, double time_horizon) {
    const auto& snaps = outcome.snapshots;
    if (snaps.size() < 3) throw std::invalid_argument("probe: run record has too few snapshots");
    const double dt_snap = snaps[1].t - snaps[0].t;
    if (snaps.back().t + 1e-9 < time_horizon)
        throw std::invalid_argument("probe: run record does not cover the requested scale in time");

    const double area = sphere_area(grid.dim);
    std::size_t m = snaps.size();
    const std::size_t needed = static_cast<std::size_t>(std::ceil(time_horizon / dt_snap)) + 2;
    m = std::min(m, needed);

    std::vector<double> slice(m);
    std::vector<double> f(grid.n_r);
    for (std::size_t i = 0; i < m; ++i) {
        const double t = snaps[i].t;
        const std::vector<double>& u = snaps[i].u;
        for (int j = 0; j < grid.n_r; ++j) {
            const double r = grid.radius(j);
            const double cut = star ? probe.value_star(t, r) : probe.value(t, r);
            if (cut == 0.0) {
                f[j] = 0.0;
                continue;
            }
            const double rad = (grid.dim == 1) ? 1.0 : std::pow(r, grid.dim - 1);
            f[j] = abs_pow(u[j], p) * cut * rad;
        }
        const double timefac = (probe.beta == 1.0) ? (1.0 + t) : 1.0;
        slice[i] = timefac * area * simpson_uniform(f, grid.dr);
    }
    return simpson_uniform(slice, dt_snap);
}

}  // namespace

ProbeEvaluation probe_inequality(const SimOutcome& outcome, const TestFunctionProbe& probe,
                                 const DampingSpec& spec, const ProblemSpec& prob,
                                 const RadialGrid& grid) {
    if (!(probe.R >= prob.support_radius))
        throw std::invalid_argument("probe_inequality: requires R >= the data support radius");
    ProbeEvaluation out;
    out.data_term = prob.epsilon * initial_mass_functional(spec, prob);
    out.nonlinear_weighted = spacetime_mass(outcome, grid, probe, prob.p, false, probe.R);
    out.nonlinear_weighted_star = spacetime_mass(outcome, grid, probe, prob.p, true, probe.R);
    const double pp = probe.conjugate();
    const double base = (probe.beta == 1.0 ? 4.0 : 2.0) / (2.0 - probe.alpha);
    out.r_power =
        base * (1.0 / (prob.p - 1.0) - 0.5 * (prob.dim - probe.alpha)) / pp;
    out.lhs = out.data_term + out.nonlinear_weighted;
    out.rhs_shape = std::pow(probe.R, -out.r_power) *
                    std::pow(out.nonlinear_weighted_star, 1.0 / prob.p);
    return out;
}

ScaleIntegralResult y_functional(const SimOutcome& outcome, const DampingSpec& spec,
                                 const ProblemSpec& prob, const RadialGrid& grid, double rho,
                                 int n_scales) {
    const double pc = critical_exponent(prob.dim, spec.alpha);
    if (std::fabs(prob.p - pc) > 1e-9 * pc)
        throw std::invalid_argument("y_functional: requires the critical exponent p");
    if (!(rho > 1.0)) throw std::invalid_argument("y_functional: requires rho > 1");
    if (n_scales < 3) throw std::invalid_argument("y_functional: too few scales");
    if (n_scales % 2 == 0) ++n_scales;

    const double dlog = std::log(rho) / (n_scales - 1);
    std::vector<double> integrand(n_scales);
    for (int k = 0; k < n_scales; ++k) {
        TestFunctionProbe probe = make_probe(spec, prob, std::exp(dlog * k));
        integrand[k] = spacetime_mass(outcome, grid, probe, prob.p, true, probe.R);
    }
    ScaleIntegralResult out;
    out.value = simpson_uniform(integrand, dlog);
    TestFunctionProbe full = make_probe(spec, prob, rho);
    out.bound = std::log(2.0) * spacetime_mass(outcome, grid, full, prob.p, false, rho);
    return out;
}

ProbeDerivativeBounds probe_derivative_bounds(const TestFunctionProbe& probe, int n_t, int n_r) {
    const double t_max = (probe.beta == 1.0) ? probe.R : probe.R;
    const double r_max = std::pow((probe.beta == 1.0) ? probe.R * probe.R : probe.R,
                                  1.0 / (2.0 - probe.alpha));
    const double pp = probe.conjugate();
    const double r2 = probe.R * probe.R;
    ProbeDerivativeBounds out;
    for (int i = 0; i < n_t; ++i) {
        const double t = t_max * static_cast<double>(i) / (n_t - 1);
        for (int j = 0; j < n_r; ++j) {
            const double r = r_max * static_cast<double>(j) / (n_r - 1);
            const double star = probe.value_star(t, r);
            if (star < 1e-14) continue;
            const double xa = std::pow(1.0 + r * r, -0.5 * probe.alpha);  // <r>^{-alpha}
            if (probe.beta == 1.0) {
                const double qt = std::fabs(probe.dt(t, r)) * r2 /
                                  ((1.0 + t) * std::pow(star, 1.0 - 0.5 / pp));
                const double qtt = std::fabs(probe.dtt(t, r)) * r2 / std::pow(star, 1.0 / probe.p);
                const double qlap = std::fabs(probe.laplacian(t, r)) * r2 /
                                    (xa * std::pow(star, 1.0 / probe.p));
                out.sup_dt = std::max(out.sup_dt, qt);
                out.sup_dtt = std::max(out.sup_dtt, qtt);
                out.sup_laplacian = std::max(out.sup_laplacian, qlap);
            } else {
                const double qt =
                    std::fabs(probe.dt(t, r)) * probe.R / std::pow(star, 1.0 - 0.5 / pp);
                const double qtt =
                    std::fabs(probe.dtt(t, r)) * r2 / std::pow(star, 1.0 / probe.p);
                const double qlap = std::fabs(probe.laplacian(t, r)) * probe.R /
                                    (xa * std::pow(star, 1.0 / probe.p));
                out.sup_dt = std::max(out.sup_dt, qt);
                out.sup_dtt = std::max(out.sup_dtt, qtt);
                out.sup_laplacian = std::max(out.sup_laplacian, qlap);
            }
        }
    }
    return out;
}

int resolve_thread_count(int requested) {
    int n = requested;
    if (n <= 0) {
        if (const char* env = std::getenv("CRITWAVE_THREADS")) {
            n = std::atoi(env);
        }
    }
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
    if (const char* env = std::getenv("CRITWAVE_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, cap);
    }
    return n;
}

double fit_power_slope(const std::vector<double>& eps, const std::vector<double>& lifespan) {
    if (eps.size() != lifespan.size() || eps.size() < 2)
        throw std::invalid_argument("fit_power_slope: need >= 2 matching points");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0) || !(lifespan[i] > 0.0))
            throw std::invalid_argument("fit_power_slope: values must be positive");
        xs.push_back(std::log(eps[i]));
        ys.push_back(std::log(lifespan[i]));
    }
    return linear_fit(xs, ys).slope;
}

double fit_loglog_slope(const std::vector<double>& eps, const std::vector<double>& lifespan) {
    if (eps.size() != lifespan.size() || eps.size() < 2)
        throw std::invalid_argument("fit_loglog_slope: need >= 2 matching points");
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0) || !(lifespan[i] > 1.0))
            throw std::invalid_argument("fit_loglog_slope: requires eps > 0 and T > 1");
        xs.push_back(std::log(eps[i]));
        ys.push_back(std::log(std::log(lifespan[i])));
    }
    return linear_fit(xs, ys).slope;
}

SweepResult lifespan_sweep(const DampingSpec& spec, const ProblemSpec& prob_template,
                           const std::vector<double>& eps_list, const RadialGrid& grid,
                           const RunControls& controls, int threads) {
    if (eps_list.size() < 2) throw std::invalid_argument("lifespan_sweep: need >= 2 epsilon values");
    for (std::size_t i = 1; i < eps_list.size(); ++i)
        if (!(eps_list[i] < eps_list[i - 1]))
            throw std::invalid_argument("lifespan_sweep: epsilon values must decrease");
    const LifespanExponent target = lifespan_exponent(spec, prob_template);  // also gates p <= p_c
    if (!(initial_mass_functional(spec, prob_template) > 0.0))
        throw std::invalid_argument(
            "lifespan_sweep: initial-data positivity gate failed (mass functional <= 0)");

    const int n = static_cast<int>(eps_list.size());
    std::vector<SimOutcome> outcomes(n);
    std::atomic<int> next{0};
    const int n_threads = std::min(resolve_thread_count(threads), n);
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            ProblemSpec prob = prob_template;
            prob.epsilon = eps_list[i];
            RunControls rc = controls;
            rc.weight = nullptr;  // scalar records only
            rc.snapshot_dt = 0.0;
            outcomes[i] = run(spec, prob, grid, rc);
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }

    SweepResult result;
    result.kind = target.kind;
    result.target_slope = -target.value;
    result.points.resize(n);
    for (int i = 0; i < n; ++i) {
        SweepPoint& pt = result.points[i];
        pt.eps = eps_list[i];
        pt.status = outcomes[i].status;
        if (outcomes[i].lifespan) {
            pt.t_fit = outcomes[i].lifespan->estimate;
            pt.t_lo = outcomes[i].lifespan->lo;
            pt.t_hi = outcomes[i].lifespan->hi;
        }
    }

    std::vector<int> candidates;
    for (int i = 0; i < n; ++i) {
        if (result.points[i].status != SimStatus::Blowup) continue;
        if (result.kind == LifespanClass::Critical && !(result.points[i].t_fit > 1.0)) continue;
        candidates.push_back(i);
    }
    // drop the largest epsilon (worst asymptotics) when enough points remain
    if (candidates.size() >= 6) candidates.erase(candidates.begin());
    std::vector<double> fit_eps, fit_t;
    for (int i : candidates) {
        result.points[i].used_in_fit = true;
        fit_eps.push_back(result.points[i].eps);
        fit_t.push_back(result.points[i].t_fit);
    }
    result.used_points = static_cast<int>(fit_eps.size());
    if (result.used_points >= 2) {
        result.fitted_slope = (result.kind == LifespanClass::Subcritical)
                                  ? fit_power_slope(fit_eps, fit_t)
                                  : fit_loglog_slope(fit_eps, fit_t);
        result.rel_err = std::fabs(result.fitted_slope - result.target_slope) /
                         std::fabs(result.target_slope);
    } else {
        result.fitted_slope = std::numeric_limits<double>::quiet_NaN();
        result.rel_err = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

}  // namespace critwave

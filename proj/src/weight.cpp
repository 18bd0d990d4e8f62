#include "critwave/weight.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace critwave {

double cutoff(double r, double r_plateau) {
    if (!(r >= 0.0) || !(r_plateau > 0.0))
        throw std::invalid_argument("cutoff: requires r >= 0 and r_plateau > 0");
    if (r <= r_plateau) return 1.0;
    if (r >= 2.0 * r_plateau) return 0.0;
    return 1.0 - smoothstep5((r - r_plateau) / r_plateau);
}

double cutoff_d1(double r, double r_plateau) {
    if (r <= r_plateau || r >= 2.0 * r_plateau) return 0.0;
    return -smoothstep5_d1((r - r_plateau) / r_plateau) / r_plateau;
}

double cutoff_d2(double r, double r_plateau) {
    if (r <= r_plateau || r >= 2.0 * r_plateau) return 0.0;
    return -smoothstep5_d2((r - r_plateau) / r_plateau) / (r_plateau * r_plateau);
}

namespace {

double correction_source(double s, double alpha, double r_delta) {
    if (r_delta <= 0.0) return 0.0;
    return alpha * (2.0 - alpha) * std::pow(1.0 + s * s, -0.5 * (2.0 + alpha)) * cutoff(s, r_delta);
}

// Kernel growth of the radial inverse Laplacian: max-kernel per dimension.
double radial_kernel(int dim, double r) {
    if (dim == 1) return r;
    if (dim == 2) return std::log(r);
    return -std::pow(r, 2.0 - dim) / (dim - 2.0);
}

double radial_kernel_d1(int dim, double r) {
    return std::pow(r, 1.0 - dim);
}

}  // namespace

CorrectionTable::CorrectionTable(int dim, double alpha, double r_delta, double h,
                                 std::vector<double> v, std::vector<double> dv,
                                 double source_moment)
    : dim_(dim),
      alpha_(alpha),
      r_delta_(r_delta),
      h_(h),
      v_(std::move(v)),
      dv_(std::move(dv)),
      source_moment_(source_moment),
      v_interp_(0.0, h, v_),
      dv_interp_(0.0, h, dv_) {}

double CorrectionTable::tail_value(double r) const {
    return source_moment_ * radial_kernel(dim_, r);
}

double CorrectionTable::tail_derivative(double r) const {
    return source_moment_ * radial_kernel_d1(dim_, r);
}

double CorrectionTable::value(double r) const {
    if (!(r >= 0.0)) throw std::out_of_range("CorrectionTable::value: r must be >= 0");
    if (r <= table_end()) return v_interp_(r);
    return tail_value(r);
}

double CorrectionTable::derivative(double r) const {
    if (!(r >= 0.0)) throw std::out_of_range("CorrectionTable::derivative: r must be >= 0");
    if (r <= table_end()) return dv_interp_(r);
    return tail_derivative(r);
}

CorrectionTable newton_correction(int dim, double alpha, double r_delta, double r_max,
                                  double h_target) {
    if (dim < 1) throw std::invalid_argument("newton_correction: dim must be >= 1");
    if (!(alpha < 0.0)) throw std::invalid_argument("newton_correction: requires alpha < 0");
    if (r_delta > 0.0 && !(r_max > 2.0 * r_delta))
        throw std::invalid_argument("newton_correction: r_max must exceed the source support 2*r_delta");
    if (!(r_max > 0.0)) throw std::invalid_argument("newton_correction: r_max must be > 0");

    // Spacing chosen so the cutoff knots r_delta and 2*r_delta land on nodes.
    double h;
    if (r_delta > 0.0) {
        const long long m = std::max<long long>(512, static_cast<long long>(std::ceil(r_delta / h_target / 2.0)) * 2);
        h = r_delta / static_cast<double>(m);
    } else {
        h = h_target;
    }
    const long long n_nodes = static_cast<long long>(std::ceil(r_max / h)) + 1;
    const std::size_t n = static_cast<std::size_t>(std::min<long long>(n_nodes, 8'000'001));

    std::vector<double> f(n), fw(n), g(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double s = h * static_cast<double>(j);
        f[j] = correction_source(s, alpha, r_delta);
        fw[j] = f[j] * std::pow(s, dim - 1);
        // kernel-weighted source; its full integral is the value at the origin
        if (j == 0) {
            g[j] = 0.0;
        } else {
            g[j] = radial_kernel(dim, s) * fw[j];
        }
    }

    const std::vector<double> inner = cumulative_integral_uniform(fw, h);  // int_0^r f s^{N-1}
    const double v_origin = cumulative_integral_uniform(g, h).back();
    const double q = inner.back();

    // v' = r^{1-N} * inner is smooth through the origin for every dimension,
    // so one further integration gives clean second differences of v.
    std::vector<double> dv(n);
    dv[0] = 0.0;
    for (std::size_t j = 1; j < n; ++j) {
        const double r = h * static_cast<double>(j);
        dv[j] = std::pow(r, 1.0 - dim) * inner[j];
    }
    std::vector<double> v = cumulative_integral_uniform(dv, h);
    for (double& x : v) x += v_origin;
    return CorrectionTable(dim, alpha, r_delta, h, std::move(v), std::move(dv), q);
}

double weight_amplitude(double a0, double alpha, double delta) {
    if (!(a0 > 0.0)) throw std::invalid_argument("weight_amplitude: requires a0 > 0");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("weight_amplitude: requires delta in (0, 1)");
    return a0 / ((2.0 - alpha) * (2.0 - alpha) * (2.0 + delta));
}

WeightParams make_weight_params(const DampingSpec& spec, int dim, double delta0,
                                double R_delta, double A0) {
    if (dim < 1) throw std::invalid_argument("make_weight_params: dim must be >= 1");
    if (!(spec.alpha < 0.0)) throw std::invalid_argument("make_weight_params: requires alpha < 0");
    if (!(spec.a0 > 0.0)) throw std::invalid_argument("make_weight_params: requires a0 > 0");
    const double n_minus_a = static_cast<double>(dim) - spec.alpha;
    const double two_minus_a = 2.0 - spec.alpha;
    const double lam = n_minus_a / two_minus_a;
    if (!(delta0 > 0.0 && delta0 < lam))
        throw std::invalid_argument("make_weight_params: delta0 must lie in (0, (N-alpha)/(2-alpha))");

    WeightParams p;
    p.dim = dim;
    p.a0 = spec.a0;
    p.alpha = spec.alpha;
    p.delta0 = delta0;
    p.delta = delta0 * two_minus_a / (2.0 * n_minus_a);
    p.mu = weight_amplitude(spec.a0, spec.alpha, p.delta);
    p.delta1 = 2.0 / 3.0 * p.delta;
    p.delta2 = p.delta * n_minus_a / (2.0 * two_minus_a);
    p.delta3 = 1.0 - (2.0 + p.delta1) / (2.0 + p.delta);  // largest admissible
    p.delta4 = p.delta1 - 0.5 * p.delta - 0.25 * p.delta * p.delta1;
    p.delta5 = p.delta4 / (4.0 + p.delta4);
    p.delta6 = 0.5 * p.delta2;
    p.nu = 0.5 * p.delta5 / (lam + 1.0 - delta0);
    const double c6 = (lam - delta0) * (lam - delta0) / (4.0 * p.delta6);
    const double m = p.nu * spec.a0 / 16.0;
    double t0 = 1.0;
    t0 = std::max(t0, 8.0 / spec.a0 * (lam + 1.0 - delta0));
    t0 = std::max(t0, 2.0 / (p.nu * spec.a0));
    t0 = std::max(t0, 16.0 / (p.delta * p.nu * spec.a0));
    t0 = std::max(t0, (1.0 + std::sqrt(1.0 + 4.0 * m * c6)) / (2.0 * m));
    p.t0 = t0;
    p.A0 = A0;
    p.R_delta = R_delta;
    if (!(p.delta4 > 0.0)) throw std::invalid_argument("make_weight_params: ladder constant delta4 not positive");
    return p;
}

WeightFunction::WeightFunction(DampingSpec spec, WeightParams params, CorrectionTable table)
    : spec_(spec), params_(params), table_(std::move(table)) {}

double WeightFunction::bracket(double r) const {
    return std::pow(1.0 + r * r, 0.5 * (2.0 - params_.alpha)) + params_.A0 - table_.value(r);
}

double WeightFunction::bracket_derivative(double r) const {
    const double two_minus_a = 2.0 - params_.alpha;
    return two_minus_a * r * std::pow(1.0 + r * r, -0.5 * params_.alpha) - table_.derivative(r);
}

double WeightFunction::value(double t, double r) const {
    return params_.mu * bracket(r) / (1.0 + t);
}

double WeightFunction::dt(double t, double r) const {
    return -value(t, r) / (1.0 + t);
}

double WeightFunction::dr(double t, double r) const {
    return params_.mu * bracket_derivative(r) / (1.0 + t);
}

double WeightFunction::laplacian(double t, double r) const {
    const double a = params_.alpha;
    const double bracket_lap = (params_.dim - a) * (2.0 - a) * std::pow(1.0 + r * r, -0.5 * a) +
                               a * (2.0 - a) * std::pow(1.0 + r * r, -0.5 * (2.0 + a)) *
                                   (1.0 - cutoff(r, params_.R_delta));
    return params_.mu * bracket_lap / (1.0 + t);
}

void WeightFunction::check_scaled(double b) {
    if (!(b > -1.0 && b <= 1.0))
        throw std::invalid_argument("WeightFunction: scaled family requires b in (-1, 1]");
}

double WeightFunction::value_scaled(double b, double t, double r) const {
    check_scaled(b);
    return params_.mu * bracket(r) * (1.0 + b) * std::pow(1.0 + t, -(1.0 + b));
}

double WeightFunction::dt_scaled(double b, double t, double r) const {
    check_scaled(b);
    return -(1.0 + b) / (1.0 + t) * value_scaled(b, t, r);
}

double WeightFunction::dr_scaled(double b, double t, double r) const {
    check_scaled(b);
    return params_.mu * bracket_derivative(r) * (1.0 + b) * std::pow(1.0 + t, -(1.0 + b));
}

double WeightFunction::laplacian_scaled(double b, double t, double r) const {
    check_scaled(b);
    return (1.0 + b) * std::pow(1.0 + t, -b) * laplacian(t, r);
}

CalibrationGrid CalibrationGrid::standard(double r_max, double t_max, int n_r, int n_t, double r_min) {
    if (n_r < 2 || n_t < 1) throw std::invalid_argument("CalibrationGrid: too few nodes");
    CalibrationGrid g;
    g.radii.resize(n_r);
    g.radii[0] = 0.0;
    const double ratio = std::pow(r_max / r_min, 1.0 / (n_r - 2));
    for (int j = 1; j < n_r; ++j) g.radii[j] = r_min * std::pow(ratio, j - 1);
    g.radii.back() = r_max;
    g.times.resize(n_t);
    for (int i = 0; i < n_t; ++i)
        g.times[i] = (n_t == 1) ? 0.0 : t_max * static_cast<double>(i) / (n_t - 1);
    return g;
}

MarginReport weight_margins(const WeightFunction& w, const CalibrationGrid& grid) {
    const WeightParams& p = w.params();
    const double rate = (p.dim - p.alpha) / (2.0 * (2.0 - p.alpha));
    MarginReport rep;
    bool first = true;
    for (double t : grid.times) {
        for (double r : grid.radii) {
            const double a = w.damping().spatial_factor(r);
            const double md = -w.dt(t, r) * a - (2.0 + p.delta1) * w.dr(t, r) * w.dr(t, r);
            const double ml = w.laplacian(t, r) - (rate - p.delta2) * a / (1.0 + t);
            const double br = w.bracket(r);
            if (first || md < rep.min_margin_damping) {
                rep.min_margin_damping = md;
                rep.argmin_damping_t = t;
                rep.argmin_damping_r = r;
            }
            if (first || ml < rep.min_margin_laplacian) {
                rep.min_margin_laplacian = ml;
                rep.argmin_laplacian_t = t;
                rep.argmin_laplacian_r = r;
            }
            if (first || br < rep.min_bracket) rep.min_bracket = br;
            first = false;
        }
    }
    return rep;
}

MarginReport weight_margins_scaled(const WeightFunction& w, double b, const CalibrationGrid& grid) {
    const WeightParams& p = w.params();
    const double rate = (p.dim - p.alpha) * (1.0 + b) / (2.0 * (2.0 - p.alpha));
    const double delta2_b = p.delta * (p.dim - p.alpha) * (1.0 + b) / (2.0 * (2.0 - p.alpha));
    DampingSpec spec = w.damping();
    spec.beta = b;
    MarginReport rep;
    bool first = true;
    for (double t : grid.times) {
        for (double r : grid.radii) {
            const double c = spec.coefficient(t, r);
            const double md =
                -w.dt_scaled(b, t, r) * c - (2.0 + p.delta1) * w.dr_scaled(b, t, r) * w.dr_scaled(b, t, r);
            const double ml = w.laplacian_scaled(b, t, r) - (rate - delta2_b) * c / (1.0 + t);
            const double br = w.bracket(r);
            if (first || md < rep.min_margin_damping) {
                rep.min_margin_damping = md;
                rep.argmin_damping_t = t;
                rep.argmin_damping_r = r;
            }
            if (first || ml < rep.min_margin_laplacian) {
                rep.min_margin_laplacian = ml;
                rep.argmin_laplacian_t = t;
                rep.argmin_laplacian_r = r;
            }
            if (first || br < rep.min_bracket) rep.min_bracket = br;
            first = false;
        }
    }
    return rep;
}

CalibrationResult calibrate_weight(const DampingSpec& spec, int dim, double delta0,
                                   const CalibrationGrid& grid, int max_doublings) {
    double r_delta = 2.0 * std::max(1.0, std::fabs(spec.alpha));
    int r_doublings = 0;
    CorrectionTable table;
    bool laplacian_ok = false;
    MarginReport last;
    for (; r_doublings <= max_doublings; ++r_doublings) {
        // table over the source support; the exact kernel tail covers the rest
        table = newton_correction(dim, spec.alpha, r_delta, 2.75 * r_delta);
        WeightParams params = make_weight_params(spec, dim, delta0, r_delta, 1.0);
        WeightFunction w(spec, params, table);
        last = weight_margins(w, grid);
        if (last.min_margin_laplacian >= 0.0) {
            laplacian_ok = true;
            break;
        }
        r_delta *= 2.0;
    }
    if (!laplacian_ok) {
        std::ostringstream msg;
        msg << "calibrate_weight: Laplacian margin still " << last.min_margin_laplacian
            << " at (t=" << last.argmin_laplacian_t << ", r=" << last.argmin_laplacian_r
            << ") after " << max_doublings << " doublings of R_delta";
        throw CalibrationError(msg.str());
    }

    double a0_const = 1.0;
    for (int a_doublings = 0; a_doublings <= max_doublings; ++a_doublings) {
        WeightParams params = make_weight_params(spec, dim, delta0, r_delta, a0_const);
        WeightFunction w(spec, params, table);
        MarginReport rep = weight_margins(w, grid);
        if (rep.min_margin_damping >= 0.0 && rep.min_bracket > 0.0)
            return CalibrationResult{std::move(w), rep, r_doublings, a_doublings};
        last = rep;
        a0_const *= 2.0;
    }
    std::ostringstream msg;
    msg << "calibrate_weight: damping margin still " << last.min_margin_damping
        << " at (t=" << last.argmin_damping_t << ", r=" << last.argmin_damping_r
        << ") after " << max_doublings << " doublings of A0";
    throw CalibrationError(msg.str());
}

}  // namespace critwave

#include "critwave/inequalities.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

namespace critwave {

namespace {

constexpr int kEntryNodes = 4096;

CorpusEntry sample_entry(int dim, double support, double grid_end, int n,
                         const std::function<double(double)>& f,
                         const std::function<double(double)>& df, std::string label) {
    CorpusEntry e;
    e.dim = dim;
    e.support = support;
    e.h = grid_end / (n - 1);
    e.u.resize(n);
    e.du.resize(n);
    for (int j = 0; j < n; ++j) {
        const double r = e.h * j;
        e.u[j] = f(r);
        e.du[j] = df(r);
    }
    e.label = std::move(label);
    return e;
}

double bump_value(double r, double radius) {
    const double s = r / radius;
    if (s >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

double bump_derivative(double r, double radius) {
    const double s = r / radius;
    if (s >= 1.0) return 0.0;
    const double q = 1.0 - s * s;
    return bump_value(r, radius) * (-2.0 * s / (q * q)) / radius;
}

// Annular plateau: rises on [ra, rb], flat on [rb, rc], falls on [rc, rd].
struct Annulus {
    double ra, rb, rc, rd, amp;
    double value(double r) const {
        if (r <= ra || r >= rd) return 0.0;
        if (r < rb) return amp * smoothstep5((r - ra) / (rb - ra));
        if (r <= rc) return amp;
        return amp * (1.0 - smoothstep5((r - rc) / (rd - rc)));
    }
    double derivative(double r) const {
        if (r <= ra || r >= rd) return 0.0;
        if (r < rb) return amp * smoothstep5_d1((r - ra) / (rb - ra)) / (rb - ra);
        if (r <= rc) return 0.0;
        return -amp * smoothstep5_d1((r - rc) / (rd - rc)) / (rd - rc);
    }
};

}  // namespace

TestFunctionCorpus make_corpus(int dim, int count, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("make_corpus: dim must be >= 1");
    if (count < 1) throw std::invalid_argument("make_corpus: count must be >= 1");
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(dim));
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    TestFunctionCorpus corpus;
    corpus.dim = dim;
    corpus.entries.reserve(count);
    for (int i = 0; i < count; ++i) {
        const int family = i % 3;
        const double amp = 0.5 + 1.5 * uni(rng);
        const double radius = 0.5 + 2.0 * uni(rng);
        // compact support makes truncation at the support radius exact; all
        // quadrature nodes stay inside it
        const double grid_end = radius;
        if (family == 0) {
            corpus.entries.push_back(sample_entry(
                dim, radius, grid_end, kEntryNodes,
                [=](double r) { return amp * bump_value(r, radius); },
                [=](double r) { return amp * bump_derivative(r, radius); }, "bump" + std::to_string(i)));
        } else if (family == 1) {
            Annulus a;
            a.amp = amp;
            a.ra = (0.05 + 0.25 * uni(rng)) * radius;
            a.rb = a.ra + (0.15 + 0.25 * uni(rng)) * (radius - a.ra);
            a.rc = a.rb + (0.2 + 0.4 * uni(rng)) * (radius - a.rb);
            a.rd = radius;
            corpus.entries.push_back(sample_entry(
                dim, radius, grid_end, kEntryNodes, [=](double r) { return a.value(r); },
                [=](double r) { return a.derivative(r); }, "plateau" + std::to_string(i)));
        } else {
            const double m = (3.0 + 6.0 * uni(rng)) / radius;
            corpus.entries.push_back(sample_entry(
                dim, radius, grid_end, kEntryNodes,
                [=](double r) { return amp * std::sin(m * r) * bump_value(r, radius); },
                [=](double r) {
                    return amp * (m * std::cos(m * r) * bump_value(r, radius) +
                                  std::sin(m * r) * bump_derivative(r, radius));
                },
                "osc" + std::to_string(i)));
        }
    }
    return corpus;
}

CorpusEntry make_truncated_gaussian(int dim) {
    const double r_cut = 4.0;
    return sample_entry(
        dim, 2.0 * r_cut, 2.0 * r_cut, 8192,
        [=](double r) { return std::exp(-0.5 * r * r) * cutoff(r, r_cut); },
        [=](double r) {
            return std::exp(-0.5 * r * r) * (cutoff_d1(r, r_cut) - r * cutoff(r, r_cut));
        },
        "gaussian");
}

CorpusEntry dilate(const CorpusEntry& entry, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("dilate: lambda must be > 0");
    CorpusEntry out = entry;
    out.support = entry.support / lambda;
    out.h = entry.h / lambda;
    for (double& d : out.du) d *= lambda;
    return out;
}

CorpusEntry scale(const CorpusEntry& entry, double factor) {
    CorpusEntry out = entry;
    for (double& v : out.u) v *= factor;
    for (double& d : out.du) d *= factor;
    return out;
}

double lp_norm(const CorpusEntry& entry, double q) {
    const double area = sphere_area(entry.dim);
    std::vector<double> f(entry.u.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double r = entry.h * static_cast<double>(j);
        f[j] = std::pow(std::fabs(entry.u[j]), q) * std::pow(r, entry.dim - 1);
    }
    return std::pow(area * simpson_uniform(f, entry.h), 1.0 / q);
}

double grad_l2_norm(const CorpusEntry& entry) {
    const double area = sphere_area(entry.dim);
    std::vector<double> f(entry.du.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double r = entry.h * static_cast<double>(j);
        f[j] = entry.du[j] * entry.du[j] * std::pow(r, entry.dim - 1);
    }
    return std::sqrt(area * simpson_uniform(f, entry.h));
}

double moment_l2_norm(const CorpusEntry& entry, double gamma) {
    const double area = sphere_area(entry.dim);
    std::vector<double> f(entry.u.size());
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double r = entry.h * static_cast<double>(j);
        f[j] = std::pow(r, 2.0 * gamma) * entry.u[j] * entry.u[j] * std::pow(r, entry.dim - 1);
    }
    return std::sqrt(area * simpson_uniform(f, entry.h));
}

double gn_ratio(const CorpusEntry& entry, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("gn_ratio: requires p >= 1");
    if (entry.dim >= 3 && p > (entry.dim + 2.0) / (entry.dim - 2.0))
        throw std::invalid_argument("gn_ratio: p outside the admissible range for this dimension");
    const double theta = entry.dim * (p - 1.0) / (2.0 * (p + 1.0));
    const double l2 = lp_norm(entry, 2.0);
    const double g = grad_l2_norm(entry);
    if (l2 == 0.0 || g == 0.0) throw std::invalid_argument("gn_ratio: zero-norm entry");
    return lp_norm(entry, p + 1.0) / (std::pow(g, theta) * std::pow(l2, 1.0 - theta));
}

double ckn_ratio(const CorpusEntry& entry, int k) {
    if (k < 1) throw std::invalid_argument("ckn_ratio: requires k >= 1");
    const double expo = std::exp2(static_cast<double>(-k));  // 1/2^k
    const double l2 = lp_norm(entry, 2.0);
    const double g = grad_l2_norm(entry);
    const double mom = moment_l2_norm(entry, std::exp2(static_cast<double>(k)) - 1.0);
    if (l2 == 0.0 || g == 0.0 || mom == 0.0) throw std::invalid_argument("ckn_ratio: zero-norm entry");
    return l2 / (std::pow(g, 1.0 - expo) * std::pow(mom, expo));
}

double gamma_step_ratio(const CorpusEntry& entry, double gamma) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("gamma_step_ratio: requires gamma >= 0");
    const double num = moment_l2_norm(entry, 0.5 * gamma);
    const double g = grad_l2_norm(entry);
    const double mom = moment_l2_norm(entry, gamma + 1.0);
    if (g == 0.0 || mom == 0.0) throw std::invalid_argument("gamma_step_ratio: zero-norm entry");
    return num * num / (g * mom);
}

double gamma_step_identity_residual(const CorpusEntry& entry, double gamma) {
    const double area = sphere_area(entry.dim);
    const std::size_t n = entry.u.size();
    std::vector<double> lhs(n), rhs(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double r = entry.h * static_cast<double>(j);
        const double w = std::pow(r, gamma + entry.dim - 1.0);
        lhs[j] = (entry.dim + gamma) * w * entry.u[j] * entry.u[j];
        rhs[j] = -2.0 * w * r * entry.u[j] * entry.du[j];
    }
    const double i1 = area * simpson_uniform(lhs, entry.h);
    const double i2 = area * simpson_uniform(rhs, entry.h);
    const double scale = std::max(std::fabs(i1), std::fabs(i2));
    if (scale == 0.0) return 0.0;
    return std::fabs(i1 - i2) / scale;
}

WeightedInterpolationResult weighted_interpolation_check(const CorpusEntry& entry,
                                                         const WeightFunction& weight, double t,
                                                         double p, int k) {
    const double alpha = weight.params().alpha;
    if (std::exp2(static_cast<double>(k)) - 1.0 < -0.5 * alpha)
        throw std::invalid_argument("weighted_interpolation_check: k too small for this alpha");
    const double theta = entry.dim * (p - 1.0) / (2.0 * (p + 1.0));
    const double area = sphere_area(entry.dim);
    const std::size_t n = entry.u.size();

    std::vector<double> f_lhs(n), f_au(n), f_grad(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double r = entry.h * static_cast<double>(j);
        const double rw = std::pow(r, entry.dim - 1);
        const double psi = weight.value(t, r);
        const double a = weight.damping().spatial_factor(r);
        f_lhs[j] = std::exp(2.0 * psi) * std::pow(std::fabs(entry.u[j]), p + 1.0) * rw;
        f_au[j] = std::exp(2.0 * psi) * a * entry.u[j] * entry.u[j] * rw;
        f_grad[j] = std::exp(2.0 * psi) * entry.du[j] * entry.du[j] * rw;
    }
    WeightedInterpolationResult out;
    out.lhs = std::pow(area * simpson_uniform(f_lhs, entry.h), 1.0 / (p + 1.0));
    const double norm_au = std::sqrt(area * simpson_uniform(f_au, entry.h));
    const double norm_grad = std::sqrt(area * simpson_uniform(f_grad, entry.h));
    const double combo = std::pow(1.0 + t, -0.5) * norm_au + norm_grad;
    const double tpow = (std::exp2(static_cast<double>(k)) - 1.0 + 0.5 * alpha) / (2.0 - alpha);
    const double second = std::pow(1.0 + t, tpow) * norm_au;
    const double inv2k = std::exp2(static_cast<double>(-k));
    out.rhs_shape = std::pow(combo, theta + (1.0 - inv2k) * (1.0 - theta)) *
                    std::pow(second, (1.0 - theta) * inv2k);
    return out;
}

double pointwise_gradient_weight_bound(const WeightFunction& weight, double t, double p,
                                       const std::vector<double>& radii) {
    double sup = 0.0;
    for (double r : radii) {
        const double psi = weight.value(t, r);
        const double grad = std::fabs(weight.dr(t, r));
        const double a = weight.damping().spatial_factor(r);
        const double num = grad * std::exp(2.0 * psi / (p + 1.0));
        const double den = std::pow(1.0 + t, -0.5) * std::exp(psi) * std::sqrt(a);
        if (den > 0.0) sup = std::max(sup, num / den);
    }
    return sup;
}

}  // namespace critwave

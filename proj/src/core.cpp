#include "critwave/core.hpp"

#include <stdexcept>

#include "critwave/numerics.hpp"

namespace critwave {

double damping_coefficient(const DampingSpec& spec, double t, double r) {
    if (!(t >= 0.0) || !(r >= 0.0))
        throw std::invalid_argument("damping_coefficient: requires t >= 0 and r >= 0");
    return spec.coefficient(t, r);
}

ProfileShape profile_shape_from_string(const std::string& name) {
    if (name == "zero") return ProfileShape::Zero;
    if (name == "bump") return ProfileShape::Bump;
    if (name == "cosine") return ProfileShape::Cosine;
    if (name == "plateau") return ProfileShape::Plateau;
    throw std::invalid_argument("unknown profile shape: " + name);
}

std::string to_string(ProfileShape shape) {
    switch (shape) {
        case ProfileShape::Zero: return "zero";
        case ProfileShape::Bump: return "bump";
        case ProfileShape::Cosine: return "cosine";
        case ProfileShape::Plateau: return "plateau";
    }
    return "unknown";
}

double RadialProfile::value(double r) const {
    if (shape == ProfileShape::Zero) return 0.0;
    const double s = r / radius;
    if (s >= 1.0) return 0.0;
    switch (shape) {
        case ProfileShape::Bump:
            return amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s));
        case ProfileShape::Cosine:
            return 0.5 * amplitude * (1.0 + std::cos(M_PI * s));
        case ProfileShape::Plateau:
            if (s <= 0.5) return amplitude;
            return amplitude * (1.0 - smoothstep5(2.0 * s - 1.0));
        default:
            return 0.0;
    }
}

double RadialProfile::derivative(double r) const {
    if (shape == ProfileShape::Zero) return 0.0;
    const double s = r / radius;
    if (s >= 1.0) return 0.0;
    switch (shape) {
        case ProfileShape::Bump: {
            const double q = 1.0 - s * s;
            return value(r) * (-2.0 * s / (q * q)) / radius;
        }
        case ProfileShape::Cosine:
            return -0.5 * amplitude * M_PI * std::sin(M_PI * s) / radius;
        case ProfileShape::Plateau:
            if (s <= 0.5) return 0.0;
            return -amplitude * smoothstep5_d1(2.0 * s - 1.0) * 2.0 / radius;
        default:
            return 0.0;
    }
}

double RadialProfile::integral_unit() const {
    RadialProfile unit{shape, 1.0, 1.0};
    const int n = 4097;
    std::vector<double> f(n);
    const double h = 1.0 / (n - 1);
    for (int i = 0; i < n; ++i) f[i] = unit.value(i * h);
    return simpson_uniform(f, h);
}

std::vector<std::string> validate_problem(const ProblemSpec& prob) {
    std::vector<std::string> warnings;
    if (prob.dim < 1) throw std::invalid_argument("ProblemSpec: dim must be >= 1");
    if (!(prob.p > 1.0)) throw std::invalid_argument("ProblemSpec: p must be > 1");
    if (!(prob.epsilon >= 0.0)) throw std::invalid_argument("ProblemSpec: epsilon must be >= 0");
    if (!(prob.support_radius > 0.0)) throw std::invalid_argument("ProblemSpec: support_radius must be > 0");
    if (prob.u0.radius > prob.support_radius || prob.u1.radius > prob.support_radius)
        throw std::invalid_argument("ProblemSpec: profiles must vanish for r >= support_radius");
    if (prob.dim >= 3) {
        const double p_max = static_cast<double>(prob.dim) / (prob.dim - 2);
        if (prob.p > p_max)
            warnings.push_back("p exceeds the guaranteed local-existence window p <= N/(N-2)");
    }
    return warnings;
}

double critical_exponent(int dim, double alpha) {
    if (dim < 1) throw std::invalid_argument("critical_exponent: dim must be >= 1");
    if (!(alpha < static_cast<double>(dim)))
        throw std::invalid_argument("critical_exponent: requires alpha < dim");
    return 1.0 + 2.0 / (static_cast<double>(dim) - alpha);
}

LifespanExponent lifespan_exponent(const DampingSpec& spec, const ProblemSpec& prob) {
    const double pc = critical_exponent(prob.dim, spec.alpha);
    if (!(prob.p > 1.0)) throw std::invalid_argument("lifespan_exponent: requires p > 1");
    if (prob.p > pc)
        throw std::invalid_argument("lifespan_exponent: no bound asserted for p above the critical exponent");
    if (prob.p == pc) return {LifespanClass::Critical, prob.p - 1.0};
    const double inv = 1.0 / (prob.p - 1.0) - 0.5 * (static_cast<double>(prob.dim) - spec.alpha);
    const double kappa = (2.0 - spec.alpha) / (2.0 * (1.0 + spec.beta)) / inv;
    return {LifespanClass::Subcritical, kappa};
}

double initial_mass_functional(const DampingSpec& spec, const ProblemSpec& prob, int n_nodes) {
    if (n_nodes < 3) throw std::invalid_argument("initial_mass_functional: too few nodes");
    const double r_max = prob.support_radius;
    const double h = r_max / (n_nodes - 1);
    const double area = sphere_area(prob.dim);
    std::vector<double> f(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
        const double r = i * h;
        const double weight = spec.a0 * std::pow(1.0 + r * r, -0.5 * spec.alpha) - spec.beta;
        const double integrand = prob.u1.value(r) + weight * prob.u0.value(r);
        f[i] = integrand * std::pow(r, prob.dim - 1);
    }
    return area * simpson_uniform(f, h);
}

}  // namespace critwave

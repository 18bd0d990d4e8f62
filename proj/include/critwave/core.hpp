#ifndef CRITWAVE_CORE_HPP
#define CRITWAVE_CORE_HPP

#include <cmath>
#include <string>
#include <vector>

namespace critwave {

// Damping coefficient c(t,x) = a0 * <x>^{-alpha} * (1+t)^{-beta},
// <x> = sqrt(1+|x|^2). alpha < 0 makes the coefficient grow in space.
struct DampingSpec {
    double a0 = 1.0;
    double alpha = -1.0;
    double beta = 0.0;

    double spatial_factor(double r) const { return a0 * std::pow(1.0 + r * r, -0.5 * alpha); }
    double temporal_factor(double t) const { return std::pow(1.0 + t, -beta); }
    double coefficient(double t, double r) const { return spatial_factor(r) * temporal_factor(t); }

    // max(beta, 0), the time power that enters the large-time damping floor
    double beta_plus() const { return beta > 0.0 ? beta : 0.0; }
};

double damping_coefficient(const DampingSpec& spec, double t, double r);

enum class ProfileShape { Zero, Bump, Cosine, Plateau };

ProfileShape profile_shape_from_string(const std::string& name);
std::string to_string(ProfileShape shape);

// Compactly supported radial profile; vanishes identically for r >= radius.
struct RadialProfile {
    ProfileShape shape = ProfileShape::Bump;
    double amplitude = 1.0;
    double radius = 1.0;

    double value(double r) const;
    double derivative(double r) const;
    double integral_unit() const;  // int_0^1 of the unit-amplitude shape (for reference)
};

struct ProblemSpec {
    int dim = 1;
    double p = 2.0;
    double epsilon = 0.1;
    RadialProfile u0{ProfileShape::Bump, 1.0, 1.0};
    RadialProfile u1{ProfileShape::Bump, 1.0, 1.0};
    double support_radius = 1.0;  // joint support bound for (u0, u1)
};

// Warnings for parameter choices outside the guaranteed local-existence window.
std::vector<std::string> validate_problem(const ProblemSpec& prob);

// 1 + 2/(dim - alpha); requires alpha < dim.
double critical_exponent(int dim, double alpha);

enum class LifespanClass { Subcritical, Critical };

struct LifespanExponent {
    LifespanClass kind;
    // Subcritical: T(eps) <~ eps^{-value}. Critical: T(eps) <~ exp(C eps^{-value}).
    double value;
};

LifespanExponent lifespan_exponent(const DampingSpec& spec, const ProblemSpec& prob);

// int_{R^N} ( u1 + (a0 <x>^{-alpha} - beta) u0 ) dx by radial composite
// Simpson with the surface-measure factor. Positivity gates the blow-up
// experiments.
double initial_mass_functional(const DampingSpec& spec, const ProblemSpec& prob, int n_nodes = 8193);

}  // namespace critwave

#endif

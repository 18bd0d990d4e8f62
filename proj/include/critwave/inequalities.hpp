#ifndef CRITWAVE_INEQUALITIES_HPP
#define CRITWAVE_INEQUALITIES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "critwave/weight.hpp"

namespace critwave {

// Compactly supported radial test function sampled (value and derivative)
// on a uniform quadrature grid.
struct CorpusEntry {
    int dim = 1;
    double support = 1.0;
    double h = 1.0;
    std::vector<double> u, du;
    std::string label;

    double grid_end() const { return h * (static_cast<double>(u.size()) - 1.0); }
};

struct TestFunctionCorpus {
    int dim = 1;
    std::vector<CorpusEntry> entries;
};

// Deterministic mix of bumps, annular plateaus, and oscillatory bumps.
TestFunctionCorpus make_corpus(int dim, int count, std::uint64_t seed);

// exp(-r^2/2) smoothly truncated between r=4 and r=8.
CorpusEntry make_truncated_gaussian(int dim);

// u_lambda(x) = u(lambda x); reuses the samples exactly.
CorpusEntry dilate(const CorpusEntry& entry, double lambda);
CorpusEntry scale(const CorpusEntry& entry, double factor);

double lp_norm(const CorpusEntry& entry, double q);
double grad_l2_norm(const CorpusEntry& entry);
double moment_l2_norm(const CorpusEntry& entry, double gamma);  // || |x|^gamma u ||_2

// ||u||_{p+1} / (||grad u||_2^theta ||u||_2^{1-theta}), theta = N(p-1)/(2(p+1)).
double gn_ratio(const CorpusEntry& entry, double p);

// ||u||_2 / (||grad u||_2^{1-1/2^k} || |x|^{2^k-1} u ||_2^{1/2^k}).
double ckn_ratio(const CorpusEntry& entry, int k);

// || |x|^{gamma/2} u ||_2^2 / (||grad u||_2 || |x|^{gamma+1} u ||_2);
// gamma = 0 is the square of the k = 1 ratio.
double gamma_step_ratio(const CorpusEntry& entry, double gamma);

// Relative residual of the divergence identity
// int div(|x|^gamma x) u^2 = -2 int |x|^gamma (x . grad u) u,
// both sides by the entry's quadrature rule.
double gamma_step_identity_residual(const CorpusEntry& entry, double gamma);

struct WeightedInterpolationResult {
    double lhs = 0.0;
    double rhs_shape = 0.0;
};

// Lhs/rhs shape of the weighted interpolation estimate at time t; the
// testable content is boundedness of lhs/rhs_shape over t.
WeightedInterpolationResult weighted_interpolation_check(const CorpusEntry& entry,
                                                         const WeightFunction& weight, double t,
                                                         double p, int k);

// Grid maximum of |psi_r| e^{2 psi/(p+1)} / ((1+t)^{-1/2} e^psi sqrt(a)).
double pointwise_gradient_weight_bound(const WeightFunction& weight, double t, double p,
                                       const std::vector<double>& radii);

}  // namespace critwave

#endif

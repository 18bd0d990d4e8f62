#ifndef CRITWAVE_TESTS_ORACLES_HPP
#define CRITWAVE_TESTS_ORACLES_HPP

// Test-only reference integrators, independent of the library quadrature.

#include <cmath>
#include <functional>

namespace oracles {

inline double simpson_on(const std::function<double(double)>& f, double a, double b) {
    return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = simpson_on(f, a, m);
    const double right = simpson_on(f, m, b);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson quadrature to absolute tolerance tol.
inline double adaptive_quadrature(const std::function<double(double)>& f, double a, double b,
                                  double tol = 1e-12) {
    return adaptive_simpson_rec(f, a, b, simpson_on(f, a, b), tol, 48);
}

}  // namespace oracles

#endif

#ifndef CRITWAVE_NUMERICS_HPP
#define CRITWAVE_NUMERICS_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace critwave {

// Surface area of the unit sphere S^{N-1}; for N=1 this counts the two
// half-lines, so every radial integral below is over all of R^N.
inline double sphere_area(int dim) {
    if (dim < 1) throw std::invalid_argument("sphere_area: dim must be >= 1");
    return 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
}

// C^2 quintic smoothstep: 0 at x<=0, 1 at x>=1, zero first and second
// derivatives at both ends.
inline double smoothstep5(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

inline double smoothstep5_d1(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double y = x * (1.0 - x);
    return 30.0 * y * y;
}

inline double smoothstep5_d2(double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return 60.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
}

// |x|^p with cheap paths for the exponents that dominate the run time.
inline double abs_pow(double x, double p) {
    const double a = std::fabs(x);
    if (p == 2.0) return a * a;
    if (p == 1.5) return a * std::sqrt(a);
    if (p == 3.0) return a * a * a;
    if (p == 2.5) return a * a * std::sqrt(a);
    if (p == 1.0) return a;
    return std::pow(a, p);
}

// Composite Simpson on a uniform grid. Accepts odd interval counts by
// closing the last interval with a cubic (Simpson 3/8 on the tail).
inline double simpson_uniform(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (f[0] + f[1]);
    std::size_t m = n;
    double tail = 0.0;
    if (n % 2 == 0) {
        // 3/8 rule on the last three intervals, Simpson on the rest
        if (n >= 4) {
            tail = 3.0 * h / 8.0 * (f[n - 4] + 3.0 * f[n - 3] + 3.0 * f[n - 2] + f[n - 1]);
            m = n - 3;
        } else {
            return 0.5 * h * (f[0] + f[1]);
        }
    }
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i + 1 < m; i += 2) odd += f[i];
    for (std::size_t i = 2; i + 1 < m; i += 2) even += f[i];
    return h / 3.0 * (f[0] + 4.0 * odd + 2.0 * even + f[m - 1]) + tail;
}

// Cumulative integral F(x_j) = int_{x_0}^{x_j} f on a uniform grid,
// per-interval parabola through three neighbouring nodes (O(h^4) local).
inline std::vector<double> cumulative_integral_uniform(const std::vector<double>& f, double h) {
    const std::size_t n = f.size();
    std::vector<double> F(n, 0.0);
    if (n < 2) return F;
    if (n == 2) {
        F[1] = 0.5 * h * (f[0] + f[1]);
        return F;
    }
    F[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    for (std::size_t j = 1; j + 1 < n; ++j)
        F[j + 1] = F[j] + h / 12.0 * (-f[j - 1] + 8.0 * f[j] + 5.0 * f[j + 1]);
    return F;
}

// Monotone cubic (Fritsch-Carlson) interpolant on a uniform grid.
class MonotoneCubic {
public:
    MonotoneCubic() = default;

    MonotoneCubic(double x0, double h, std::vector<double> y) : x0_(x0), h_(h), y_(std::move(y)) {
        const std::size_t n = y_.size();
        if (n < 2 || h_ <= 0.0) throw std::invalid_argument("MonotoneCubic: need >= 2 nodes, h > 0");
        slope_.resize(n);
        std::vector<double> d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y_[i + 1] - y_[i]) / h_;
        slope_[0] = end_slope(d[0], n > 2 ? d[1] : d[0]);
        slope_[n - 1] = end_slope(d[n - 2], n > 2 ? d[n - 3] : d[n - 2]);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0)
                slope_[i] = 0.0;
            else
                slope_[i] = 2.0 * d[i - 1] * d[i] / (d[i - 1] + d[i]);
        }
    }

    double x_min() const { return x0_; }
    double x_max() const { return x0_ + h_ * (static_cast<double>(y_.size()) - 1.0); }

    double operator()(double x) const {
        const std::size_t n = y_.size();
        double s = (x - x0_) / h_;
        if (s <= 0.0) return y_[0] + slope_[0] * (x - x0_);
        if (s >= static_cast<double>(n - 1)) {
            const double dx = x - (x0_ + h_ * (static_cast<double>(n) - 1.0));
            return y_[n - 1] + slope_[n - 1] * dx;
        }
        std::size_t i = static_cast<std::size_t>(s);
        if (i >= n - 1) i = n - 2;
        const double t = s - static_cast<double>(i);
        const double u = 1.0 - t;
        const double h00 = u * u * (1.0 + 2.0 * t);
        const double h10 = u * u * t;
        const double h01 = t * t * (3.0 - 2.0 * t);
        const double h11 = -t * t * u;
        return h00 * y_[i] + h_ * h10 * slope_[i] + h01 * y_[i + 1] + h_ * h11 * slope_[i + 1];
    }

private:
    static double end_slope(double d0, double d1) {
        double m = 1.5 * d0 - 0.5 * d1;
        if (m * d0 <= 0.0) return 0.0;
        if (std::fabs(m) > 3.0 * std::fabs(d0)) return 3.0 * d0;
        return m;
    }

    double x0_ = 0.0;
    double h_ = 1.0;
    std::vector<double> y_;
    std::vector<double> slope_;
};

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Least-squares line through (x_i, y_i).
inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("linear_fit: need >= 2 matching points");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate abscissae");
    LinearFit out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    return out;
}

}  // namespace critwave

#endif

#pragma once

// Test-side oracles, independent of the library code they check: a standard
// normal quantile, analytic S_U quantiles, a constructor for samples whose
// interpolated percentiles are exact, finite differences, quadrature and
// sample moments.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double phi(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Acklam's rational approximation of Phi^{-1}, polished with two Halley
// steps against erfc; accurate to ~1e-15 over (0, 1).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p outside (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    for (int i = 0; i < 2; ++i) {
        const double e = phi(x) - p;
        const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
        x -= u / (1.0 + x * u / 2.0);
    }
    return x;
}

// x_p = xi + lambda * sinh((Phi^{-1}(p) - gamma) / delta)
inline double su_quantile(double p, double gamma, double delta, double lambda, double xi) {
    return xi + lambda * std::sinh((normal_quantile(p) - gamma) / delta);
}

// Sorted sample of size n whose linearly interpolated percentile at each
// percent P (rank (n-1)P/100) equals quantile(P/100) exactly. Sample i sits
// at level i/(n-1) so the rank interpolation is already first-order exact;
// the per-target nudge only has to absorb the quantile's curvature, which
// keeps it far smaller than the grid spacing. Endpoint levels are pulled
// inside (0,1) for distributions with unbounded support.
inline std::vector<double> exact_percentile_samples(int n,
                                                    const std::function<double(double)>& quantile,
                                                    std::vector<double> percents) {
    std::vector<double> s(static_cast<size_t>(n));
    const double h = 1.0 / (n - 1);
    for (int i = 0; i < n; ++i) {
        double p = i * h;
        if (i == 0) p = 0.25 * h;
        if (i == n - 1) p = 1.0 - 0.25 * h;
        s[static_cast<size_t>(i)] = quantile(p);
    }
    std::sort(percents.begin(), percents.end());
    for (double P : percents) {
        const double r = (n - 1) * P / 100.0;
        const auto k = static_cast<size_t>(r);
        const double t = r - static_cast<double>(k);
        const double target = quantile(P / 100.0);
        if (t < 1e-9) {
            s[k] = target;
        } else {
            s[k + 1] = (target - (1.0 - t) * s[k]) / t;
        }
    }
    if (!std::is_sorted(s.begin(), s.end()))
        throw std::logic_error("exact_percentile_samples: adjustment broke monotonicity");
    return s;
}

template <class F>
double central_diff(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

template <class F>
Eigen::VectorXd fd_gradient(F&& f, Eigen::VectorXd x, double h) {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        x[i] = xi + h;
        const double fp = f(x);
        x[i] = xi - h;
        const double fm = f(x);
        x[i] = xi;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

// Rows: components of f; columns: perturbed coordinates.
template <class F>
Eigen::MatrixXd fd_jacobian(F&& f, Eigen::VectorXd x, double h) {
    Eigen::VectorXd f0 = f(x);
    Eigen::MatrixXd J(f0.size(), x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double xj = x[j];
        x[j] = xj + h;
        const Eigen::VectorXd fp = f(x);
        x[j] = xj - h;
        const Eigen::VectorXd fm = f(x);
        x[j] = xj;
        J.col(j) = (fp - fm) / (2.0 * h);
    }
    return J;
}

template <class F>
double midpoint_integral(F&& f, double lo, double hi, int n) {
    const double h = (hi - lo) / n;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += f(lo + (i + 0.5) * h);
    return s * h;
}

inline double rel_err(double approx, double exact) {
    return std::abs(approx - exact) / std::max(std::abs(exact), 1e-300);
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

inline Moments sample_moments(const Eigen::VectorXd& v) {
    Moments m;
    const double n = static_cast<double>(v.size());
    m.mean = v.mean();
    const Eigen::ArrayXd c = v.array() - m.mean;
    const double m2 = c.square().sum() / n;
    const double m3 = c.cube().sum() / n;
    const double m4 = c.square().square().sum() / n;
    m.variance = m2;
    m.skewness = m3 / std::pow(m2, 1.5);
    m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    return m;
}

}  // namespace oracle

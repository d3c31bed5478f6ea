#pragma once

#include <Eigen/Core>
#include <span>
#include <string>

#include "jsnet/errors.hpp"

namespace jsnet {

// Translation family of the Johnson system. Each family maps its domain to
// the whole real line through a monotone function g:
//
//   SL  g(y) = ln y               y > 0        (log-normal)
//   SU  g(y) = asinh y            y real       (unbounded)
//   SB  g(y) = ln(y / (1 - y))    0 < y < 1    (bounded)
//   SN  g(y) = y                  y real       (normal)
enum class FamilyTag { SL, SU, SB, SN };

std::string to_string(FamilyTag family);
FamilyTag family_from_string(const std::string& name);

// g(y). Throws DomainError when y is outside the family's domain.
double g_eval(FamilyTag family, double y);

// dg/dy, strictly positive on the domain.
double g_prime(FamilyTag family, double y);

// g^{-1}(u), defined for all real u; g_inverse(f, g_eval(f, y)) == y.
double g_inverse(FamilyTag family, double u);

// Per-dimension translation parameters. Dimension i of an input x maps to
//
//   z_i = gamma_i + delta_i * g((x_i - xi_i) / lambda_i)
//
// and z is standard normal (per dimension) when x follows the fitted law.
struct JohnsonParams {
    FamilyTag family = FamilyTag::SU;
    Eigen::VectorXd gamma;   // shape
    Eigen::VectorXd delta;   // shape, > 0
    Eigen::VectorXd lambda;  // scale, > 0
    Eigen::VectorXd xi;      // location

    JohnsonParams() = default;
    // Validates equal sizes and positivity of delta/lambda (RangeError).
    JohnsonParams(FamilyTag family, Eigen::VectorXd gamma, Eigen::VectorXd delta,
                  Eigen::VectorXd lambda, Eigen::VectorXd xi);

    Eigen::Index dim() const { return gamma.size(); }
};

// Forward map x -> z, applied per dimension. Throws DomainError (with the
// offending dimension) when x is outside the family's support.
Eigen::VectorXd normalize_transform(const JohnsonParams& params, const Eigen::VectorXd& x);

// Inverse map z -> x; exact round trip up to floating-point error.
Eigen::VectorXd inverse_transform(const JohnsonParams& params, const Eigen::VectorXd& z);

// log |dz/dx| = sum_i [ log(delta_i / lambda_i) + log g'((x_i - xi_i) / lambda_i) ].
double jacobian_logdet(const JohnsonParams& params, const Eigen::VectorXd& x);

// One class-conditional density: translation parameters plus the Gaussian
// stage on z with covariance Sigma (stored as its precision).
struct ClassModel {
    JohnsonParams params;
    double prior = 1.0;
    Eigen::MatrixXd precision;  // Sigma^{-1}
    double logdet_sigma = 0.0;  // log det Sigma

    ClassModel() = default;
    // Checks symmetry and positive definiteness of `precision`
    // (FactorizationError) and derives logdet_sigma from it.
    ClassModel(JohnsonParams params, double prior, Eigen::MatrixXd precision);
};

// log p(x | class) = jacobian_logdet - (d/2) log 2pi - (1/2) logdet_sigma
//                    - (1/2) z^T Sigma^{-1} z,  z = normalize_transform(x).
double class_log_density(const ClassModel& model, const Eigen::VectorXd& x);

// Standard normal CDF (via erfc; accurate to ~1e-16 everywhere).
double normal_cdf(double z);

// P-th percentile of `samples`, P in (0, 100): sorts a copy and linearly
// interpolates at rank (N - 1) * P / 100.
double percentile(std::span<const double> samples, double P);

// The four symmetric percentiles used by the quantile-matching fit, taken at
// the normal deviates -3z, -z, +z, +3z, plus the spreads between them.
struct PercentileQuad {
    double x_m3z = 0.0;  // percentile at deviate -3z
    double x_mz = 0.0;   //                      -z
    double x_z = 0.0;    //                      +z
    double x_3z = 0.0;   //                      +3z
    double m = 0.0;      // upper tail spread  x_3z - x_z
    double n = 0.0;      // lower tail spread  x_mz - x_m3z
    double p = 0.0;      // central spread     x_z - x_mz
};

// Computes the quad in one sort. Requires z_param > 0 and samples nonempty.
PercentileQuad percentile_quad(std::span<const double> samples, double z_param);

// Result of a univariate fit. family is SU normally and SN when the lenient
// fallback was taken.
struct ScalarJohnson {
    FamilyTag family = FamilyTag::SU;
    double gamma = 0.0;
    double delta = 1.0;
    double lambda = 1.0;
    double xi = 0.0;
};

enum class PercentileMode { Strict, Lenient };

// Closed-form S_U parameters from a percentile quad. Throws DegenerateSpacing
// when p <= 0 and FamilyMismatch when m*n/p^2 <= 1 (the geometry then belongs
// to SB/SL/SN rather than SU).
ScalarJohnson su_from_quad(const PercentileQuad& quad, double z_param);

// Univariate percentile-method fit. Strict mode propagates FamilyMismatch;
// lenient mode falls back to SN with xi = sample mean, lambda = sample
// standard deviation (N-1 denominator), gamma = 0, delta = 1.
// Requires z_param > 0 and at least 20 samples. DegenerateSpacing is thrown
// in both modes.
ScalarJohnson fit_percentile(std::span<const double> samples, double z_param = 0.524,
                             PercentileMode mode = PercentileMode::Strict);

}  // namespace jsnet

#include "jsnet/johnson.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace jsnet {

std::string to_string(FamilyTag family) {
    switch (family) {
        case FamilyTag::SL: return "SL";
        case FamilyTag::SU: return "SU";
        case FamilyTag::SB: return "SB";
        case FamilyTag::SN: return "SN";
    }
    return "SU";
}

FamilyTag family_from_string(const std::string& name) {
    if (name == "SL") return FamilyTag::SL;
    if (name == "SU") return FamilyTag::SU;
    if (name == "SB") return FamilyTag::SB;
    if (name == "SN") return FamilyTag::SN;
    throw RangeError("unknown family tag: " + name);
}

double g_eval(FamilyTag family, double y) {
    switch (family) {
        case FamilyTag::SL:
            if (!(y > 0.0)) throw DomainError("SL", y);
            return std::log(y);
        case FamilyTag::SU:
            return std::asinh(y);
        case FamilyTag::SB:
            if (!(y > 0.0 && y < 1.0)) throw DomainError("SB", y);
            return std::log(y / (1.0 - y));
        case FamilyTag::SN:
            return y;
    }
    throw RangeError("invalid family tag");
}

double g_prime(FamilyTag family, double y) {
    switch (family) {
        case FamilyTag::SL:
            if (!(y > 0.0)) throw DomainError("SL", y);
            return 1.0 / y;
        case FamilyTag::SU:
            // hypot avoids overflow of y^2 + 1 for huge y
            return 1.0 / std::hypot(y, 1.0);
        case FamilyTag::SB:
            if (!(y > 0.0 && y < 1.0)) throw DomainError("SB", y);
            return 1.0 / (y * (1.0 - y));
        case FamilyTag::SN:
            return 1.0;
    }
    throw RangeError("invalid family tag");
}

double g_inverse(FamilyTag family, double u) {
    switch (family) {
        case FamilyTag::SL:
            return std::exp(u);
        case FamilyTag::SU:
            return std::sinh(u);
        case FamilyTag::SB:
            return 1.0 / (1.0 + std::exp(-u));
        case FamilyTag::SN:
            return u;
    }
    throw RangeError("invalid family tag");
}

JohnsonParams::JohnsonParams(FamilyTag family_, Eigen::VectorXd gamma_, Eigen::VectorXd delta_,
                             Eigen::VectorXd lambda_, Eigen::VectorXd xi_)
    : family(family_),
      gamma(std::move(gamma_)),
      delta(std::move(delta_)),
      lambda(std::move(lambda_)),
      xi(std::move(xi_)) {
    const Eigen::Index d = gamma.size();
    if (delta.size() != d || lambda.size() != d || xi.size() != d) {
        throw RangeError("JohnsonParams: parameter vectors differ in size");
    }
    for (Eigen::Index i = 0; i < d; ++i) {
        if (!(delta[i] > 0.0)) throw RangeError("JohnsonParams: delta must be > 0");
        if (!(lambda[i] > 0.0)) throw RangeError("JohnsonParams: lambda must be > 0");
    }
}

Eigen::VectorXd normalize_transform(const JohnsonParams& params, const Eigen::VectorXd& x) {
    const Eigen::Index d = params.dim();
    if (x.size() != d) throw RangeError("normalize_transform: x has wrong dimension");
    Eigen::VectorXd z(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double y = (x[i] - params.xi[i]) / params.lambda[i];
        try {
            z[i] = params.gamma[i] + params.delta[i] * g_eval(params.family, y);
        } catch (const DomainError& e) {
            throw DomainError(e.family(), x[i], static_cast<int>(i));
        }
    }
    return z;
}

Eigen::VectorXd inverse_transform(const JohnsonParams& params, const Eigen::VectorXd& z) {
    const Eigen::Index d = params.dim();
    if (z.size() != d) throw RangeError("inverse_transform: z has wrong dimension");
    Eigen::VectorXd x(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double u = (z[i] - params.gamma[i]) / params.delta[i];
        x[i] = params.xi[i] + params.lambda[i] * g_inverse(params.family, u);
    }
    return x;
}

double jacobian_logdet(const JohnsonParams& params, const Eigen::VectorXd& x) {
    const Eigen::Index d = params.dim();
    if (x.size() != d) throw RangeError("jacobian_logdet: x has wrong dimension");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        const double y = (x[i] - params.xi[i]) / params.lambda[i];
        try {
            acc += std::log(params.delta[i] / params.lambda[i]) + std::log(g_prime(params.family, y));
        } catch (const DomainError& e) {
            throw DomainError(e.family(), x[i], static_cast<int>(i));
        }
    }
    return acc;
}

ClassModel::ClassModel(JohnsonParams params_, double prior_, Eigen::MatrixXd precision_)
    : params(std::move(params_)), prior(prior_), precision(std::move(precision_)) {
    const Eigen::Index d = params.dim();
    if (precision.rows() != d || precision.cols() != d) {
        throw RangeError("ClassModel: precision has wrong shape");
    }
    if (!(prior > 0.0 && prior <= 1.0)) throw RangeError("ClassModel: prior must be in (0, 1]");
    const double asym = (precision - precision.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * (1.0 + precision.cwiseAbs().maxCoeff())) {
        throw FactorizationError("ClassModel: precision not symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(precision);
    if (llt.info() != Eigen::Success) {
        throw FactorizationError("ClassModel: precision not positive definite");
    }
    // det Sigma = 1 / det Precision = 1 / prod L_ii^2
    logdet_sigma = -2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

double class_log_density(const ClassModel& model, const Eigen::VectorXd& x) {
    const Eigen::VectorXd z = normalize_transform(model.params, x);
    const double quad = z.dot(model.precision * z);
    const double d = static_cast<double>(model.params.dim());
    return jacobian_logdet(model.params, x) - 0.5 * d * std::log(2.0 * std::numbers::pi) -
           0.5 * model.logdet_sigma - 0.5 * quad;
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

namespace {

// Rank interpolation on already-sorted data.
double percentile_sorted(const std::vector<double>& sorted, double P) {
    const auto n = static_cast<Eigen::Index>(sorted.size());
    const double rank = static_cast<double>(n - 1) * P / 100.0;
    const auto lo = static_cast<Eigen::Index>(std::floor(rank));
    if (lo >= n - 1) return sorted.back();
    const double t = rank - static_cast<double>(lo);
    return sorted[lo] * (1.0 - t) + sorted[lo + 1] * t;
}

}  // namespace

double percentile(std::span<const double> samples, double P) {
    if (samples.empty()) throw RangeError("percentile: empty sample");
    if (!(P > 0.0 && P < 100.0)) throw RangeError("percentile: P must be in (0, 100)");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    return percentile_sorted(sorted, P);
}

PercentileQuad percentile_quad(std::span<const double> samples, double z_param) {
    if (samples.empty()) throw RangeError("percentile_quad: empty sample");
    if (!(z_param > 0.0)) throw RangeError("percentile_quad: z_param must be > 0");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());

    PercentileQuad q;
    q.x_m3z = percentile_sorted(sorted, 100.0 * normal_cdf(-3.0 * z_param));
    q.x_mz = percentile_sorted(sorted, 100.0 * normal_cdf(-z_param));
    q.x_z = percentile_sorted(sorted, 100.0 * normal_cdf(z_param));
    q.x_3z = percentile_sorted(sorted, 100.0 * normal_cdf(3.0 * z_param));
    q.m = q.x_3z - q.x_z;
    q.n = q.x_mz - q.x_m3z;
    q.p = q.x_z - q.x_mz;
    return q;
}

ScalarJohnson su_from_quad(const PercentileQuad& quad, double z_param) {
    if (!(z_param > 0.0)) throw RangeError("su_from_quad: z_param must be > 0");
    if (!(quad.p > 0.0)) {
        throw DegenerateSpacing("central percentile spread p = " + std::to_string(quad.p) +
                                " is not positive");
    }
    const double mr = quad.m / quad.p;
    const double nr = quad.n / quad.p;
    const double w = mr * nr;
    if (!(w > 1.0)) {
        throw FamilyMismatch("percentile geometry m*n/p^2 = " + std::to_string(w) +
                             " <= 1, sample is not S_U shaped");
    }
    // w > 1 gives mr + nr >= 2 sqrt(w) > 2, so every denominator below is positive.
    const double root = std::sqrt(w - 1.0);
    ScalarJohnson fit;
    fit.family = FamilyTag::SU;
    fit.delta = 2.0 * z_param / std::acosh(0.5 * (mr + nr));
    fit.gamma = fit.delta * std::asinh((nr - mr) / (2.0 * root));
    fit.lambda = 2.0 * quad.p * root / ((mr + nr - 2.0) * std::sqrt(mr + nr + 2.0));
    fit.xi = 0.5 * (quad.x_z + quad.x_mz) + quad.p * (nr - mr) / (2.0 * (mr + nr - 2.0));
    return fit;
}

ScalarJohnson fit_percentile(std::span<const double> samples, double z_param, PercentileMode mode) {
    if (samples.size() < 20) throw RangeError("fit_percentile: need at least 20 samples");
    const PercentileQuad quad = percentile_quad(samples, z_param);
    try {
        return su_from_quad(quad, z_param);
    } catch (const FamilyMismatch&) {
        if (mode == PercentileMode::Strict) throw;
    }
    // Lenient fallback: moment-matched normal.
    const auto n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    ScalarJohnson fit;
    fit.family = FamilyTag::SN;
    fit.gamma = 0.0;
    fit.delta = 1.0;
    fit.lambda = std::sqrt(ss / (n - 1.0));
    fit.xi = mean;
    return fit;
}

}  // namespace jsnet

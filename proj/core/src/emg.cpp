#include "jsnet/emg.hpp"

#include <cmath>
#include <numbers>

namespace jsnet {

namespace {
constexpr double kNearRestEps = 1e-12;
}

void validate(const RawRecording& recording) {
    if (!(recording.fs > 0.0)) throw RangeError("recording: fs must be > 0");
    if (recording.channels.rows() == 0 || recording.channels.cols() == 0) {
        throw RangeError("recording: empty channel matrix");
    }
    if (recording.rest_begin < 0 || recording.rest_end > recording.channels.rows() ||
        recording.rest_begin >= recording.rest_end) {
        throw RangeError("recording: rest window [" + std::to_string(recording.rest_begin) + ", " +
                         std::to_string(recording.rest_end) + ") invalid for " +
                         std::to_string(recording.channels.rows()) + " samples");
    }
}

Eigen::VectorXd rectify(const Eigen::VectorXd& signal) {
    return signal.cwiseAbs();
}

HalfNormalMoments half_normal_moments(double sigma) {
    if (!(sigma > 0.0)) throw RangeError("half_normal_moments: sigma must be > 0");
    using std::numbers::pi;
    HalfNormalMoments m;
    m.mean = sigma * std::sqrt(2.0 / pi);
    m.variance = sigma * sigma * (1.0 - 2.0 / pi);
    // Scale-free: skew = sqrt(2)(4 - pi)/(pi - 2)^{3/2},
    // excess kurtosis = 8(pi - 3)/(pi - 2)^2.
    m.skewness = std::numbers::sqrt2 * (4.0 - pi) / std::pow(pi - 2.0, 1.5);
    m.excess_kurtosis = 8.0 * (pi - 3.0) / ((pi - 2.0) * (pi - 2.0));
    return m;
}

FilterCoeffs butter2_design(double fc, double fs) {
    if (!(fs > 0.0) || !(fc > 0.0) || !(fc < fs / 2.0)) {
        throw RangeError("butter2_design: need 0 < fc < fs/2");
    }
    // Prewarped analog prototype s^2 + sqrt(2) s + 1 under s = (1/K)(z-1)/(z+1).
    const double K = std::tan(std::numbers::pi * fc / fs);
    const double norm = 1.0 / (1.0 + std::numbers::sqrt2 * K + K * K);
    FilterCoeffs c;
    c.b0 = K * K * norm;
    c.b1 = 2.0 * c.b0;
    c.b2 = c.b0;
    c.a1 = 2.0 * (K * K - 1.0) * norm;
    c.a2 = (1.0 - std::numbers::sqrt2 * K + K * K) * norm;
    c.fc = fc;
    c.fs = fs;
    return c;
}

Eigen::VectorXd filter_apply(const FilterCoeffs& coeffs, const Eigen::VectorXd& signal) {
    Eigen::VectorXd out(signal.size());
    double s1 = 0.0, s2 = 0.0;  // transposed direct form II state
    for (Eigen::Index n = 0; n < signal.size(); ++n) {
        const double x = signal[n];
        const double y = coeffs.b0 * x + s1;
        s1 = coeffs.b1 * x - coeffs.a1 * y + s2;
        s2 = coeffs.b2 * x - coeffs.a2 * y;
        out[n] = y;
    }
    return out;
}

NormalizedFeatures normalize_features(const Eigen::MatrixXd& smoothed,
                                      const Eigen::VectorXd& rest_means) {
    if (smoothed.cols() != rest_means.size()) {
        throw RangeError("normalize_features: rest_means has wrong size");
    }
    NormalizedFeatures result;
    result.features.setZero(smoothed.rows(), smoothed.cols());
    for (Eigen::Index n = 0; n < smoothed.rows(); ++n) {
        const Eigen::VectorXd shifted = smoothed.row(n).transpose() - rest_means;
        const double denom = shifted.sum();
        if (std::abs(denom) < kNearRestEps) {
            result.flagged.push_back(n);
            continue;
        }
        result.features.row(n) = (shifted / denom).transpose();
    }
    return result;
}

Eigen::VectorXd normalize_sample(const Eigen::VectorXd& smoothed, const Eigen::VectorXd& rest_means) {
    if (smoothed.size() != rest_means.size()) {
        throw RangeError("normalize_sample: rest_means has wrong size");
    }
    const Eigen::VectorXd shifted = smoothed - rest_means;
    const double denom = shifted.sum();
    if (std::abs(denom) < kNearRestEps) {
        throw NearRestError("normalize_sample: activity sum " + std::to_string(denom) +
                            " too close to rest level");
    }
    return shifted / denom;
}

ExtractResult extract(const RawRecording& recording, double fc) {
    validate(recording);
    const FilterCoeffs coeffs = butter2_design(fc, recording.fs);
    const Eigen::Index N = recording.channels.rows();
    const Eigen::Index d = recording.channels.cols();

    ExtractResult result;
    result.smoothed.resize(N, d);
    result.rest_means.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        result.smoothed.col(i) = filter_apply(coeffs, rectify(recording.channels.col(i)));
        result.rest_means[i] = result.smoothed
                                   .col(i)
                                   .segment(recording.rest_begin,
                                            recording.rest_end - recording.rest_begin)
                                   .mean();
    }
    NormalizedFeatures norm = normalize_features(result.smoothed, result.rest_means);
    result.features = std::move(norm.features);
    result.flagged = std::move(norm.flagged);
    return result;
}

}  // namespace jsnet

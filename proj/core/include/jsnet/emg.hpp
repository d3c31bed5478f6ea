#pragma once

#include <Eigen/Core>
#include <vector>

#include "jsnet/errors.hpp"

namespace jsnet {

// Multichannel recording sampled at fs Hz. [rest_begin, rest_end) marks the
// stretch used to estimate the per-channel rest level.
struct RawRecording {
    Eigen::MatrixXd channels;  // N x d, one sample per row
    double fs = 0.0;
    Eigen::Index rest_begin = 0;
    Eigen::Index rest_end = 0;  // exclusive
};

// Throws RangeError when fs <= 0 or the rest window is empty or out of range.
void validate(const RawRecording& recording);

Eigen::VectorXd rectify(const Eigen::VectorXd& signal);

// Moments of |X| for X ~ N(0, sigma^2). Skewness and excess kurtosis are
// scale-free constants of the half-normal law.
struct HalfNormalMoments {
    double mean = 0.0;
    double variance = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};
HalfNormalMoments half_normal_moments(double sigma);

// Second-order Butterworth low-pass, bilinear transform with frequency
// prewarp. Denominator normalized to a0 = 1.
struct FilterCoeffs {
    double b0 = 0.0, b1 = 0.0, b2 = 0.0;  // numerator
    double a1 = 0.0, a2 = 0.0;            // denominator (after the implicit 1)
    double fc = 0.0, fs = 0.0;
};

// Requires 0 < fc < fs/2 (RangeError otherwise).
FilterCoeffs butter2_design(double fc, double fs);

// Causal direct-form-II-transposed filtering from zero initial state.
Eigen::VectorXd filter_apply(const FilterCoeffs& coeffs, const Eigen::VectorXd& signal);

// Rest-referenced channel shares: row n maps to
// (s_ni - rest_i) / sum_j (s_nj - rest_j). Rows whose denominator has
// magnitude below 1e-12 are flagged and zeroed.
struct NormalizedFeatures {
    Eigen::MatrixXd features;
    std::vector<Eigen::Index> flagged;
};
NormalizedFeatures normalize_features(const Eigen::MatrixXd& smoothed,
                                      const Eigen::VectorXd& rest_means);

// Single-sample variant; throws NearRestError instead of flagging.
Eigen::VectorXd normalize_sample(const Eigen::VectorXd& smoothed, const Eigen::VectorXd& rest_means);

// Full pipeline: rectify each channel, smooth it with the Butterworth filter
// at cut-off fc, estimate rest levels on the rest window of the smoothed
// signal, then normalize. Sample count is preserved.
struct ExtractResult {
    Eigen::MatrixXd features;   // N x d
    Eigen::MatrixXd smoothed;   // N x d, rectified and filtered
    Eigen::VectorXd rest_means; // per channel
    std::vector<Eigen::Index> flagged;
};
ExtractResult extract(const RawRecording& recording, double fc);

}  // namespace jsnet

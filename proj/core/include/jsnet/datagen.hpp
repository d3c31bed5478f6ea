#pragma once

#include <cstdint>
#include <vector>

#include "jsnet/dataset.hpp"
#include "jsnet/johnson.hpp"

namespace jsnet {

// Sampling recipe: per class, draw z ~ N(0, Sigma) and push it through the
// inverse translation x = xi + lambda * g^{-1}((z - gamma) / delta).
struct GeneratorSpec {
    std::vector<JohnsonParams> params;  // per class
    std::vector<Eigen::MatrixXd> sigma;  // per class z covariance, SPD
    Eigen::Index samples_per_class = 0;
    std::uint64_t seed = 0;
};

// Two-class, two-dimensional S_U preset used by the simulation study.
// z marginals are standard normal with correlation 0.6 (class 1) and
// 0.9 (class 2).
GeneratorSpec table_preset(Eigen::Index samples_per_class = 100, std::uint64_t seed = 0);

// Class-conditional densities matching table_preset (equal priors, precision
// = Sigma^{-1}); the ground truth for posterior oracles.
std::vector<ClassModel> table_models();

// n draws from N(0, Sigma) as rows, via Cholesky. Deterministic in seed.
// Throws FactorizationError when Sigma is not symmetric positive definite.
Eigen::MatrixXd sample_mvn(const Eigen::MatrixXd& sigma, Eigen::Index n, std::uint64_t seed);

// Generates samples_per_class rows per class (class c uses the substream
// seed derived from spec.seed and c), labels 1..C, classes in order.
LabeledDataset generate(const GeneratorSpec& spec);

}  // namespace jsnet

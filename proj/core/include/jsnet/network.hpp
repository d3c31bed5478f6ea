#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "jsnet/johnson.hpp"

namespace jsnet {

// Units in the fourth layer for input dimension d: one bias plus the
// d(d+1)/2 distinct quadratic products.
int expansion_size(int d);

// Position (1-based) of the product z_k * z_k' in the expansion
// [1, z_1^2, z_1 z_2, ..., z_1 z_d, z_2^2, ..., z_d^2]; slot 1 is the
// constant. Requires 1 <= k <= k' <= d (IndexError otherwise).
int z_index(int k, int k_prime, int d);

// The classifier's weights. Layers 1..2 are shared-structure affine maps
// holding the translation parameters; layer 5 holds one dense coefficient
// vector per class over the quadratic expansion.
//
//   W1 (d+1) x d:  row 0 = -xi/lambda,  diagonal = 1/lambda,  rest 0
//   W2 (d+1) x d:  row 0 = gamma,       diagonal = delta,     rest 0
//   W3 length H = expansion_size(d); element 0 is the constant slot.
struct WeightSet {
    FamilyTag family = FamilyTag::SU;
    int C = 0;
    int d = 0;
    std::vector<Eigen::MatrixXd> W1;  // per class
    std::vector<Eigen::MatrixXd> W2;
    std::vector<Eigen::VectorXd> W3;
};

// Structural checks: shapes, strictly positive diagonals of W1/W2 (1/lambda
// and delta), zeros off the stored structure. Throws RangeError.
void validate(const WeightSet& weights);

// Per-layer outputs for one input, kept for the training equations.
struct LayerTrace {
    Eigen::VectorXd o1;               // d+1: (1, x)
    std::vector<Eigen::VectorXd> o2;  // per class, d+2: (1, g(y), sum_j log g'(y_j))
    std::vector<Eigen::VectorXd> o3;  // per class, d:  z
    std::vector<Eigen::VectorXd> o4;  // per class, H:  quadratic expansion
    Eigen::VectorXd o5;               // C: posterior (softmax of the class scores)
};

struct PosteriorVector {
    Eigen::VectorXd probs;  // length C, nonnegative, sums to 1
};

// W1/W2 blocks for one class from its translation parameters.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> weights_from_johnson(const JohnsonParams& params);

// Assembles the full set (W3 zero-initialized) from per-class parameters.
// All classes must share a family and dimension.
WeightSet weight_set_from_params(const std::vector<JohnsonParams>& per_class);

// The closed-form W3 that makes the network compute the Bayes posterior for
// the given class prior, translation parameters and z precision:
// constant slot log(prior) + sum_i log(delta_i/lambda_i) - (1/2) logdet_sigma,
// quadratic slot (k,k') = -(1/2) (2 - [k==k']) * precision(k,k').
Eigen::VectorXd w3_from_probabilistic(double prior, const JohnsonParams& params,
                                      const Eigen::MatrixXd& precision, double logdet_sigma);

// Full forward pass. Throws DomainError when x leaves the family's support.
LayerTrace forward(const WeightSet& weights, const Eigen::VectorXd& x);

// Argmax of the posterior; ties resolve to the lowest class index.
// Returns the 1-based label.
std::pair<int, PosteriorVector> predict(const WeightSet& weights, const Eigen::VectorXd& x);

}  // namespace jsnet

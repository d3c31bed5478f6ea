#pragma once

#include <vector>

#include "jsnet/dataset.hpp"
#include "jsnet/network.hpp"
#include "jsnet/newton.hpp"

namespace jsnet {

struct TrainConfig {
    double z_param = 0.524;
    int max_newton_iters = 100;
    double rel_energy_tol = 1e-10;
    double damping_init = 1e-8;
    double damping_growth = 10.0;
    PercentileMode percentile_mode = PercentileMode::Lenient;

    NewtonOptions newton_options() const {
        NewtonOptions o;
        o.max_iters = max_newton_iters;
        o.rel_energy_tol = rel_energy_tol;
        o.damping_init = damping_init;
        o.damping_growth = damping_growth;
        return o;
    }
};

struct Stage1Result {
    WeightSet weights;                  // W1/W2 from the percentile fits, W3 zero
    std::vector<JohnsonParams> params;  // per class
};

// Stage 1: independent percentile-method fit per class and dimension.
// Requires at least 2 classes and 20 samples per class. DegenerateSpacing and
// FamilyMismatch are rethrown with class/dimension context; in lenient mode a
// FamilyMismatch falls back to SN parameters (used under the shared family
// tag) and is logged.
Stage1Result fit_stage1(const LabeledDataset& data, const TrainConfig& config = {});

// Cross-entropy energy E = -sum_n sum_c T_nc log O_c(x_n).
double energy(const WeightSet& weights, const LabeledDataset& data, const Eigen::MatrixXd& teachers);

// dE/dW3 flattened class-major: element (c*H + h) is sum_n (O_c - T_c) o4_{c,h}.
Eigen::VectorXd gradient_w3(const WeightSet& weights, const LabeledDataset& data,
                            const Eigen::MatrixXd& teachers);

// Exact Hessian of E in W3, block (c,k) = sum_n O_k (delta_ck - O_c) o4_c o4_k^T.
// Symmetric positive semidefinite; independent of the teachers.
Eigen::MatrixXd hessian_w3(const WeightSet& weights, const LabeledDataset& data);

struct FitResult {
    WeightSet weights;
    std::vector<JohnsonParams> params;   // per class (empty for stage-2-only runs)
    std::vector<double> energy_history;  // accepted energies, first entry = init
    int newton_iterations = 0;
    bool converged = false;
};

// Stage 2: damped Newton on W3 with W1/W2 frozen. `weights` provides the
// starting point (its W3 is the initial iterate).
FitResult fit_stage2(const WeightSet& weights, const LabeledDataset& data,
                     const Eigen::MatrixXd& teachers, const TrainConfig& config = {});

// Full two-stage training: percentile fits, probabilistic W3 start (empirical
// priors, identity z precision), then Newton refinement.
FitResult fit(const LabeledDataset& data, const TrainConfig& config = {});

}  // namespace jsnet

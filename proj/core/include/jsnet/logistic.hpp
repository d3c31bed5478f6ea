#pragma once

#include <optional>
#include <vector>

#include "jsnet/dataset.hpp"
#include "jsnet/network.hpp"
#include "jsnet/newton.hpp"

namespace jsnet {

// Multinomial log-linear (logistic regression) baseline. Class scores are
// B.row(c) . (1, x); the last class's row is pinned to zero for
// identifiability, so only the first C-1 rows are free parameters.
struct LlrModel {
    Eigen::MatrixXd B;  // C x (d+1), column 0 is the bias
    int C = 0;
    int d = 0;
};

struct LlrFitResult {
    LlrModel model;
    std::vector<double> energy_history;  // cross-entropy, first entry = init
    int iterations = 0;
    bool converged = false;
};

// Maximum-likelihood fit via the shared damped Newton loop. `init` (when
// given) supplies the free rows' starting point and must be C x (d+1) with a
// zero last row; the default start is all zeros.
LlrFitResult llr_fit(const LabeledDataset& data, const Eigen::MatrixXd& teachers,
                     const NewtonOptions& options = {},
                     const std::optional<Eigen::MatrixXd>& init = std::nullopt);

PosteriorVector llr_predict(const LlrModel& model, const Eigen::VectorXd& x);

// Argmax with lowest-index tie break; 1-based label.
int llr_predict_label(const LlrModel& model, const Eigen::VectorXd& x);

}  // namespace jsnet

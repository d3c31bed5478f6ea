#pragma once

#include <Eigen/Core>
#include <vector>

#include "jsnet/errors.hpp"

namespace jsnet {

// Dense labeled dataset. Labels are 1-based and contiguous 1..num_classes.
struct LabeledDataset {
    Eigen::MatrixXd X;        // N x d, one sample per row
    std::vector<int> labels;  // size N
    int num_classes = 0;

    Eigen::Index size() const { return X.rows(); }
    Eigen::Index dim() const { return X.cols(); }
};

// Throws LabelError unless labels are exactly {1, ..., num_classes} with every
// class present, and RangeError when sizes disagree.
void validate(const LabeledDataset& data);

// N x C one-hot teacher matrix from 1-based labels.
Eigen::MatrixXd one_hot_teachers(const std::vector<int>& labels, int num_classes);

// Samples per class, index c-1 for class c.
std::vector<Eigen::Index> class_counts(const LabeledDataset& data);

}  // namespace jsnet

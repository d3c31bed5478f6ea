#include "jsnet/dataset.hpp"

namespace jsnet {

void validate(const LabeledDataset& data) {
    if (static_cast<Eigen::Index>(data.labels.size()) != data.X.rows()) {
        throw RangeError("dataset: label count does not match row count");
    }
    std::vector<Eigen::Index> seen(static_cast<size_t>(std::max(data.num_classes, 0)), 0);
    for (int label : data.labels) {
        if (label < 1 || label > data.num_classes) {
            throw LabelError("label " + std::to_string(label) + " outside 1.." +
                             std::to_string(data.num_classes));
        }
        ++seen[static_cast<size_t>(label - 1)];
    }
    for (int c = 0; c < data.num_classes; ++c) {
        if (seen[static_cast<size_t>(c)] == 0) {
            throw LabelError("class " + std::to_string(c + 1) + " has no samples");
        }
    }
}

Eigen::MatrixXd one_hot_teachers(const std::vector<int>& labels, int num_classes) {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), num_classes);
    for (size_t n = 0; n < labels.size(); ++n) {
        const int label = labels[n];
        if (label < 1 || label > num_classes) {
            throw LabelError("label " + std::to_string(label) + " outside 1.." +
                             std::to_string(num_classes));
        }
        T(static_cast<Eigen::Index>(n), label - 1) = 1.0;
    }
    return T;
}

std::vector<Eigen::Index> class_counts(const LabeledDataset& data) {
    validate(data);
    std::vector<Eigen::Index> counts(static_cast<size_t>(data.num_classes), 0);
    for (int label : data.labels) ++counts[static_cast<size_t>(label - 1)];
    return counts;
}

}  // namespace jsnet

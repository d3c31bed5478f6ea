#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "jsnet/datagen.hpp"
#include "jsnet/io.hpp"
#include "jsnet/logistic.hpp"
#include "jsnet/trainer.hpp"

namespace jsnet::harness {

// Inclusive regular grid; nodes are min + i * step.
struct GridSpec {
    double min = 0.0;
    double max = 1.0;
    double step = 0.01;

    Eigen::Index nodes() const;  // validates min < max, step > 0
};

// Posterior of every class at every node of a 2-d grid; result[c](i, j) is
// class c+1's posterior at (x1 = node i, x2 = node j).
std::vector<Eigen::MatrixXd> posterior_grid(const io::AnyModel& model, const GridSpec& grid);

// Crossings of class 1's posterior through 1/2, found by linear interpolation
// along every grid row and every grid column.
std::vector<Eigen::Vector2d> level_set_05(const Eigen::MatrixXd& p1, const GridSpec& grid);

// Largest distance from the points to their total-least-squares line.
// Fewer than 3 points deviate by 0.
double collinearity_deviation(const std::vector<Eigen::Vector2d>& points);

// Seeded split without replacement: round(fraction * N) rows (at least 1)
// into the first part, the rest into the second, original order kept within
// each part. Requires fraction in (0, 1].
std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& data, double fraction,
                                                        std::uint64_t seed);

struct SimulateConfig {
    std::filesystem::path out_dir;
    std::uint64_t seed = 42;
    Eigen::Index train_per_class = 100;
    Eigen::Index test_per_class = 10000;
    GridSpec grid;
    TrainConfig train;
};

struct SimulateReport {
    double net_accuracy = 0.0;  // percent on the held-out test set
    double llr_accuracy = 0.0;
    double net_deviation = 0.0;  // level-set collinearity (grid units)
    double llr_deviation = 0.0;
    double final_energy = 0.0;
    int newton_iterations = 0;
    std::vector<std::filesystem::path> files;
};

// The end-to-end desk study: generate preset data, train both classifiers,
// score them, rasterize posterior maps and trace the decision boundaries.
// Every artifact except timings.json is a deterministic function of the
// configuration.
SimulateReport cmd_simulate(const SimulateConfig& config);

struct TrainCommand {
    std::filesystem::path data_path;
    std::filesystem::path model_out;
    std::filesystem::path holdout_out;  // empty = keep no holdout file
    bool baseline_llr = false;
    double train_fraction = 1.0;  // trial subsampling, seeded
    std::uint64_t seed = 0;
    TrainConfig train;
};

struct TrainReport {
    double training_time_s = 0.0;
    double final_energy = 0.0;
    int iterations = 0;
    Eigen::Index train_rows = 0;
};

TrainReport cmd_train(const TrainCommand& command);

struct MetricsReport {
    double accuracy = 0.0;   // percent
    double cv_time_s = 0.0;  // no cross-validation stage exists; always 0
    double training_time_s = 0.0;
    double prediction_time_s = 0.0;
    Eigen::MatrixXi confusion;  // rows = true class, cols = predicted
};

// Scores a saved model on a labeled CSV; writes metrics JSON when
// metrics_out is nonempty.
MetricsReport cmd_eval(const std::filesystem::path& model_path,
                       const std::filesystem::path& data_path,
                       const std::filesystem::path& metrics_out = {});

// Per-row "predicted,p1,...,pC" CSV for a saved model.
void cmd_predict(const std::filesystem::path& model_path, const std::filesystem::path& data_path,
                 const std::filesystem::path& out_path);

// Posterior grid artifacts for a saved 2-d model: <prefix>_grid.csv plus one
// <prefix>_class<c>.pgm per class (row 0 = largest x2).
void cmd_grid(const std::filesystem::path& model_path, const GridSpec& grid,
              const std::filesystem::path& out_prefix);

struct EmgExtractCommand {
    std::filesystem::path input;
    std::filesystem::path output;
    double fs = 1000.0;
    double fc = 1.0;
    Eigen::Index rest_begin = 0;
    Eigen::Index rest_end = 0;
    int label = 1;
};

// Recording -> labeled feature CSV. Returns the number of near-rest rows
// (written as zeros and logged).
Eigen::Index cmd_emg_extract(const EmgExtractCommand& command);

}  // namespace jsnet::harness

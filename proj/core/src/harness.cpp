#include "jsnet/harness.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "jsnet/emg.hpp"
#include "jsnet/log.hpp"
#include "jsnet/rng.hpp"

namespace jsnet::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::pair<int, Eigen::VectorXd> predict_any(const io::AnyModel& model, const Eigen::VectorXd& x) {
    if (const auto* net = std::get_if<WeightSet>(&model)) {
        auto [label, post] = predict(*net, x);
        return {label, std::move(post.probs)};
    }
    const auto& llr = std::get<LlrModel>(model);
    const PosteriorVector post = llr_predict(llr, x);
    int best = 0;
    for (int c = 1; c < llr.C; ++c) {
        if (post.probs[c] > post.probs[best]) best = c;
    }
    return {best + 1, post.probs};
}

int model_classes(const io::AnyModel& model) {
    if (const auto* net = std::get_if<WeightSet>(&model)) return net->C;
    return std::get<LlrModel>(model).C;
}

int model_dim(const io::AnyModel& model) {
    if (const auto* net = std::get_if<WeightSet>(&model)) return net->d;
    return std::get<LlrModel>(model).d;
}

std::string canonical_config(const TrainConfig& train, double fraction, std::uint64_t seed,
                             bool baseline_llr) {
    char buf[320];
    std::snprintf(buf, sizeof(buf),
                  "z_param=%.17g|max_iters=%d|rel_tol=%.17g|damping_init=%.17g|growth=%.17g|"
                  "mode=%s|fraction=%.17g|seed=%llu|baseline=%s",
                  train.z_param, train.max_newton_iters, train.rel_energy_tol, train.damping_init,
                  train.damping_growth,
                  train.percentile_mode == PercentileMode::Strict ? "strict" : "lenient", fraction,
                  static_cast<unsigned long long>(seed), baseline_llr ? "llr" : "net");
    return buf;
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw RangeError("cannot open file for writing: " + path.string());
    out << j.dump(2) << "\n";
}

// Accuracy in percent plus wall-clock prediction time.
std::pair<double, double> score(const io::AnyModel& model, const LabeledDataset& data) {
    const auto start = Clock::now();
    Eigen::Index correct = 0;
    for (Eigen::Index n = 0; n < data.size(); ++n) {
        const auto [label, probs] = predict_any(model, data.X.row(n).transpose());
        if (label == data.labels[static_cast<size_t>(n)]) ++correct;
    }
    const double elapsed = seconds_since(start);
    return {100.0 * static_cast<double>(correct) / static_cast<double>(data.size()), elapsed};
}

// <prefix>_grid.csv and one <prefix>_class<c>.pgm per class.
std::vector<std::filesystem::path> write_grid_artifacts(const io::AnyModel& model,
                                                        const GridSpec& grid,
                                                        const std::filesystem::path& out_prefix) {
    const std::vector<Eigen::MatrixXd> posteriors = posterior_grid(model, grid);
    const Eigen::Index nodes = grid.nodes();
    const auto C = static_cast<int>(posteriors.size());

    std::vector<std::filesystem::path> files;
    std::filesystem::path csv_path = out_prefix;
    csv_path += "_grid.csv";
    {
        std::string out = "x1,x2";
        for (int c = 1; c <= C; ++c) out += ",p" + std::to_string(c);
        out += "\n";
        for (Eigen::Index i = 0; i < nodes; ++i) {
            for (Eigen::Index j = 0; j < nodes; ++j) {
                out += io::format_value(grid.min + grid.step * static_cast<double>(i));
                out += ",";
                out += io::format_value(grid.min + grid.step * static_cast<double>(j));
                for (int c = 0; c < C; ++c) {
                    out += ",";
                    out += io::format_value(posteriors[static_cast<size_t>(c)](i, j));
                }
                out += "\n";
            }
        }
        std::ofstream f(csv_path, std::ios::binary | std::ios::trunc);
        if (!f) throw RangeError("cannot open file for writing: " + csv_path.string());
        f << out;
    }
    files.push_back(csv_path);

    for (int c = 0; c < C; ++c) {
        // Image row 0 holds the largest x2 so the pictures read like plots.
        Eigen::MatrixXd img(nodes, nodes);
        for (Eigen::Index r = 0; r < nodes; ++r) {
            for (Eigen::Index col = 0; col < nodes; ++col) {
                img(r, col) = posteriors[static_cast<size_t>(c)](col, nodes - 1 - r);
            }
        }
        std::filesystem::path pgm_path = out_prefix;
        pgm_path += "_class" + std::to_string(c + 1) + ".pgm";
        io::write_pgm(img, pgm_path);
        files.push_back(pgm_path);
    }
    return files;
}

}  // namespace

Eigen::Index GridSpec::nodes() const {
    if (!(step > 0.0) || !(max > min)) throw RangeError("grid: need step > 0 and max > min");
    return static_cast<Eigen::Index>(std::llround((max - min) / step)) + 1;
}

std::vector<Eigen::MatrixXd> posterior_grid(const io::AnyModel& model, const GridSpec& grid) {
    if (model_dim(model) != 2) throw RangeError("posterior_grid: model must be 2-d");
    const Eigen::Index nodes = grid.nodes();
    const int C = model_classes(model);
    std::vector<Eigen::MatrixXd> out(static_cast<size_t>(C), Eigen::MatrixXd(nodes, nodes));
    Eigen::Vector2d x;
    for (Eigen::Index i = 0; i < nodes; ++i) {
        x[0] = grid.min + grid.step * static_cast<double>(i);
        for (Eigen::Index j = 0; j < nodes; ++j) {
            x[1] = grid.min + grid.step * static_cast<double>(j);
            const auto [label, probs] = predict_any(model, x);
            for (int c = 0; c < C; ++c) out[static_cast<size_t>(c)](i, j) = probs[c];
        }
    }
    return out;
}

std::vector<Eigen::Vector2d> level_set_05(const Eigen::MatrixXd& p1, const GridSpec& grid) {
    const Eigen::Index nodes = grid.nodes();
    if (p1.rows() != nodes || p1.cols() != nodes) {
        throw RangeError("level_set_05: posterior grid has wrong shape");
    }
    const auto node = [&](Eigen::Index k) { return grid.min + grid.step * static_cast<double>(k); };

    std::vector<Eigen::Vector2d> points;
    const auto scan = [&](double a, double b, double fixed, double moving, bool vertical) {
        if (a == 0.5) {
            points.emplace_back(vertical ? fixed : moving, vertical ? moving : fixed);
        } else if ((a - 0.5) * (b - 0.5) < 0.0) {
            const double t = (0.5 - a) / (b - a);
            const double pos = moving + t * grid.step;
            points.emplace_back(vertical ? fixed : pos, vertical ? pos : fixed);
        }
    };
    for (Eigen::Index i = 0; i < nodes; ++i) {
        for (Eigen::Index j = 0; j + 1 < nodes; ++j) {
            scan(p1(i, j), p1(i, j + 1), node(i), node(j), true);   // along x2
            scan(p1(j, i), p1(j + 1, i), node(i), node(j), false);  // along x1
        }
        if (p1(i, nodes - 1) == 0.5) points.emplace_back(node(i), node(nodes - 1));
        if (p1(nodes - 1, i) == 0.5) points.emplace_back(node(nodes - 1), node(i));
    }
    return points;
}

double collinearity_deviation(const std::vector<Eigen::Vector2d>& points) {
    const auto n = static_cast<Eigen::Index>(points.size());
    if (n < 3) return 0.0;
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (const auto& p : points) mean += p;
    mean /= static_cast<double>(n);

    Eigen::Matrix2d scatter = Eigen::Matrix2d::Zero();
    for (const auto& p : points) {
        const Eigen::Vector2d q = p - mean;
        scatter += q * q.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(scatter);
    const Eigen::Vector2d normal = eig.eigenvectors().col(0);  // smallest eigenvalue

    double deviation = 0.0;
    for (const auto& p : points) {
        deviation = std::max(deviation, std::abs(normal.dot(p - mean)));
    }
    return deviation;
}

std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& data, double fraction,
                                                        std::uint64_t seed) {
    validate(data);
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw RangeError("split_dataset: fraction must be in (0, 1]");
    }
    const Eigen::Index N = data.size();
    const Eigen::Index k = std::min<Eigen::Index>(
        N, std::max<Eigen::Index>(1, std::llround(fraction * static_cast<double>(N))));

    std::vector<Eigen::Index> order(static_cast<size_t>(N));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    for (Eigen::Index i = N - 1; i > 0; --i) {
        const auto j = static_cast<Eigen::Index>(rng.next() % static_cast<std::uint64_t>(i + 1));
        std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(j)]);
    }
    std::sort(order.begin(), order.begin() + k);
    std::sort(order.begin() + k, order.end());

    const auto take = [&](Eigen::Index begin, Eigen::Index count) {
        LabeledDataset part;
        part.num_classes = data.num_classes;
        part.X.resize(count, data.dim());
        part.labels.reserve(static_cast<size_t>(count));
        for (Eigen::Index r = 0; r < count; ++r) {
            const Eigen::Index src = order[static_cast<size_t>(begin + r)];
            part.X.row(r) = data.X.row(src);
            part.labels.push_back(data.labels[static_cast<size_t>(src)]);
        }
        return part;
    };
    return {take(0, k), take(k, N - k)};
}

SimulateReport cmd_simulate(const SimulateConfig& config) {
    std::filesystem::create_directories(config.out_dir);
    const auto out = [&](const char* name) { return config.out_dir / name; };

    GeneratorSpec train_spec = table_preset(config.train_per_class, config.seed);
    GeneratorSpec test_spec =
        table_preset(config.test_per_class, Rng::substream(config.seed, 0xA11CE));
    const LabeledDataset train = generate(train_spec);
    const LabeledDataset test = generate(test_spec);

    SimulateReport report;
    io::save_dataset(train, out("train.csv"));
    io::save_dataset(test, out("test.csv"));
    report.files = {out("train.csv"), out("test.csv")};

    const std::string digest =
        io::fnv1a_hex(canonical_config(config.train, 1.0, config.seed, false));
    const io::ModelProvenance provenance{config.seed, digest};

    auto start = Clock::now();
    const FitResult net = fit(train, config.train);
    const double train_net_s = seconds_since(start);

    const Eigen::MatrixXd teachers = one_hot_teachers(train.labels, train.num_classes);
    start = Clock::now();
    const LlrFitResult llr = llr_fit(train, teachers, config.train.newton_options());
    const double train_llr_s = seconds_since(start);

    io::save_model(net.weights, provenance, out("net_model.json"));
    io::save_model(llr.model, provenance, out("llr_model.json"));
    report.files.push_back(out("net_model.json"));
    report.files.push_back(out("llr_model.json"));

    const io::AnyModel net_model{net.weights};
    const io::AnyModel llr_model{llr.model};
    const auto [net_acc, predict_net_s] = score(net_model, test);
    const auto [llr_acc, predict_llr_s] = score(llr_model, test);
    report.net_accuracy = net_acc;
    report.llr_accuracy = llr_acc;
    report.final_energy = net.energy_history.back();
    report.newton_iterations = net.newton_iterations;

    auto net_files = write_grid_artifacts(net_model, config.grid, config.out_dir / "net");
    auto llr_files = write_grid_artifacts(llr_model, config.grid, config.out_dir / "llr");
    report.files.insert(report.files.end(), net_files.begin(), net_files.end());
    report.files.insert(report.files.end(), llr_files.begin(), llr_files.end());

    report.net_deviation =
        collinearity_deviation(level_set_05(posterior_grid(net_model, config.grid)[0], config.grid));
    report.llr_deviation =
        collinearity_deviation(level_set_05(posterior_grid(llr_model, config.grid)[0], config.grid));

    nlohmann::json metrics{{"seed", config.seed},
                           {"train_per_class", config.train_per_class},
                           {"test_per_class", config.test_per_class},
                           {"config_digest", digest},
                           {"net_accuracy", report.net_accuracy},
                           {"llr_accuracy", report.llr_accuracy},
                           {"net_levelset_deviation", report.net_deviation},
                           {"llr_levelset_deviation", report.llr_deviation},
                           {"final_energy", report.final_energy},
                           {"newton_iterations", report.newton_iterations},
                           {"llr_iterations", llr.iterations},
                           {"grid", {{"min", config.grid.min},
                                     {"max", config.grid.max},
                                     {"step", config.grid.step}}}};
    write_json(metrics, out("metrics.json"));
    report.files.push_back(out("metrics.json"));

    nlohmann::json timings{{"train_net_s", train_net_s},
                           {"train_llr_s", train_llr_s},
                           {"predict_net_s", predict_net_s},
                           {"predict_llr_s", predict_llr_s}};
    write_json(timings, out("timings.json"));

    log_info("simulate: net " + std::to_string(report.net_accuracy) + "%, llr " +
             std::to_string(report.llr_accuracy) + "% on " +
             std::to_string(test.size()) + " test samples");
    return report;
}

TrainReport cmd_train(const TrainCommand& command) {
    LabeledDataset data = io::load_dataset(command.data_path);
    if (command.train_fraction < 1.0) {
        auto [train_part, holdout] = split_dataset(data, command.train_fraction, command.seed);
        if (!command.holdout_out.empty()) {
            if (holdout.size() == 0) {
                log_info("train: holdout is empty, not writing " + command.holdout_out.string());
            } else {
                io::save_dataset(holdout, command.holdout_out);
            }
        }
        data = std::move(train_part);
    }

    const std::string digest = io::fnv1a_hex(canonical_config(
        command.train, command.train_fraction, command.seed, command.baseline_llr));
    const io::ModelProvenance provenance{command.seed, digest};

    TrainReport report;
    report.train_rows = data.size();
    const auto start = Clock::now();
    if (command.baseline_llr) {
        const Eigen::MatrixXd teachers = one_hot_teachers(data.labels, data.num_classes);
        const LlrFitResult result = llr_fit(data, teachers, command.train.newton_options());
        report.training_time_s = seconds_since(start);
        report.final_energy = result.energy_history.back();
        report.iterations = result.iterations;
        io::save_model(result.model, provenance, command.model_out);
    } else {
        const FitResult result = fit(data, command.train);
        report.training_time_s = seconds_since(start);
        report.final_energy = result.energy_history.back();
        report.iterations = result.newton_iterations;
        io::save_model(result.weights, provenance, command.model_out);
    }
    log_info("train: " + std::to_string(report.train_rows) + " rows, " +
             std::to_string(report.iterations) + " iterations, energy " +
             std::to_string(report.final_energy) + ", " +
             std::to_string(report.training_time_s) + " s");
    return report;
}

MetricsReport cmd_eval(const std::filesystem::path& model_path,
                       const std::filesystem::path& data_path,
                       const std::filesystem::path& metrics_out) {
    const io::LoadedModel loaded = io::load_model(model_path);
    const LabeledDataset data = io::load_dataset(data_path);
    const int C = model_classes(loaded.model);
    if (model_dim(loaded.model) != data.dim()) {
        throw DataError("eval: model expects dimension " + std::to_string(model_dim(loaded.model)) +
                        ", data has " + std::to_string(data.dim()));
    }
    if (data.num_classes != C) {
        throw LabelError("eval: model has " + std::to_string(C) + " classes, data has " +
                         std::to_string(data.num_classes));
    }

    MetricsReport report;
    report.confusion = Eigen::MatrixXi::Zero(C, C);
    const auto start = Clock::now();
    Eigen::Index correct = 0;
    for (Eigen::Index n = 0; n < data.size(); ++n) {
        const auto [label, probs] = predict_any(loaded.model, data.X.row(n).transpose());
        const int truth = data.labels[static_cast<size_t>(n)];
        report.confusion(truth - 1, label - 1) += 1;
        if (label == truth) ++correct;
    }
    report.prediction_time_s = seconds_since(start);
    report.accuracy = 100.0 * static_cast<double>(correct) / static_cast<double>(data.size());

    if (!metrics_out.empty()) {
        nlohmann::json confusion = nlohmann::json::array();
        for (int r = 0; r < C; ++r) {
            std::vector<int> row(static_cast<size_t>(C));
            for (int c = 0; c < C; ++c) row[static_cast<size_t>(c)] = report.confusion(r, c);
            confusion.push_back(row);
        }
        write_json(nlohmann::json{{"accuracy", report.accuracy},
                                  {"cv_time_s", report.cv_time_s},
                                  {"training_time_s", report.training_time_s},
                                  {"prediction_time_s", report.prediction_time_s},
                                  {"confusion", confusion}},
                   metrics_out);
    }
    log_info("eval: accuracy " + std::to_string(report.accuracy) + "% on " +
             std::to_string(data.size()) + " rows");
    return report;
}

void cmd_predict(const std::filesystem::path& model_path, const std::filesystem::path& data_path,
                 const std::filesystem::path& out_path) {
    const io::LoadedModel loaded = io::load_model(model_path);
    const LabeledDataset data = io::load_dataset(data_path);
    if (model_dim(loaded.model) != data.dim()) {
        throw DataError("predict: model expects dimension " +
                        std::to_string(model_dim(loaded.model)) + ", data has " +
                        std::to_string(data.dim()));
    }
    const int C = model_classes(loaded.model);

    std::string out = "predicted";
    for (int c = 1; c <= C; ++c) out += ",p" + std::to_string(c);
    out += "\n";
    for (Eigen::Index n = 0; n < data.size(); ++n) {
        const auto [label, probs] = predict_any(loaded.model, data.X.row(n).transpose());
        out += std::to_string(label);
        for (int c = 0; c < C; ++c) {
            out += ",";
            out += io::format_value(probs[c]);
        }
        out += "\n";
    }
    std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
    if (!f) throw RangeError("cannot open file for writing: " + out_path.string());
    f << out;
}

void cmd_grid(const std::filesystem::path& model_path, const GridSpec& grid,
              const std::filesystem::path& out_prefix) {
    const io::LoadedModel loaded = io::load_model(model_path);
    if (!out_prefix.parent_path().empty()) {
        std::filesystem::create_directories(out_prefix.parent_path());
    }
    write_grid_artifacts(loaded.model, grid, out_prefix);
}

Eigen::Index cmd_emg_extract(const EmgExtractCommand& command) {
    if (command.label < 1) throw RangeError("emg-extract: label must be >= 1");
    RawRecording recording;
    recording.channels = io::load_matrix(command.input);
    recording.fs = command.fs;
    recording.rest_begin = command.rest_begin;
    recording.rest_end = command.rest_end;

    const ExtractResult extracted = extract(recording, command.fc);
    LabeledDataset features;
    features.X = extracted.features;
    features.labels.assign(static_cast<size_t>(extracted.features.rows()), command.label);
    features.num_classes = command.label;
    io::save_dataset(features, command.output);

    if (!extracted.flagged.empty()) {
        log_info("emg-extract: " + std::to_string(extracted.flagged.size()) +
                 " near-rest rows written as zeros");
    }
    return static_cast<Eigen::Index>(extracted.flagged.size());
}

}  // namespace jsnet::harness

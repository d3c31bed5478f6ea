#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "jsnet/harness.hpp"
#include "jsnet/log.hpp"

namespace {

// exit codes: 0 ok, 1 usage/configuration, 2 data, 3 numerics

void add_grid_options(CLI::App* cmd, jsnet::harness::GridSpec* grid) {
    cmd->add_option("--grid-min", grid->min, "Grid lower bound")->capture_default_str();
    cmd->add_option("--grid-max", grid->max, "Grid upper bound")->capture_default_str();
    cmd->add_option("--grid-step", grid->step, "Grid spacing")->capture_default_str();
}

void add_train_options(CLI::App* cmd, jsnet::TrainConfig* train, bool* strict) {
    cmd->add_option("--z-param", train->z_param, "Percentile deviate z")->capture_default_str();
    cmd->add_option("--max-iters", train->max_newton_iters, "Newton iteration cap")
        ->capture_default_str();
    cmd->add_flag("--strict-percentile", *strict,
                  "Fail on non-S_U percentile geometry instead of falling back to a normal fit");
}

std::pair<Eigen::Index, Eigen::Index> parse_rest_range(const std::string& text) {
    const size_t colon = text.find(':');
    if (colon == std::string::npos) {
        throw jsnet::RangeError("--rest-range must look like BEGIN:END");
    }
    try {
        const long begin = std::stol(text.substr(0, colon));
        const long end = std::stol(text.substr(colon + 1));
        return {begin, end};
    } catch (const std::exception&) {
        throw jsnet::RangeError("--rest-range must hold two integers, got '" + text + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Johnson translation-system neural network classifier"};
    app.require_subcommand(1);

    jsnet::harness::SimulateConfig sim;
    bool sim_strict = false;
    auto* simulate = app.add_subcommand("simulate", "Run the synthetic two-class study end to end");
    simulate->add_option("--out", sim.out_dir, "Output directory")->required();
    simulate->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
    simulate->add_option("--train-per-class", sim.train_per_class, "Training samples per class")
        ->capture_default_str();
    simulate->add_option("--test-per-class", sim.test_per_class, "Test samples per class")
        ->capture_default_str();
    add_grid_options(simulate, &sim.grid);
    add_train_options(simulate, &sim.train, &sim_strict);

    jsnet::harness::TrainCommand train_cmd;
    bool train_strict = false;
    std::string baseline;
    auto* train = app.add_subcommand("train", "Fit a model on a labeled CSV");
    train->add_option("--data", train_cmd.data_path, "Input dataset CSV")->required();
    train->add_option("--out", train_cmd.model_out, "Model file to write")->required();
    train->add_option("--baseline", baseline, "Train a baseline instead of the network")
        ->check(CLI::IsMember({"llr"}));
    train->add_option("--train-fraction", train_cmd.train_fraction,
                      "Seeded fraction of rows used for training")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    train->add_option("--holdout", train_cmd.holdout_out,
                      "Where to write the rows left out by --train-fraction");
    train->add_option("--seed", train_cmd.seed, "Subsampling seed")->capture_default_str();
    add_train_options(train, &train_cmd.train, &train_strict);

    std::string predict_model, predict_data, predict_out;
    auto* predict = app.add_subcommand("predict", "Write per-row predictions for a saved model");
    predict->add_option("--model", predict_model, "Model file")->required();
    predict->add_option("--data", predict_data, "Input dataset CSV")->required();
    predict->add_option("--out", predict_out, "Prediction CSV to write")->required();

    std::string eval_model, eval_data, eval_out;
    auto* eval = app.add_subcommand("eval", "Score a saved model on a labeled CSV");
    eval->add_option("--model", eval_model, "Model file")->required();
    eval->add_option("--data", eval_data, "Labeled dataset CSV")->required();
    eval->add_option("--out", eval_out, "Metrics JSON to write (optional)");

    jsnet::harness::EmgExtractCommand emg;
    std::string rest_range;
    auto* emg_extract =
        app.add_subcommand("emg-extract", "Turn a raw recording into normalized features");
    emg_extract->add_option("--input", emg.input, "Recording CSV/TSV, one channel per column")
        ->required();
    emg_extract->add_option("--out", emg.output, "Feature CSV to write")->required();
    emg_extract->add_option("--fs", emg.fs, "Sampling rate in Hz")->required();
    emg_extract->add_option("--fc", emg.fc, "Low-pass cut-off in Hz")->capture_default_str();
    emg_extract->add_option("--rest-range", rest_range, "Rest window, sample indices BEGIN:END")
        ->required();
    emg_extract->add_option("--label", emg.label, "Class label for every row")
        ->capture_default_str();

    std::string grid_model, grid_out;
    jsnet::harness::GridSpec grid_spec;
    auto* grid = app.add_subcommand("grid", "Rasterize a 2-d model's posterior over a grid");
    grid->add_option("--model", grid_model, "Model file")->required();
    grid->add_option("--out", grid_out, "Output prefix (<prefix>_grid.csv, <prefix>_class<c>.pgm)")
        ->required();
    add_grid_options(grid, &grid_spec);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (simulate->parsed()) {
            if (sim_strict) sim.train.percentile_mode = jsnet::PercentileMode::Strict;
            const auto report = jsnet::harness::cmd_simulate(sim);
            std::printf("net accuracy %.4f%%  llr accuracy %.4f%%\n", report.net_accuracy,
                        report.llr_accuracy);
            std::printf("net level-set deviation %.6g  llr level-set deviation %.6g\n",
                        report.net_deviation, report.llr_deviation);
        } else if (train->parsed()) {
            if (train_strict) train_cmd.train.percentile_mode = jsnet::PercentileMode::Strict;
            train_cmd.baseline_llr = baseline == "llr";
            const auto report = jsnet::harness::cmd_train(train_cmd);
            std::printf("trained on %lld rows in %.3f s (%d iterations, energy %.6g)\n",
                        static_cast<long long>(report.train_rows), report.training_time_s,
                        report.iterations, report.final_energy);
        } else if (predict->parsed()) {
            jsnet::harness::cmd_predict(predict_model, predict_data, predict_out);
        } else if (eval->parsed()) {
            const auto report = jsnet::harness::cmd_eval(eval_model, eval_data, eval_out);
            std::printf("accuracy %.4f%% (prediction %.4f s, cv %.1f s)\n", report.accuracy,
                        report.prediction_time_s, report.cv_time_s);
        } else if (emg_extract->parsed()) {
            const auto [begin, end] = parse_rest_range(rest_range);
            emg.rest_begin = begin;
            emg.rest_end = end;
            const auto flagged = jsnet::harness::cmd_emg_extract(emg);
            std::printf("wrote %s (%lld near-rest rows)\n", emg.output.string().c_str(),
                        static_cast<long long>(flagged));
        } else if (grid->parsed()) {
            jsnet::harness::cmd_grid(grid_model, grid_spec, grid_out);
        }
    } catch (const jsnet::RangeError& e) {
        jsnet::log_error(e.what());
        return 1;
    } catch (const jsnet::DataError& e) {
        jsnet::log_error(e.what());
        return 2;
    } catch (const jsnet::NumericError& e) {
        jsnet::log_error(e.what());
        return 3;
    } catch (const std::exception& e) {
        jsnet::log_error(e.what());
        return 1;
    }
    return 0;
}

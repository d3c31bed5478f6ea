#include "jsnet/trainer.hpp"

#include <cmath>

#include "jsnet/log.hpp"

namespace jsnet {

namespace {

// One pass over the dataset. Energy and gradient need the teachers; the
// Hessian does not. Gradient/Hessian are flattened class-major (c * H + h).
double accumulate(const WeightSet& weights, const LabeledDataset& data,
                  const Eigen::MatrixXd* teachers, Eigen::VectorXd* grad, Eigen::MatrixXd* hess) {
    const int C = weights.C;
    const int d = weights.d;
    const int H = expansion_size(d);
    const Eigen::Index N = data.size();
    if (data.dim() != d) throw RangeError("trainer: dataset dimension differs from weights");
    if (grad && !teachers) throw RangeError("trainer: gradient needs teachers");
    if (teachers && (teachers->rows() != N || teachers->cols() != C)) {
        throw RangeError("trainer: teacher matrix must be N x C");
    }

    if (grad) grad->setZero(static_cast<Eigen::Index>(C) * H);
    if (hess) {
        hess->setZero(static_cast<Eigen::Index>(C) * H, static_cast<Eigen::Index>(C) * H);
    }

    double E = 0.0;
    Eigen::VectorXd scores(C);
    for (Eigen::Index n = 0; n < N; ++n) {
        const LayerTrace trace = forward(weights, data.X.row(n).transpose());
        for (int c = 0; c < C; ++c) {
            const auto uc = static_cast<size_t>(c);
            scores[c] = weights.W3[uc].dot(trace.o4[uc]) + trace.o2[uc][d + 1];
        }
        if (teachers) {
            const double top = scores.maxCoeff();
            const double lse = top + std::log((scores.array() - top).exp().sum());
            for (int c = 0; c < C; ++c) {
                const double t = (*teachers)(n, c);
                if (t != 0.0) E -= t * (scores[c] - lse);
            }
        }
        if (grad) {
            for (int c = 0; c < C; ++c) {
                grad->segment(static_cast<Eigen::Index>(c) * H, H) +=
                    (trace.o5[c] - (*teachers)(n, c)) * trace.o4[static_cast<size_t>(c)];
            }
        }
        if (hess) {
            for (int c = 0; c < C; ++c) {
                for (int k = c; k < C; ++k) {
                    const double coef =
                        trace.o5[k] * ((c == k ? 1.0 : 0.0) - trace.o5[c]);
                    hess->block(static_cast<Eigen::Index>(c) * H,
                                static_cast<Eigen::Index>(k) * H, H, H)
                        .noalias() += coef * (trace.o4[static_cast<size_t>(c)] *
                                              trace.o4[static_cast<size_t>(k)].transpose());
                }
            }
        }
    }
    if (hess) {
        for (int c = 0; c < C; ++c) {
            for (int k = c + 1; k < C; ++k) {
                hess->block(static_cast<Eigen::Index>(k) * H, static_cast<Eigen::Index>(c) * H, H,
                            H) = hess->block(static_cast<Eigen::Index>(c) * H,
                                             static_cast<Eigen::Index>(k) * H, H, H)
                                     .transpose();
            }
        }
    }
    return E;
}

void set_w3(WeightSet& weights, const Eigen::VectorXd& flat) {
    const int H = expansion_size(weights.d);
    for (int c = 0; c < weights.C; ++c) {
        weights.W3[static_cast<size_t>(c)] = flat.segment(static_cast<Eigen::Index>(c) * H, H);
    }
}

Eigen::VectorXd flatten_w3(const WeightSet& weights) {
    const int H = expansion_size(weights.d);
    Eigen::VectorXd flat(static_cast<Eigen::Index>(weights.C) * H);
    for (int c = 0; c < weights.C; ++c) {
        flat.segment(static_cast<Eigen::Index>(c) * H, H) = weights.W3[static_cast<size_t>(c)];
    }
    return flat;
}

}  // namespace

Stage1Result fit_stage1(const LabeledDataset& data, const TrainConfig& config) {
    validate(data);
    if (data.num_classes < 2) throw RangeError("fit_stage1: need at least 2 classes");
    if (!(config.z_param > 0.0)) throw RangeError("fit_stage1: z_param must be > 0");
    const auto counts = class_counts(data);
    const Eigen::Index d = data.dim();

    Stage1Result result;
    for (int c = 1; c <= data.num_classes; ++c) {
        const Eigen::Index nc = counts[static_cast<size_t>(c - 1)];
        if (nc < 20) {
            throw RangeError("fit_stage1: class " + std::to_string(c) + " has only " +
                             std::to_string(nc) + " samples, need at least 20");
        }
        Eigen::VectorXd gamma(d), delta(d), lambda(d), xi(d);
        std::vector<double> column(static_cast<size_t>(nc));
        for (Eigen::Index i = 0; i < d; ++i) {
            size_t w = 0;
            for (Eigen::Index n = 0; n < data.size(); ++n) {
                if (data.labels[static_cast<size_t>(n)] == c) column[w++] = data.X(n, i);
            }
            const std::string where =
                "class " + std::to_string(c) + " dimension " + std::to_string(i + 1);
            ScalarJohnson fit;
            try {
                fit = fit_percentile(column, config.z_param, config.percentile_mode);
            } catch (const DegenerateSpacing& e) {
                throw DegenerateSpacing(where + ": " + e.what());
            } catch (const FamilyMismatch& e) {
                throw FamilyMismatch(where + ": " + e.what());
            }
            if (fit.family == FamilyTag::SN) {
                log_info(where + ": percentile geometry not S_U, using normal fallback");
            }
            gamma[i] = fit.gamma;
            delta[i] = fit.delta;
            lambda[i] = fit.lambda;
            xi[i] = fit.xi;
        }
        result.params.emplace_back(FamilyTag::SU, std::move(gamma), std::move(delta),
                                   std::move(lambda), std::move(xi));
    }
    result.weights = weight_set_from_params(result.params);
    return result;
}

double energy(const WeightSet& weights, const LabeledDataset& data, const Eigen::MatrixXd& teachers) {
    return accumulate(weights, data, &teachers, nullptr, nullptr);
}

Eigen::VectorXd gradient_w3(const WeightSet& weights, const LabeledDataset& data,
                            const Eigen::MatrixXd& teachers) {
    Eigen::VectorXd grad;
    accumulate(weights, data, &teachers, &grad, nullptr);
    return grad;
}

Eigen::MatrixXd hessian_w3(const WeightSet& weights, const LabeledDataset& data) {
    Eigen::MatrixXd hess;
    accumulate(weights, data, nullptr, nullptr, &hess);
    return hess;
}

FitResult fit_stage2(const WeightSet& weights, const LabeledDataset& data,
                     const Eigen::MatrixXd& teachers, const TrainConfig& config) {
    validate(weights);
    WeightSet work = weights;

    NewtonProblem problem;
    problem.derivatives = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad,
                              Eigen::MatrixXd& hess) {
        set_w3(work, x);
        double E = accumulate(work, data, &teachers, &grad, &hess);
        return E;
    };
    problem.value = [&](const Eigen::VectorXd& x) {
        set_w3(work, x);
        return accumulate(work, data, &teachers, nullptr, nullptr);
    };

    NewtonResult solved = newton_minimize(problem, flatten_w3(weights), config.newton_options());

    FitResult result;
    result.weights = weights;
    set_w3(result.weights, solved.x);
    result.energy_history = std::move(solved.history);
    result.newton_iterations = solved.iterations;
    result.converged = solved.converged;
    return result;
}

FitResult fit(const LabeledDataset& data, const TrainConfig& config) {
    Stage1Result stage1 = fit_stage1(data, config);

    const auto counts = class_counts(data);
    const auto N = static_cast<double>(data.size());
    const auto d = static_cast<int>(data.dim());
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(d, d);
    for (int c = 0; c < data.num_classes; ++c) {
        const double prior = static_cast<double>(counts[static_cast<size_t>(c)]) / N;
        stage1.weights.W3[static_cast<size_t>(c)] =
            w3_from_probabilistic(prior, stage1.params[static_cast<size_t>(c)], identity, 0.0);
    }

    const Eigen::MatrixXd teachers = one_hot_teachers(data.labels, data.num_classes);
    FitResult result = fit_stage2(stage1.weights, data, teachers, config);
    result.params = std::move(stage1.params);
    log_info("training finished: " + std::to_string(result.newton_iterations) +
             " newton iterations, final energy " + std::to_string(result.energy_history.back()));
    return result;
}

}  // namespace jsnet

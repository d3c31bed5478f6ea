#include "jsnet/logistic.hpp"

#include <cmath>

namespace jsnet {

namespace {

Eigen::VectorXd softmax(const Eigen::VectorXd& scores) {
    // std::exp, not Eigen's vectorized exp: the latter clamps its argument
    // near -709 and turns fully saturated classes into denormals instead of
    // exact zeros.
    Eigen::VectorXd out =
        (scores.array() - scores.maxCoeff()).unaryExpr([](double v) { return std::exp(v); });
    out /= out.sum();
    return out;
}

// Unflatten the (C-1) free rows, last row zero.
Eigen::MatrixXd unflatten(const Eigen::VectorXd& x, int C, int d) {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(C, d + 1);
    for (int c = 0; c < C - 1; ++c) {
        B.row(c) = x.segment(static_cast<Eigen::Index>(c) * (d + 1), d + 1).transpose();
    }
    return B;
}

double accumulate(const Eigen::MatrixXd& B, const LabeledDataset& data,
                  const Eigen::MatrixXd& teachers, Eigen::VectorXd* grad, Eigen::MatrixXd* hess) {
    const int C = static_cast<int>(B.rows());
    const int d = static_cast<int>(data.dim());
    const Eigen::Index nfree = static_cast<Eigen::Index>(C - 1) * (d + 1);
    if (grad) grad->setZero(nfree);
    if (hess) hess->setZero(nfree, nfree);

    double E = 0.0;
    Eigen::VectorXd u(d + 1);
    u[0] = 1.0;
    for (Eigen::Index n = 0; n < data.size(); ++n) {
        u.tail(d) = data.X.row(n).transpose();
        const Eigen::VectorXd scores = B * u;
        const double top = scores.maxCoeff();
        const double lse = top + std::log((scores.array() - top).exp().sum());
        for (int c = 0; c < C; ++c) {
            const double t = teachers(n, c);
            if (t != 0.0) E -= t * (scores[c] - lse);
        }
        if (!grad && !hess) continue;
        const Eigen::VectorXd O = softmax(scores);
        if (grad) {
            for (int c = 0; c < C - 1; ++c) {
                grad->segment(static_cast<Eigen::Index>(c) * (d + 1), d + 1) +=
                    (O[c] - teachers(n, c)) * u;
            }
        }
        if (hess) {
            for (int c = 0; c < C - 1; ++c) {
                for (int k = c; k < C - 1; ++k) {
                    const double coef = O[k] * ((c == k ? 1.0 : 0.0) - O[c]);
                    hess->block(static_cast<Eigen::Index>(c) * (d + 1),
                                static_cast<Eigen::Index>(k) * (d + 1), d + 1, d + 1)
                        .noalias() += coef * (u * u.transpose());
                }
            }
        }
    }
    if (hess) {
        for (int c = 0; c < C - 1; ++c) {
            for (int k = c + 1; k < C - 1; ++k) {
                hess->block(static_cast<Eigen::Index>(k) * (d + 1),
                            static_cast<Eigen::Index>(c) * (d + 1), d + 1, d + 1) =
                    hess->block(static_cast<Eigen::Index>(c) * (d + 1),
                                static_cast<Eigen::Index>(k) * (d + 1), d + 1, d + 1)
                        .transpose();
            }
        }
    }
    return E;
}

}  // namespace

LlrFitResult llr_fit(const LabeledDataset& data, const Eigen::MatrixXd& teachers,
                     const NewtonOptions& options, const std::optional<Eigen::MatrixXd>& init) {
    validate(data);
    const int C = data.num_classes;
    const int d = static_cast<int>(data.dim());
    if (C < 2) throw RangeError("llr_fit: need at least 2 classes");
    if (teachers.rows() != data.size() || teachers.cols() != C) {
        throw RangeError("llr_fit: teacher matrix must be N x C");
    }

    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(C - 1) * (d + 1));
    if (init) {
        if (init->rows() != C || init->cols() != d + 1) {
            throw RangeError("llr_fit: init must be C x (d+1)");
        }
        if (init->row(C - 1).cwiseAbs().maxCoeff() != 0.0) {
            throw RangeError("llr_fit: init's last row must be zero");
        }
        for (int c = 0; c < C - 1; ++c) {
            x0.segment(static_cast<Eigen::Index>(c) * (d + 1), d + 1) = init->row(c).transpose();
        }
    }

    NewtonProblem problem;
    problem.derivatives = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad,
                              Eigen::MatrixXd& hess) {
        return accumulate(unflatten(x, C, d), data, teachers, &grad, &hess);
    };
    problem.value = [&](const Eigen::VectorXd& x) {
        return accumulate(unflatten(x, C, d), data, teachers, nullptr, nullptr);
    };

    NewtonResult solved = newton_minimize(problem, std::move(x0), options);

    LlrFitResult result;
    result.model.B = unflatten(solved.x, C, d);
    result.model.C = C;
    result.model.d = d;
    result.energy_history = std::move(solved.history);
    result.iterations = solved.iterations;
    result.converged = solved.converged;
    return result;
}

PosteriorVector llr_predict(const LlrModel& model, const Eigen::VectorXd& x) {
    if (x.size() != model.d) throw RangeError("llr_predict: x has wrong dimension");
    Eigen::VectorXd u(model.d + 1);
    u[0] = 1.0;
    u.tail(model.d) = x;
    return PosteriorVector{softmax(model.B * u)};
}

int llr_predict_label(const LlrModel& model, const Eigen::VectorXd& x) {
    const PosteriorVector post = llr_predict(model, x);
    int best = 0;
    for (int c = 1; c < model.C; ++c) {
        if (post.probs[c] > post.probs[best]) best = c;
    }
    return best + 1;
}

}  // namespace jsnet

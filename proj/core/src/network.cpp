#include "jsnet/network.hpp"

#include <cmath>

namespace jsnet {

int expansion_size(int d) {
    if (d < 1) throw RangeError("expansion_size: d must be >= 1");
    return 1 + d * (d + 1) / 2;
}

int z_index(int k, int k_prime, int d) {
    if (k < 1 || k_prime < k || k_prime > d) {
        throw IndexError("z_index: need 1 <= k <= k' <= d, got k=" + std::to_string(k) +
                         " k'=" + std::to_string(k_prime) + " d=" + std::to_string(d));
    }
    // Row-major over ordered pairs (k <= k'), one bias slot in front.
    return 2 + (k - 1) * (d + 1) - k * (k - 1) / 2 + (k_prime - k);
}

void validate(const WeightSet& weights) {
    const int C = weights.C;
    const int d = weights.d;
    if (C < 1 || d < 1) throw RangeError("WeightSet: C and d must be >= 1");
    const auto c_sz = static_cast<size_t>(C);
    if (weights.W1.size() != c_sz || weights.W2.size() != c_sz || weights.W3.size() != c_sz) {
        throw RangeError("WeightSet: per-class block count differs from C");
    }
    const int H = expansion_size(d);
    for (int c = 0; c < C; ++c) {
        const auto& W1 = weights.W1[static_cast<size_t>(c)];
        const auto& W2 = weights.W2[static_cast<size_t>(c)];
        if (W1.rows() != d + 1 || W1.cols() != d || W2.rows() != d + 1 || W2.cols() != d) {
            throw RangeError("WeightSet: W1/W2 must be (d+1) x d");
        }
        if (weights.W3[static_cast<size_t>(c)].size() != H) {
            throw RangeError("WeightSet: W3 must have length 1 + d(d+1)/2");
        }
        for (int i = 0; i < d; ++i) {
            if (!(W1(i + 1, i) > 0.0)) throw RangeError("WeightSet: W1 diagonal (1/lambda) must be > 0");
            if (!(W2(i + 1, i) > 0.0)) throw RangeError("WeightSet: W2 diagonal (delta) must be > 0");
            for (int r = 1; r <= d; ++r) {
                if (r == i + 1) continue;
                if (W1(r, i) != 0.0 || W2(r, i) != 0.0) {
                    throw RangeError("WeightSet: off-structure entries must be exactly zero");
                }
            }
        }
    }
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> weights_from_johnson(const JohnsonParams& params) {
    const Eigen::Index d = params.dim();
    Eigen::MatrixXd W1 = Eigen::MatrixXd::Zero(d + 1, d);
    Eigen::MatrixXd W2 = Eigen::MatrixXd::Zero(d + 1, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        W1(0, i) = -params.xi[i] / params.lambda[i];
        W1(i + 1, i) = 1.0 / params.lambda[i];
        W2(0, i) = params.gamma[i];
        W2(i + 1, i) = params.delta[i];
    }
    return {std::move(W1), std::move(W2)};
}

WeightSet weight_set_from_params(const std::vector<JohnsonParams>& per_class) {
    if (per_class.empty()) throw RangeError("weight_set_from_params: no classes");
    WeightSet w;
    w.family = per_class.front().family;
    w.C = static_cast<int>(per_class.size());
    w.d = static_cast<int>(per_class.front().dim());
    const int H = expansion_size(w.d);
    for (const auto& params : per_class) {
        if (params.family != w.family || params.dim() != w.d) {
            throw RangeError("weight_set_from_params: classes disagree in family or dimension");
        }
        auto [W1, W2] = weights_from_johnson(params);
        w.W1.push_back(std::move(W1));
        w.W2.push_back(std::move(W2));
        w.W3.push_back(Eigen::VectorXd::Zero(H));
    }
    return w;
}

Eigen::VectorXd w3_from_probabilistic(double prior, const JohnsonParams& params,
                                      const Eigen::MatrixXd& precision, double logdet_sigma) {
    if (!(prior > 0.0 && prior <= 1.0)) throw RangeError("w3_from_probabilistic: prior must be in (0, 1]");
    const int d = static_cast<int>(params.dim());
    if (precision.rows() != d || precision.cols() != d) {
        throw RangeError("w3_from_probabilistic: precision has wrong shape");
    }
    Eigen::VectorXd w3 = Eigen::VectorXd::Zero(expansion_size(d));
    double constant = std::log(prior) - 0.5 * logdet_sigma;
    for (int i = 0; i < d; ++i) constant += std::log(params.delta[i] / params.lambda[i]);
    w3[0] = constant;
    for (int k = 1; k <= d; ++k) {
        for (int kp = k; kp <= d; ++kp) {
            const double factor = (k == kp) ? 1.0 : 2.0;
            w3[z_index(k, kp, d) - 1] = -0.5 * factor * precision(k - 1, kp - 1);
        }
    }
    return w3;
}

LayerTrace forward(const WeightSet& weights, const Eigen::VectorXd& x) {
    const int C = weights.C;
    const int d = weights.d;
    if (C < 1 || d < 1) throw RangeError("forward: empty weight set");
    if (x.size() != d) throw RangeError("forward: x has wrong dimension");
    const int H = expansion_size(d);

    LayerTrace trace;
    trace.o1.resize(d + 1);
    trace.o1[0] = 1.0;
    trace.o1.tail(d) = x;

    trace.o2.resize(static_cast<size_t>(C));
    trace.o3.resize(static_cast<size_t>(C));
    trace.o4.resize(static_cast<size_t>(C));
    Eigen::VectorXd scores(C);

    for (int c = 0; c < C; ++c) {
        const auto uc = static_cast<size_t>(c);
        const Eigen::VectorXd y = weights.W1[uc].transpose() * trace.o1;

        Eigen::VectorXd& o2 = trace.o2[uc];
        o2.resize(d + 2);
        o2[0] = 1.0;
        double log_jac = 0.0;
        for (int j = 0; j < d; ++j) {
            try {
                o2[j + 1] = g_eval(weights.family, y[j]);
                log_jac += std::log(g_prime(weights.family, y[j]));
            } catch (const DomainError& e) {
                throw DomainError(e.family(), x[j], j);
            }
        }
        o2[d + 1] = log_jac;

        trace.o3[uc] = weights.W2[uc].transpose() * o2.head(d + 1);

        Eigen::VectorXd& o4 = trace.o4[uc];
        o4.resize(H);
        o4[0] = 1.0;
        const Eigen::VectorXd& z = trace.o3[uc];
        for (int k = 1; k <= d; ++k) {
            for (int kp = k; kp <= d; ++kp) {
                o4[z_index(k, kp, d) - 1] = z[k - 1] * z[kp - 1];
            }
        }

        scores[c] = weights.W3[uc].dot(o4) + o2[d + 1];
    }

    const double top = scores.maxCoeff();
    // std::exp, not Eigen's vectorized exp: the latter clamps its argument
    // near -709 and turns fully saturated classes into denormals instead of
    // exact zeros.
    trace.o5 = (scores.array() - top).unaryExpr([](double v) { return std::exp(v); });
    trace.o5 /= trace.o5.sum();
    return trace;
}

std::pair<int, PosteriorVector> predict(const WeightSet& weights, const Eigen::VectorXd& x) {
    LayerTrace trace = forward(weights, x);
    int best = 0;
    for (int c = 1; c < weights.C; ++c) {
        if (trace.o5[c] > trace.o5[best]) best = c;
    }
    return {best + 1, PosteriorVector{std::move(trace.o5)}};
}

}  // namespace jsnet

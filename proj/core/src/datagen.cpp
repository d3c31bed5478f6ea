#include "jsnet/datagen.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "jsnet/rng.hpp"

namespace jsnet {

namespace {

JohnsonParams params2(double g1, double d1, double l1, double x1,
                      double g2, double d2, double l2, double x2) {
    Eigen::VectorXd gamma(2), delta(2), lambda(2), xi(2);
    gamma << g1, g2;
    delta << d1, d2;
    lambda << l1, l2;
    xi << x1, x2;
    return JohnsonParams(FamilyTag::SU, gamma, delta, lambda, xi);
}

Eigen::MatrixXd corr2(double r) {
    Eigen::MatrixXd sigma(2, 2);
    sigma << 1.0, r, r, 1.0;
    return sigma;
}

}  // namespace

GeneratorSpec table_preset(Eigen::Index samples_per_class, std::uint64_t seed) {
    GeneratorSpec spec;
    //                     gamma  delta lambda  xi     (dim 1, dim 2)
    spec.params.push_back(params2(-0.9, 0.9, 0.04, 0.15, 0.5, 0.8, 0.05, 0.70));
    spec.params.push_back(params2(0.5, 0.8, 0.05, 0.50, -0.5, 0.5, 0.01, 0.55));
    spec.sigma.push_back(corr2(0.6));
    spec.sigma.push_back(corr2(0.9));
    spec.samples_per_class = samples_per_class;
    spec.seed = seed;
    return spec;
}

std::vector<ClassModel> table_models() {
    const GeneratorSpec spec = table_preset();
    std::vector<ClassModel> models;
    for (size_t c = 0; c < spec.params.size(); ++c) {
        models.emplace_back(spec.params[c], 0.5, spec.sigma[c].inverse());
    }
    return models;
}

Eigen::MatrixXd sample_mvn(const Eigen::MatrixXd& sigma, Eigen::Index n, std::uint64_t seed) {
    if (sigma.rows() != sigma.cols()) throw FactorizationError("sample_mvn: sigma not square");
    const double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * (1.0 + sigma.cwiseAbs().maxCoeff())) {
        throw FactorizationError("sample_mvn: sigma not symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw FactorizationError("sample_mvn: sigma not positive definite");
    }
    const Eigen::MatrixXd L = llt.matrixL();

    Rng rng(seed);
    Eigen::MatrixXd draws(n, sigma.rows());
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < sigma.rows(); ++j) draws(i, j) = rng.normal();
    }
    return draws * L.transpose();
}

LabeledDataset generate(const GeneratorSpec& spec) {
    const auto C = static_cast<Eigen::Index>(spec.params.size());
    if (C == 0) throw RangeError("generate: no classes");
    if (spec.sigma.size() != spec.params.size()) {
        throw RangeError("generate: sigma count differs from class count");
    }
    if (spec.samples_per_class < 0) throw RangeError("generate: samples_per_class must be >= 0");
    const Eigen::Index d = spec.params.front().dim();

    LabeledDataset data;
    data.X.resize(C * spec.samples_per_class, d);
    data.labels.reserve(static_cast<size_t>(C * spec.samples_per_class));
    data.num_classes = static_cast<int>(C);

    for (Eigen::Index c = 0; c < C; ++c) {
        const auto uc = static_cast<size_t>(c);
        if (spec.params[uc].dim() != d) throw RangeError("generate: classes disagree in dimension");
        const Eigen::MatrixXd z = sample_mvn(spec.sigma[uc], spec.samples_per_class,
                                             Rng::substream(spec.seed, static_cast<std::uint64_t>(c)));
        for (Eigen::Index i = 0; i < spec.samples_per_class; ++i) {
            data.X.row(c * spec.samples_per_class + i) =
                inverse_transform(spec.params[uc], z.row(i).transpose()).transpose();
            data.labels.push_back(static_cast<int>(c) + 1);
        }
    }
    return data;
}

}  // namespace jsnet

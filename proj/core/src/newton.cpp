#include "jsnet/newton.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "jsnet/log.hpp"

namespace jsnet {

NewtonResult newton_minimize(const NewtonProblem& problem, Eigen::VectorXd x0,
                             const NewtonOptions& options) {
    const Eigen::Index n = x0.size();
    if (n == 0) throw RangeError("newton_minimize: empty parameter vector");

    NewtonResult result;
    result.x = std::move(x0);

    Eigen::VectorXd grad(n);
    Eigen::MatrixXd hess(n, n);
    double energy = problem.derivatives(result.x, grad, hess);
    if (!std::isfinite(energy)) throw SolveFailure("newton_minimize: non-finite initial energy");
    result.history.push_back(energy);

    for (int iter = 0; iter < options.max_iters; ++iter) {
        const double trace = hess.diagonal().sum();
        const double scale = trace / static_cast<double>(n);
        if (!(scale > 0.0) || !std::isfinite(scale)) {
            // A PSD Hessian with zero trace is the zero matrix (saturated
            // posteriors). Fine if the gradient has vanished too.
            if (grad.cwiseAbs().maxCoeff() < 1e-8) {
                result.converged = true;
                break;
            }
            throw SolveFailure("newton_minimize: Hessian trace not positive");
        }

        double mu = options.damping_init * scale;
        const double mu_max = options.damping_limit * scale;
        Eigen::VectorXd candidate;
        double candidate_energy = 0.0;
        bool accepted = false;
        while (true) {
            Eigen::LLT<Eigen::MatrixXd> llt(
                hess + mu * Eigen::MatrixXd::Identity(n, n));
            if (llt.info() == Eigen::Success) {
                candidate = result.x - llt.solve(grad);
                candidate_energy = problem.value(candidate);
                if (std::isfinite(candidate_energy) && candidate_energy <= energy) {
                    accepted = true;
                    break;
                }
            }
            mu *= options.damping_growth;
            if (mu > mu_max) break;
        }
        if (!accepted) {
            throw SolveFailure("newton_minimize: no acceptable step within damping budget");
        }

        result.x = std::move(candidate);
        const double previous = energy;
        energy = problem.derivatives(result.x, grad, hess);
        result.history.push_back(energy);
        ++result.iterations;
        log_debug("newton iter " + std::to_string(result.iterations) + " energy " +
                  std::to_string(energy) + " damping " + std::to_string(mu));

        if (std::abs(previous - energy) < options.rel_energy_tol * std::max(1.0, std::abs(previous))) {
            result.converged = true;
            break;
        }
    }

    result.value = energy;
    return result;
}

}  // namespace jsnet

#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "jsnet/errors.hpp"

namespace jsnet {

// Controls for the damped Newton loop shared by the network trainer and the
// logistic-regression baseline.
struct NewtonOptions {
    int max_iters = 100;
    double rel_energy_tol = 1e-10;  // stop when |dE| < tol * max(1, |E|)
    double damping_init = 1e-8;     // times mean(diag H)
    double damping_growth = 10.0;
    double damping_limit = 1e6;     // times mean(diag H); SolveFailure beyond
};

struct NewtonProblem {
    // Energy, gradient and Hessian at x in one pass. The Hessian must be
    // symmetric positive semidefinite for the damping scheme to make sense.
    std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad, Eigen::MatrixXd& hess)>
        derivatives;
    // Energy only; used to test candidate steps.
    std::function<double(const Eigen::VectorXd& x)> value;
};

struct NewtonResult {
    Eigen::VectorXd x;
    double value = 0.0;
    std::vector<double> history;  // accepted energies, starting with E(x0)
    int iterations = 0;           // accepted steps
    bool converged = false;       // energy tolerance met before max_iters
};

// Minimizes a convex-ish energy: solves (H + mu I) s = g, takes x - s, and
// accepts only non-increasing energies, growing mu on rejection. Throws
// SolveFailure when damping exceeds its budget without an acceptable step.
NewtonResult newton_minimize(const NewtonProblem& problem, Eigen::VectorXd x0,
                             const NewtonOptions& options = {});

}  // namespace jsnet

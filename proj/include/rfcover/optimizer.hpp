#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace rfcover {

/// Smooth objective: returns f(x) and writes the gradient into `grad`.
using SmoothObjective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct OptimizerOptions {
    int max_iterations = 500;
    double grad_tol = 1e-6;
    int history = 10;
};

struct OptimizerResult {
    Eigen::VectorXd x;
    double value = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Objective after each accepted step, starting with f(x0).
    std::vector<double> trace;
};

/// Limited-memory BFGS with Armijo backtracking. Every accepted step strictly
/// decreases the objective, so `trace` is non-increasing. Deterministic.
OptimizerResult minimize_lbfgs(const SmoothObjective& objective, Eigen::VectorXd x0,
                               const OptimizerOptions& options = {});

}  // namespace rfcover

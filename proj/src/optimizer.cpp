#include "rfcover/optimizer.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace rfcover {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

struct CurvaturePair {
    Eigen::VectorXd s;
    Eigen::VectorXd y;
    double rho;
};

Eigen::VectorXd two_loop_direction(const Eigen::VectorXd& grad, const std::deque<CurvaturePair>& pairs) {
    Eigen::VectorXd q = grad;
    std::vector<double> alpha(pairs.size());
    for (std::size_t k = pairs.size(); k-- > 0;) {
        alpha[k] = pairs[k].rho * pairs[k].s.dot(q);
        q -= alpha[k] * pairs[k].y;
    }
    if (!pairs.empty()) {
        const auto& last = pairs.back();
        q *= last.s.dot(last.y) / last.y.squaredNorm();
    }
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const double beta = pairs[k].rho * pairs[k].y.dot(q);
        q += (alpha[k] - beta) * pairs[k].s;
    }
    return -q;
}

}  // namespace

OptimizerResult minimize_lbfgs(const SmoothObjective& objective, Eigen::VectorXd x0, const OptimizerOptions& options) {
    if (options.max_iterations < 0) throw std::invalid_argument("minimize_lbfgs: negative iteration budget");
    if (options.history < 1) throw std::invalid_argument("minimize_lbfgs: history must be at least 1");

    OptimizerResult res;
    res.x = std::move(x0);
    Eigen::VectorXd grad(res.x.size());
    res.value = objective(res.x, grad);
    if (!std::isfinite(res.value)) throw std::runtime_error("minimize_lbfgs: objective is not finite at the start");
    res.grad_norm = grad.norm();
    res.trace.push_back(res.value);

    std::deque<CurvaturePair> pairs;
    Eigen::VectorXd trial_grad(res.x.size());

    while (res.grad_norm > options.grad_tol && res.iterations < options.max_iterations) {
        Eigen::VectorXd dir = two_loop_direction(grad, pairs);
        double slope = grad.dot(dir);
        if (!(slope < 0.0)) {
            pairs.clear();
            dir = -grad;
            slope = -grad.squaredNorm();
        }
        double step = pairs.empty() ? std::min(1.0, 1.0 / res.grad_norm) : 1.0;

        bool accepted = false;
        Eigen::VectorXd trial;
        double trial_value = 0.0;
        for (int bt = 0; bt < kMaxBacktracks; ++bt) {
            trial = res.x + step * dir;
            trial_value = objective(trial, trial_grad);
            if (std::isfinite(trial_value) && trial_value <= res.value + kArmijo * step * slope &&
                trial_value < res.value) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            if (!pairs.empty()) {
                // Quasi-Newton direction stalled; retry from steepest descent.
                pairs.clear();
                continue;
            }
            break;  // no further decrease representable
        }

        CurvaturePair pair{trial - res.x, trial_grad - grad, 0.0};
        const double sy = pair.s.dot(pair.y);
        if (sy > 1e-12 * pair.s.norm() * pair.y.norm()) {
            pair.rho = 1.0 / sy;
            pairs.push_back(std::move(pair));
            if (static_cast<int>(pairs.size()) > options.history) pairs.pop_front();
        }

        res.x = std::move(trial);
        res.value = trial_value;
        grad = trial_grad;
        res.grad_norm = grad.norm();
        ++res.iterations;
        res.trace.push_back(res.value);
    }
    res.converged = res.grad_norm <= options.grad_tol;
    return res;
}

}  // namespace rfcover

#pragma once

#include <array>
#include <span>
#include <vector>

#include "rfcover/classifier.hpp"
#include "rfcover/features.hpp"

namespace rfcover {

struct Dataset;

/// K_ij = k(x_i, x_j) using the closed-form kernel.
Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& X, KernelKind kernel, double sigma);
Eigen::MatrixXd gram_matrix(const Dataset& data, KernelKind kernel, double sigma);

/// Rows index A, columns index B.
Eigen::MatrixXd cross_gram(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, KernelKind kernel, double sigma);

/// Kernel logistic regression over [alpha; bias]:
///   (1/n) sum_i log(1 + exp(-y_i ((K alpha)_i + bias))) + (lambda/2) alpha^T K alpha
class KernelLogisticObjective {
public:
    KernelLogisticObjective(const Eigen::MatrixXd& K, const BinaryTargets& y, double reg_lambda);

    double operator()(const Eigen::VectorXd& params, Eigen::VectorXd& grad) const;
    double value(const Eigen::VectorXd& params) const;
    Eigen::Index parameter_count() const noexcept { return K_.cols() + 1; }

private:
    const Eigen::MatrixXd& K_;
    const BinaryTargets& y_;
    double lambda_;
};

struct GramModel {
    Eigen::VectorXd alpha;
    double bias = 0.0;
    KernelKind kernel = KernelKind::Gaussian;
    double sigma = 1.0;
    Eigen::MatrixXd support_points;
    Label task_class = Label::None;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;

    Eigen::VectorXd decision(const Eigen::MatrixXd& X) const;
};

/// Trains against a precomputed Gram matrix of `X`.
GramModel train_kernel_logistic(const Eigen::MatrixXd& X, const Eigen::MatrixXd& K, const BinaryTargets& y,
                                KernelKind kernel, double sigma, const TrainOptions& options = {});
/// Builds the Gram matrix itself.
GramModel train_kernel_logistic(const Eigen::MatrixXd& X, const BinaryTargets& y, KernelKind kernel, double sigma,
                                const TrainOptions& options = {});

/// One-vs-all over a single shared Gram matrix, models indexed by class_slot().
struct KernelMultiClassModel {
    std::array<GramModel, 3> models;

    std::vector<Label> predict(const Eigen::MatrixXd& X) const;
    Label predict(const Eigen::Vector2d& x) const;
};

KernelMultiClassModel train_kernel_one_vs_all(const Eigen::MatrixXd& X, std::span<const Label> labels,
                                              KernelKind kernel, double sigma, const TrainOptions& options = {});

double accuracy(const KernelMultiClassModel& model, const Dataset& data);

}  // namespace rfcover

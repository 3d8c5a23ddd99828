#include "rfcover/kernel_baseline.hpp"

#include <cmath>

#include "rfcover/scenario.hpp"

namespace rfcover {

namespace {

double sigmoid(double t) noexcept {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

}  // namespace

Eigen::MatrixXd cross_gram(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, KernelKind kernel, double sigma) {
    if (A.cols() != B.cols()) throw std::invalid_argument("cross_gram: dimension mismatch");
    if (!A.allFinite() || !B.allFinite()) throw std::invalid_argument("gram_matrix: non-finite coordinates");
    if (!(sigma > 0.0)) throw std::invalid_argument("gram_matrix: sigma must be positive");

    Eigen::MatrixXd K(A.rows(), B.rows());
    if (kernel == KernelKind::Gaussian) {
        const Eigen::VectorXd a2 = A.rowwise().squaredNorm();
        const Eigen::VectorXd b2 = B.rowwise().squaredNorm();
        K.noalias() = -2.0 * A * B.transpose();
        K.colwise() += a2;
        K.rowwise() += b2.transpose();
        K = (K.array().max(0.0) * (-0.5 * sigma * sigma)).exp();
        return K;
    }
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        const Eigen::VectorXd a = A.row(i).transpose();
        for (Eigen::Index j = 0; j < B.rows(); ++j) K(i, j) = kernel_value(kernel, sigma, a, B.row(j).transpose());
    }
    return K;
}

Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& X, KernelKind kernel, double sigma) {
    if (X.rows() < 1) throw std::invalid_argument("gram_matrix: need at least one point");
    Eigen::MatrixXd K = cross_gram(X, X, kernel, sigma);
    // Exact symmetry; the Gaussian fast path can differ in the last ulp.
    K = 0.5 * (K + K.transpose()).eval();
    if (kernel == KernelKind::Gaussian) K.diagonal().setOnes();
    return K;
}

Eigen::MatrixXd gram_matrix(const Dataset& data, KernelKind kernel, double sigma) {
    return gram_matrix(data.locations(), kernel, sigma);
}

KernelLogisticObjective::KernelLogisticObjective(const Eigen::MatrixXd& K, const BinaryTargets& y, double reg_lambda)
    : K_(K), y_(y), lambda_(reg_lambda) {
    if (K.rows() != K.cols()) throw std::invalid_argument("KernelLogisticObjective: K must be square");
    if (K.rows() != y.size()) throw std::invalid_argument("KernelLogisticObjective: K and targets differ in size");
    if (!(reg_lambda >= 0.0)) throw std::invalid_argument("KernelLogisticObjective: reg_lambda must be nonnegative");
}

double KernelLogisticObjective::operator()(const Eigen::VectorXd& params, Eigen::VectorXd& grad) const {
    const Eigen::Index n = K_.rows();
    const auto alpha = params.head(n);
    const double bias = params(n);
    const double inv_n = 1.0 / static_cast<double>(n);

    const Eigen::VectorXd Ka = K_ * alpha;
    Eigen::VectorXd r(n);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = -y_(i) * (Ka(i) + bias);
        loss += softplus(t);
        r(i) = -y_(i) * sigmoid(t) * inv_n;
    }
    // K symmetric: d/dalpha = K r + lambda K alpha = K (r + lambda alpha).
    grad.resize(n + 1);
    grad.head(n) = K_ * (r + lambda_ * alpha);
    grad(n) = r.sum();
    return loss * inv_n + 0.5 * lambda_ * alpha.dot(Ka);
}

double KernelLogisticObjective::value(const Eigen::VectorXd& params) const {
    Eigen::VectorXd unused;
    return (*this)(params, unused);
}

Eigen::VectorXd GramModel::decision(const Eigen::MatrixXd& X) const {
    return (cross_gram(X, support_points, kernel, sigma) * alpha).array() + bias;
}

GramModel train_kernel_logistic(const Eigen::MatrixXd& X, const Eigen::MatrixXd& K, const BinaryTargets& y,
                                KernelKind kernel, double sigma, const TrainOptions& options) {
    if (X.rows() != y.size()) throw std::invalid_argument("train_kernel_logistic: X rows and targets differ");
    if (X.rows() < 2) throw std::invalid_argument("train_kernel_logistic: need at least two samples");
    bool has_pos = false, has_neg = false;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) == 1.0) has_pos = true;
        else if (y(i) == -1.0) has_neg = true;
        else throw std::invalid_argument("train_kernel_logistic: targets must be +1 or -1");
    }
    if (!has_pos || !has_neg) throw std::invalid_argument("train_kernel_logistic: both classes must be present");

    const KernelLogisticObjective objective(K, y, options.reg_lambda);
    OptimizerOptions opt;
    opt.max_iterations = options.max_iterations;
    opt.grad_tol = options.grad_tol;
    auto result = minimize_lbfgs(std::cref(objective), Eigen::VectorXd::Zero(objective.parameter_count()), opt);

    GramModel model;
    model.alpha = result.x.head(X.rows());
    model.bias = result.x(X.rows());
    model.kernel = kernel;
    model.sigma = sigma;
    model.support_points = X;
    model.iterations = result.iterations;
    model.converged = result.converged;
    model.objective_trace = std::move(result.trace);
    return model;
}

GramModel train_kernel_logistic(const Eigen::MatrixXd& X, const BinaryTargets& y, KernelKind kernel, double sigma,
                                const TrainOptions& options) {
    const Eigen::MatrixXd K = gram_matrix(X, kernel, sigma);
    return train_kernel_logistic(X, K, y, kernel, sigma, options);
}

std::vector<Label> KernelMultiClassModel::predict(const Eigen::MatrixXd& X) const {
    // All three detectors share support points and kernel; evaluate K once.
    const auto& ref = models[0];
    const Eigen::MatrixXd Kx = cross_gram(X, ref.support_points, ref.kernel, ref.sigma);
    std::array<Eigen::VectorXd, 3> f;
    for (std::size_t c = 0; c < 3; ++c) f[c] = (Kx * models[c].alpha).array() + models[c].bias;
    std::vector<Label> out(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i) out[static_cast<std::size_t>(i)] = argmax_label({f[0](i), f[1](i), f[2](i)});
    return out;
}

Label KernelMultiClassModel::predict(const Eigen::Vector2d& x) const {
    return predict(Eigen::MatrixXd(x.transpose())).front();
}

KernelMultiClassModel train_kernel_one_vs_all(const Eigen::MatrixXd& X, std::span<const Label> labels,
                                              KernelKind kernel, double sigma, const TrainOptions& options) {
    const Eigen::MatrixXd K = gram_matrix(X, kernel, sigma);
    KernelMultiClassModel model;
    for (std::size_t c = 0; c < 3; ++c) {
        const BinaryTargets y = one_vs_rest_targets(labels, kClassOrder[c]);
        model.models[c] = train_kernel_logistic(X, K, y, kernel, sigma, options);
        model.models[c].task_class = kClassOrder[c];
    }
    return model;
}

double accuracy(const KernelMultiClassModel& model, const Dataset& data) {
    if (data.empty()) throw std::invalid_argument("accuracy: empty dataset");
    const auto predicted = model.predict(data.locations());
    const auto truth = data.labels();
    return accuracy(predicted, truth);
}

}  // namespace rfcover

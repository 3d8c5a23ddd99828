#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "rfcover/features.hpp"
#include "rfcover/optimizer.hpp"

namespace rfcover {

struct Dataset;

struct TrainOptions {
    double reg_lambda = 1e-4;
    int max_iterations = 500;
    double grad_tol = 1e-6;
};

/// (1/n) sum_i log(1 + exp(-y_i (z_i.theta + bias))) + (lambda/2) |theta|^2
/// over the parameter vector [theta; bias]. The bias is not penalized.
class LogisticObjective {
public:
    LogisticObjective(const Eigen::MatrixXd& Z, const BinaryTargets& y, double reg_lambda);

    double operator()(const Eigen::VectorXd& params, Eigen::VectorXd& grad) const;
    double value(const Eigen::VectorXd& params) const;
    Eigen::Index parameter_count() const noexcept { return Z_.cols() + 1; }

private:
    const Eigen::MatrixXd& Z_;
    const BinaryTargets& y_;
    double lambda_;
};

/// log(1 + exp(t)) without overflow.
double softplus(double t) noexcept;

struct BinaryModel {
    Eigen::VectorXd theta;
    double bias = 0.0;
    double reg_lambda = 0.0;
    Label task_class = Label::None;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;

    /// Decision values Z theta + bias.
    Eigen::VectorXd decision(const Eigen::MatrixXd& Z) const;
};

/// Minimizes LogisticObjective with L-BFGS. Requires at least two rows, both
/// classes present and finite entries.
BinaryModel train_binary(const Eigen::MatrixXd& Z, const BinaryTargets& y, const TrainOptions& options = {});

/// +1 where labels == positive, -1 elsewhere.
BinaryTargets one_vs_rest_targets(std::span<const Label> labels, Label positive);

/// argmax over scores ordered as kClassOrder; ties go to the earlier class.
Label argmax_label(const std::array<double, 3>& scores) noexcept;

/// Three binary detectors, each with its own feature set, indexed by
/// class_slot().
struct MultiClassModel {
    std::array<BinaryModel, 3> models;
    std::array<FeatureSet, 3> feature_sets;

    std::array<double, 3> scores(const Eigen::Vector2d& x) const;
    Label predict(const Eigen::Vector2d& x) const;
    std::vector<Label> predict(const Eigen::MatrixXd& X) const;
    void validate() const;
};

/// Per-task feature set and the transformed training matrix built from it.
struct TaskFeatures {
    FeatureSet features;
    FeatureMatrix Z;
};

/// Trains one detector per class on the matching TaskFeatures entry.
MultiClassModel train_one_vs_all(const std::array<TaskFeatures, 3>& tasks, std::span<const Label> labels,
                                 const TrainOptions& options = {});

Label predict_multiclass(const MultiClassModel& model, const Eigen::Vector2d& x);

/// Fraction of correct predictions. Throws on an empty dataset.
double accuracy(const MultiClassModel& model, const Dataset& data);
double accuracy(std::span<const Label> predicted, std::span<const Label> truth);

/// Flat text serialization:
///
///   rfcover-model 1
///   class <+1|0|-1>
///   kernel <name> map <name> sampling <iid|orthogonal> sigma <value>
///   features <M> <d>
///   <nu_1 ... nu_d b>          (M lines)
///   theta <K> <theta_1 ... theta_K>
///   bias <value>
///   lambda <value>
///   end
///
/// with one class block per detector, in kClassOrder.
void write_model(std::ostream& out, const MultiClassModel& model);
MultiClassModel read_model(std::istream& in);

}  // namespace rfcover

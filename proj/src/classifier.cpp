#include "rfcover/classifier.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "rfcover/scenario.hpp"

namespace rfcover {

double softplus(double t) noexcept { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

namespace {

double sigmoid(double t) noexcept {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

}  // namespace

LogisticObjective::LogisticObjective(const Eigen::MatrixXd& Z, const BinaryTargets& y, double reg_lambda)
    : Z_(Z), y_(y), lambda_(reg_lambda) {
    if (Z.rows() != y.size()) throw std::invalid_argument("LogisticObjective: Z rows and targets differ");
    if (!(reg_lambda >= 0.0)) throw std::invalid_argument("LogisticObjective: reg_lambda must be nonnegative");
}

double LogisticObjective::operator()(const Eigen::VectorXd& params, Eigen::VectorXd& grad) const {
    const Eigen::Index M = Z_.cols();
    const auto theta = params.head(M);
    const double bias = params(M);
    const double inv_n = 1.0 / static_cast<double>(Z_.rows());

    const Eigen::VectorXd f = (Z_ * theta).array() + bias;
    Eigen::VectorXd r(f.size());
    double loss = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) {
        const double t = -y_(i) * f(i);
        loss += softplus(t);
        r(i) = -y_(i) * sigmoid(t) * inv_n;
    }
    grad.resize(M + 1);
    grad.head(M) = Z_.transpose() * r + lambda_ * theta;
    grad(M) = r.sum();
    return loss * inv_n + 0.5 * lambda_ * theta.squaredNorm();
}

double LogisticObjective::value(const Eigen::VectorXd& params) const {
    Eigen::VectorXd unused;
    return (*this)(params, unused);
}

Eigen::VectorXd BinaryModel::decision(const Eigen::MatrixXd& Z) const {
    if (Z.cols() != theta.size()) throw std::invalid_argument("BinaryModel: feature dimension mismatch");
    return (Z * theta).array() + bias;
}

BinaryModel train_binary(const Eigen::MatrixXd& Z, const BinaryTargets& y, const TrainOptions& options) {
    if (Z.rows() != y.size()) throw std::invalid_argument("train_binary: Z rows and targets differ");
    if (Z.rows() < 2) throw std::invalid_argument("train_binary: need at least two samples");
    if (!Z.allFinite()) throw std::invalid_argument("train_binary: non-finite entries in Z");
    bool has_pos = false, has_neg = false;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) == 1.0) has_pos = true;
        else if (y(i) == -1.0) has_neg = true;
        else throw std::invalid_argument("train_binary: targets must be +1 or -1");
    }
    if (!has_pos || !has_neg) throw std::invalid_argument("train_binary: both classes must be present");

    const LogisticObjective objective(Z, y, options.reg_lambda);
    OptimizerOptions opt;
    opt.max_iterations = options.max_iterations;
    opt.grad_tol = options.grad_tol;
    auto result = minimize_lbfgs(std::cref(objective), Eigen::VectorXd::Zero(objective.parameter_count()), opt);

    BinaryModel model;
    model.theta = result.x.head(Z.cols());
    model.bias = result.x(Z.cols());
    model.reg_lambda = options.reg_lambda;
    model.iterations = result.iterations;
    model.converged = result.converged;
    model.objective_trace = std::move(result.trace);
    return model;
}

BinaryTargets one_vs_rest_targets(std::span<const Label> labels, Label positive) {
    BinaryTargets y(static_cast<Eigen::Index>(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i) y(static_cast<Eigen::Index>(i)) = labels[i] == positive ? 1.0 : -1.0;
    return y;
}

Label argmax_label(const std::array<double, 3>& scores) noexcept {
    std::size_t best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c) {
        if (scores[c] > scores[best]) best = c;
    }
    return kClassOrder[best];
}

std::array<double, 3> MultiClassModel::scores(const Eigen::Vector2d& x) const {
    std::array<double, 3> s{};
    for (std::size_t c = 0; c < 3; ++c) {
        const Eigen::VectorXd z = transform_point(x, feature_sets[c]);
        if (z.size() != models[c].theta.size()) throw std::invalid_argument("MultiClassModel: dimension mismatch");
        s[c] = z.dot(models[c].theta) + models[c].bias;
    }
    return s;
}

Label MultiClassModel::predict(const Eigen::Vector2d& x) const { return argmax_label(scores(x)); }

std::vector<Label> MultiClassModel::predict(const Eigen::MatrixXd& X) const {
    std::array<Eigen::VectorXd, 3> f;
    for (std::size_t c = 0; c < 3; ++c) f[c] = models[c].decision(transform(X, feature_sets[c]).Z);
    std::vector<Label> out(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i) out[static_cast<std::size_t>(i)] = argmax_label({f[0](i), f[1](i), f[2](i)});
    return out;
}

void MultiClassModel::validate() const {
    for (std::size_t c = 0; c < 3; ++c) {
        if (models[c].task_class != kClassOrder[c]) throw std::invalid_argument("MultiClassModel: class order broken");
        if (static_cast<std::size_t>(models[c].theta.size()) != feature_sets[c].output_columns())
            throw std::invalid_argument("MultiClassModel: theta size does not match its feature set");
    }
}

MultiClassModel train_one_vs_all(const std::array<TaskFeatures, 3>& tasks, std::span<const Label> labels,
                                 const TrainOptions& options) {
    MultiClassModel model;
    for (std::size_t c = 0; c < 3; ++c) {
        const BinaryTargets y = one_vs_rest_targets(labels, kClassOrder[c]);
        model.models[c] = train_binary(tasks[c].Z.Z, y, options);
        model.models[c].task_class = kClassOrder[c];
        model.feature_sets[c] = tasks[c].features;
    }
    model.validate();
    return model;
}

Label predict_multiclass(const MultiClassModel& model, const Eigen::Vector2d& x) { return model.predict(x); }

double accuracy(std::span<const Label> predicted, std::span<const Label> truth) {
    if (truth.empty()) throw std::invalid_argument("accuracy: empty dataset");
    if (predicted.size() != truth.size()) throw std::invalid_argument("accuracy: size mismatch");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

double accuracy(const MultiClassModel& model, const Dataset& data) {
    if (data.empty()) throw std::invalid_argument("accuracy: empty dataset");
    const auto predicted = model.predict(data.locations());
    const auto truth = data.labels();
    return accuracy(predicted, truth);
}

namespace {

Sampling parse_sampling(const std::string& s) {
    if (s == "iid") return Sampling::Iid;
    if (s == "orthogonal") return Sampling::Orthogonal;
    throw std::runtime_error("model: unknown sampling '" + s + "'");
}

FeatureMap parse_map(const std::string& s) {
    if (s == "cosine") return FeatureMap::Cosine;
    if (s == "cos_sin_pair") return FeatureMap::CosSinPair;
    if (s == "linear") return FeatureMap::Linear;
    throw std::runtime_error("model: unknown feature map '" + s + "'");
}

void expect_token(std::istream& in, const std::string& want) {
    std::string tok;
    if (!(in >> tok) || tok != want) throw std::runtime_error("model: expected '" + want + "', got '" + tok + "'");
}

}  // namespace

void write_model(std::ostream& out, const MultiClassModel& model) {
    model.validate();
    out.precision(17);
    out << "rfcover-model 1\n";
    for (std::size_t c = 0; c < 3; ++c) {
        const auto& fs = model.feature_sets[c];
        const auto& bm = model.models[c];
        out << "class " << to_int(bm.task_class) << '\n';
        out << "kernel " << kernel_name(fs.kernel) << " map " << feature_map_name(fs.map) << " sampling "
            << (fs.sampling == Sampling::Iid ? "iid" : "orthogonal") << " sigma " << fs.sigma << '\n';
        out << "features " << fs.size() << ' ' << fs.dimension() << '\n';
        for (Eigen::Index m = 0; m < fs.frequencies.rows(); ++m) {
            for (Eigen::Index l = 0; l < fs.frequencies.cols(); ++l) out << fs.frequencies(m, l) << ' ';
            out << fs.phases(m) << '\n';
        }
        out << "theta " << bm.theta.size();
        for (Eigen::Index k = 0; k < bm.theta.size(); ++k) out << ' ' << bm.theta(k);
        out << "\nbias " << bm.bias << "\nlambda " << bm.reg_lambda << "\nend\n";
    }
}

MultiClassModel read_model(std::istream& in) {
    expect_token(in, "rfcover-model");
    int version = 0;
    if (!(in >> version) || version != 1) throw std::runtime_error("model: unsupported version");
    MultiClassModel model;
    for (std::size_t c = 0; c < 3; ++c) {
        expect_token(in, "class");
        int cls = 0;
        in >> cls;
        std::string kernel, map, sampling;
        double sigma = 0.0;
        expect_token(in, "kernel");
        in >> kernel;
        expect_token(in, "map");
        in >> map;
        expect_token(in, "sampling");
        in >> sampling;
        expect_token(in, "sigma");
        in >> sigma;
        expect_token(in, "features");
        Eigen::Index M = 0, d = 0;
        in >> M >> d;
        if (!in || M < 0 || d < 1) throw std::runtime_error("model: bad feature header");
        FeatureSet fs;
        fs.kernel = parse_kernel_kind(kernel);
        fs.map = parse_map(map);
        fs.sampling = parse_sampling(sampling);
        fs.sigma = sigma;
        fs.frequencies.resize(M, d);
        fs.phases.resize(M);
        for (Eigen::Index m = 0; m < M; ++m) {
            for (Eigen::Index l = 0; l < d; ++l) in >> fs.frequencies(m, l);
            in >> fs.phases(m);
        }
        fs.validate();
        BinaryModel bm;
        expect_token(in, "theta");
        Eigen::Index K = 0;
        in >> K;
        if (!in || K < 0) throw std::runtime_error("model: bad theta header");
        bm.theta.resize(K);
        for (Eigen::Index k = 0; k < K; ++k) in >> bm.theta(k);
        expect_token(in, "bias");
        in >> bm.bias;
        expect_token(in, "lambda");
        in >> bm.reg_lambda;
        expect_token(in, "end");
        if (!in) throw std::runtime_error("model: truncated input");
        bm.task_class = label_from_int(cls);
        bm.converged = true;
        const std::size_t slot = class_slot(bm.task_class);
        model.models[slot] = std::move(bm);
        model.feature_sets[slot] = std::move(fs);
    }
    model.validate();
    return model;
}

}  // namespace rfcover

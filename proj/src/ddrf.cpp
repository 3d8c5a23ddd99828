#include "rfcover/ddrf.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <ostream>
#include <string>

namespace rfcover {

namespace {

void check_targets(const BinaryTargets& y) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) != 1.0 && y(i) != -1.0) throw std::invalid_argument("score_pool: targets must be +1 or -1");
    }
}

}  // namespace

ScoredPool score_pool(FeatureSet pool, const FeatureMatrix& Z, const BinaryTargets& y) {
    if (Z.rows() != y.size())
        throw std::invalid_argument("score_pool: Z has " + std::to_string(Z.rows()) + " rows but y has " +
                                    std::to_string(y.size()) + " entries");
    if (static_cast<std::size_t>(Z.cols()) != pool.size())
        throw std::invalid_argument("score_pool: Z column count differs from pool size");
    check_targets(y);

    ScoredPool out;
    out.pool = std::move(pool);
    const Eigen::VectorXd v = Z.Z.transpose() * y;
    const double total = v.squaredNorm();
    if (!(total > 0.0)) {
        out.degenerate = true;
        out.weights = Eigen::VectorXd::Constant(v.size(), 1.0 / static_cast<double>(v.size()));
        return out;
    }
    out.weights = v.array().square() / total;
    return out;
}

SelectedFeatures select_top(const ScoredPool& scored, std::size_t M) {
    const auto pool_size = static_cast<std::size_t>(scored.weights.size());
    if (M < 1 || M >= pool_size)
        throw std::invalid_argument("select_top: need 1 <= M < pool size (M=" + std::to_string(M) +
                                    ", pool=" + std::to_string(pool_size) + ")");

    std::vector<std::size_t> order(pool_size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto& w = scored.weights;
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(M), order.end(),
                      [&w](std::size_t a, std::size_t b) {
                          const double wa = w(static_cast<Eigen::Index>(a));
                          const double wb = w(static_cast<Eigen::Index>(b));
                          return wa != wb ? wa > wb : a < b;
                      });
    order.resize(M);

    SelectedFeatures out;
    out.selected = scored.pool.select(order);
    out.indices = std::move(order);
    return out;
}

DdrfResult select_from_pool(const FeatureSet& pool, const FeatureMatrix& pool_Z, const Eigen::MatrixXd& X,
                            const BinaryTargets& y, std::size_t M) {
    DdrfResult out;
    out.scored = score_pool(pool, pool_Z, y);
    if (out.scored.degenerate) {
        std::clog << "warning: data-driven scores vanished; falling back to the first " << M << " pool features\n";
    }
    out.selection = select_top(out.scored, M);
    out.Z = transform(X, out.selection.selected);
    return out;
}

DdrfResult ddrf_pipeline(const Eigen::MatrixXd& X, const BinaryTargets& y, std::size_t M, std::size_t M0,
                         double sigma, std::uint64_t seed) {
    if (M < 1 || M >= M0) throw std::invalid_argument("ddrf_pipeline: need 1 <= M < M0");
    const FeatureSet pool = sample_features(KernelKind::Gaussian, sigma, M0, seed, static_cast<std::size_t>(X.cols()));
    const FeatureMatrix pool_Z = transform(X, pool);
    return select_from_pool(pool, pool_Z, X, y, M);
}

void write_scores_csv(std::ostream& out, const ScoredPool& scored, const SelectedFeatures& selection) {
    std::vector<char> chosen(static_cast<std::size_t>(scored.weights.size()), 0);
    for (std::size_t idx : selection.indices) chosen.at(idx) = 1;
    out << "pool_index,weight,selected\n";
    out.precision(17);
    for (Eigen::Index i = 0; i < scored.weights.size(); ++i) {
        out << i << ',' << scored.weights(i) << ',' << int(chosen[static_cast<std::size_t>(i)]) << '\n';
    }
}

}  // namespace rfcover

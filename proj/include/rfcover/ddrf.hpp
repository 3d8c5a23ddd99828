#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rfcover/features.hpp"

namespace rfcover {

/// A feature pool together with its data-driven weights.
///
/// For the +/-1 label vector y and the pool matrix Z, the weight of feature i
/// is [Q]_ii / tr(Q) with Q = Z^T y y^T Z. Because Q is rank one this is
/// v_i^2 / |v|^2 with v = Z^T y, so Q is never formed.
struct ScoredPool {
    FeatureSet pool;
    Eigen::VectorXd weights;
    /// Set when every score vanished (|v| = 0). Weights are then uniform and
    /// select_top() degrades to the first M pool features.
    bool degenerate = false;
};

struct SelectedFeatures {
    FeatureSet selected;
    /// Pool positions (0-based), by descending weight; ties by pool index.
    std::vector<std::size_t> indices;
};

/// Weights only. Throws if the sizes disagree or y has an entry other than +/-1.
ScoredPool score_pool(FeatureSet pool, const FeatureMatrix& Z, const BinaryTargets& y);

/// Requires 1 <= M < pool size.
SelectedFeatures select_top(const ScoredPool& scored, std::size_t M);

/// Top-M selection from an already transformed pool. The returned matrix is
/// rebuilt over the selected features with the 1/sqrt(M) normalizer.
struct DdrfResult {
    SelectedFeatures selection;
    FeatureMatrix Z;
    ScoredPool scored;
};

DdrfResult select_from_pool(const FeatureSet& pool, const FeatureMatrix& pool_Z, const Eigen::MatrixXd& X,
                            const BinaryTargets& y, std::size_t M);

/// Full selection run: Gaussian pool of M0 features, score against y, keep the
/// top M.
DdrfResult ddrf_pipeline(const Eigen::MatrixXd& X, const BinaryTargets& y, std::size_t M, std::size_t M0,
                         double sigma, std::uint64_t seed);

/// CSV `pool_index,weight,selected`, one row per pool feature.
void write_scores_csv(std::ostream& out, const ScoredPool& scored, const SelectedFeatures& selection);

}  // namespace rfcover

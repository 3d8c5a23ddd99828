#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "rfcover/common.hpp"

namespace rfcover {

struct Dataset;

/// Shift-invariant (and linear) kernels with a known spectral sampling law.
enum class KernelKind { Gaussian, Linear, Laplacian, Cauchy };

/// How a sampled frequency is turned into matrix columns.
///   Cosine      sqrt(2) cos(nu.x + b)      one column per feature
///   CosSinPair  [cos(nu.x), sin(nu.x)]    two columns per feature
///   Linear      nu.x                       one column per feature
enum class FeatureMap { Cosine, CosSinPair, Linear };

enum class Sampling { Iid, Orthogonal };

KernelKind parse_kernel_kind(std::string_view name);
std::string_view kernel_name(KernelKind kind) noexcept;
std::string_view feature_map_name(FeatureMap map) noexcept;

struct SpectralFeature {
    Eigen::VectorXd nu;
    double b = 0.0;
};

/// A batch of random features stored column-wise: `frequencies` is M x d,
/// `phases` has length M (all zero for the pair map).
struct FeatureSet {
    Eigen::MatrixXd frequencies;
    Eigen::VectorXd phases;
    KernelKind kernel = KernelKind::Gaussian;
    FeatureMap map = FeatureMap::Cosine;
    Sampling sampling = Sampling::Iid;
    double sigma = 1.0;

    std::size_t size() const noexcept { return static_cast<std::size_t>(frequencies.rows()); }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(frequencies.cols()); }
    /// Columns produced by transform().
    std::size_t output_columns() const noexcept { return map == FeatureMap::CosSinPair ? 2 * size() : size(); }
    SpectralFeature feature(std::size_t m) const;

    /// Subset in the given order.
    FeatureSet select(const std::vector<std::size_t>& indices) const;
    void validate() const;
};

/// Transformed data matrix Z with the 1/sqrt(M) normalizer folded in.
struct FeatureMatrix {
    Eigen::MatrixXd Z;
    double scale = 1.0;

    Eigen::Index rows() const noexcept { return Z.rows(); }
    Eigen::Index cols() const noexcept { return Z.cols(); }
};

/// Draws M i.i.d. features from the spectral law of `kernel`, with
/// frequencies scaled by `sigma`:
///   Gaussian, Linear  nu ~ N(0, sigma^2 I)
///   Laplacian         nu(l) ~ sigma * Cauchy(0, 1)
///   Cauchy            nu(l) ~ sigma * Laplace(0, 1)
/// Phases are U(0, 2pi) except for the linear map, which ignores them.
FeatureSet sample_features(KernelKind kernel, double sigma, std::size_t M, std::uint64_t seed,
                           std::size_t dimension = 2);

/// Orthogonal random features for the Gaussian kernel. Frequencies come in
/// d x d blocks: Q from the QR factorization of a standard Gaussian matrix
/// (R with nonnegative diagonal), each row rescaled by an independent chi(d)
/// draw and then by sigma. Uses the [cos, sin] pair map.
FeatureSet sample_orf_features(double sigma, std::size_t M, std::uint64_t seed, std::size_t dimension = 2);

FeatureMatrix transform(const Eigen::MatrixXd& X, const FeatureSet& fs);
FeatureMatrix transform(const Dataset& data, const FeatureSet& fs);

/// Feature vector of a single location with the 1/sqrt(M) scale applied.
Eigen::VectorXd transform_point(const Eigen::VectorXd& x, const FeatureSet& fs);

/// Monte-Carlo kernel estimate (1/M) sum_m phi(x, w_m) phi(x', w_m).
double approximate_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& x2, const FeatureSet& fs);

/// Closed-form kernel the samplers target (sigma scales the input difference).
///   Gaussian   exp(-sigma^2 |x - x'|^2 / 2)
///   Linear     sigma^2 <x, x'>
///   Laplacian  exp(-sigma |x - x'|_1)
///   Cauchy     prod_l 1 / (1 + sigma^2 (x(l) - x'(l))^2)
double kernel_value(KernelKind kernel, double sigma, const Eigen::VectorXd& x, const Eigen::VectorXd& x2);

/// CSV `nu1,...,nud,b`.
void write_features_csv(std::ostream& out, const FeatureSet& fs);
FeatureSet read_features_csv(std::istream& in, KernelKind kernel, FeatureMap map, double sigma);

}  // namespace rfcover

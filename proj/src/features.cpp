#include "rfcover/features.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

#include "rfcover/scenario.hpp"

namespace rfcover {

KernelKind parse_kernel_kind(std::string_view name) {
    if (name == "gaussian") return KernelKind::Gaussian;
    if (name == "linear") return KernelKind::Linear;
    if (name == "laplacian") return KernelKind::Laplacian;
    if (name == "cauchy") return KernelKind::Cauchy;
    throw std::invalid_argument("unknown kernel kind '" + std::string(name) + "'");
}

std::string_view kernel_name(KernelKind kind) noexcept {
    switch (kind) {
    case KernelKind::Gaussian: return "gaussian";
    case KernelKind::Linear: return "linear";
    case KernelKind::Laplacian: return "laplacian";
    case KernelKind::Cauchy: return "cauchy";
    }
    return "?";
}

std::string_view feature_map_name(FeatureMap map) noexcept {
    switch (map) {
    case FeatureMap::Cosine: return "cosine";
    case FeatureMap::CosSinPair: return "cos_sin_pair";
    case FeatureMap::Linear: return "linear";
    }
    return "?";
}

SpectralFeature FeatureSet::feature(std::size_t m) const {
    if (m >= size()) throw std::out_of_range("feature index out of range");
    const auto i = static_cast<Eigen::Index>(m);
    return {frequencies.row(i).transpose(), phases(i)};
}

FeatureSet FeatureSet::select(const std::vector<std::size_t>& indices) const {
    FeatureSet out;
    out.kernel = kernel;
    out.map = map;
    out.sampling = sampling;
    out.sigma = sigma;
    out.frequencies.resize(static_cast<Eigen::Index>(indices.size()), frequencies.cols());
    out.phases.resize(static_cast<Eigen::Index>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] >= size()) throw std::out_of_range("FeatureSet::select: index out of range");
        const auto src = static_cast<Eigen::Index>(indices[k]);
        const auto dst = static_cast<Eigen::Index>(k);
        out.frequencies.row(dst) = frequencies.row(src);
        out.phases(dst) = phases(src);
    }
    return out;
}

void FeatureSet::validate() const {
    if (phases.size() != frequencies.rows()) throw std::invalid_argument("FeatureSet: phases/frequencies size mismatch");
    if ((map == FeatureMap::Linear) != (kernel == KernelKind::Linear))
        throw std::invalid_argument("FeatureSet: linear map requires the linear kernel and vice versa");
    if (map == FeatureMap::CosSinPair && sampling != Sampling::Orthogonal)
        throw std::invalid_argument("FeatureSet: cos_sin_pair map is only used with orthogonal sampling");
    if (!(sigma > 0.0)) throw std::invalid_argument("FeatureSet: sigma must be positive");
}

FeatureSet sample_features(KernelKind kernel, double sigma, std::size_t M, std::uint64_t seed,
                           std::size_t dimension) {
    if (M < 1) throw std::invalid_argument("sample_features: M must be at least 1");
    if (dimension < 1) throw std::invalid_argument("sample_features: dimension must be at least 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("sample_features: sigma must be positive");

    FeatureSet fs;
    fs.kernel = kernel;
    fs.map = kernel == KernelKind::Linear ? FeatureMap::Linear : FeatureMap::Cosine;
    fs.sampling = Sampling::Iid;
    fs.sigma = sigma;
    const auto rows = static_cast<Eigen::Index>(M);
    const auto cols = static_cast<Eigen::Index>(dimension);
    fs.frequencies.resize(rows, cols);
    fs.phases.resize(rows);

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::cauchy_distribution<double> cauchy(0.0, 1.0);
    std::exponential_distribution<double> expo(1.0);
    std::bernoulli_distribution coin(0.5);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

    for (Eigen::Index m = 0; m < rows; ++m) {
        for (Eigen::Index l = 0; l < cols; ++l) {
            double w = 0.0;
            switch (kernel) {
            case KernelKind::Gaussian:
            case KernelKind::Linear: w = normal(rng); break;
            case KernelKind::Laplacian: w = cauchy(rng); break;
            case KernelKind::Cauchy: {
                const double mag = expo(rng);
                w = coin(rng) ? mag : -mag;
                break;
            }
            }
            fs.frequencies(m, l) = sigma * w;
        }
        double b = phase(rng);
        if (b >= 2.0 * std::numbers::pi) b = 0.0;
        fs.phases(m) = fs.map == FeatureMap::Linear ? 0.0 : b;
    }
    return fs;
}

FeatureSet sample_orf_features(double sigma, std::size_t M, std::uint64_t seed, std::size_t dimension) {
    if (M < 1) throw std::invalid_argument("sample_orf_features: M must be at least 1");
    if (dimension < 1) throw std::invalid_argument("sample_orf_features: dimension must be at least 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("sample_orf_features: sigma must be positive");

    const auto d = static_cast<Eigen::Index>(dimension);
    const std::size_t blocks = (M + dimension - 1) / dimension;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::chi_squared_distribution<double> chi2(static_cast<double>(dimension));

    Eigen::MatrixXd stacked(static_cast<Eigen::Index>(blocks * dimension), d);
    for (std::size_t blk = 0; blk < blocks; ++blk) {
        Eigen::MatrixXd G(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j) G(i, j) = normal(rng);

        Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
        Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
        const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
        // Flip columns of Q so R has a nonnegative diagonal; this makes Q unique.
        for (Eigen::Index j = 0; j < d; ++j) {
            if (R(j, j) < 0.0) Q.col(j) *= -1.0;
        }
        for (Eigen::Index i = 0; i < d; ++i) {
            const double norm = std::sqrt(chi2(rng));
            stacked.row(static_cast<Eigen::Index>(blk) * d + i) = sigma * norm * Q.row(i);
        }
    }

    FeatureSet fs;
    fs.kernel = KernelKind::Gaussian;
    fs.map = FeatureMap::CosSinPair;
    fs.sampling = Sampling::Orthogonal;
    fs.sigma = sigma;
    fs.frequencies = stacked.topRows(static_cast<Eigen::Index>(M));
    fs.phases = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(M));
    return fs;
}

FeatureMatrix transform(const Eigen::MatrixXd& X, const FeatureSet& fs) {
    if (static_cast<std::size_t>(X.cols()) != fs.dimension())
        throw std::invalid_argument("transform: data dimension " + std::to_string(X.cols()) +
                                    " does not match feature dimension " + std::to_string(fs.dimension()));
    if (fs.size() == 0) throw std::invalid_argument("transform: empty feature set");

    const double M = static_cast<double>(fs.size());
    FeatureMatrix out;
    out.scale = 1.0 / std::sqrt(M);

    const Eigen::MatrixXd proj = X * fs.frequencies.transpose();  // n x M
    switch (fs.map) {
    case FeatureMap::Cosine:
        out.Z = ((proj.rowwise() + fs.phases.transpose()).array().cos() * (std::numbers::sqrt2 * out.scale)).matrix();
        break;
    case FeatureMap::Linear: out.Z = proj * out.scale; break;
    case FeatureMap::CosSinPair: {
        out.Z.resize(X.rows(), 2 * proj.cols());
        for (Eigen::Index m = 0; m < proj.cols(); ++m) {
            out.Z.col(2 * m) = proj.col(m).array().cos() * out.scale;
            out.Z.col(2 * m + 1) = proj.col(m).array().sin() * out.scale;
        }
        break;
    }
    }
    return out;
}

FeatureMatrix transform(const Dataset& data, const FeatureSet& fs) { return transform(data.locations(), fs); }

Eigen::VectorXd transform_point(const Eigen::VectorXd& x, const FeatureSet& fs) {
    return transform(Eigen::MatrixXd(x.transpose()), fs).Z.row(0).transpose();
}

double approximate_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& x2, const FeatureSet& fs) {
    if (static_cast<std::size_t>(x.size()) != fs.dimension() || x.size() != x2.size())
        throw std::invalid_argument("approximate_kernel: dimension mismatch");
    const double M = static_cast<double>(fs.size());
    double acc = 0.0;
    for (Eigen::Index m = 0; m < fs.frequencies.rows(); ++m) {
        const double p1 = fs.frequencies.row(m).dot(x);
        const double p2 = fs.frequencies.row(m).dot(x2);
        switch (fs.map) {
        case FeatureMap::Cosine: {
            const double b = fs.phases(m);
            acc += 2.0 * std::cos(p1 + b) * std::cos(p2 + b);
            break;
        }
        case FeatureMap::CosSinPair: acc += std::cos(p1) * std::cos(p2) + std::sin(p1) * std::sin(p2); break;
        case FeatureMap::Linear: acc += p1 * p2; break;
        }
    }
    return acc / M;
}

double kernel_value(KernelKind kernel, double sigma, const Eigen::VectorXd& x, const Eigen::VectorXd& x2) {
    switch (kernel) {
    case KernelKind::Gaussian: return std::exp(-0.5 * sigma * sigma * (x - x2).squaredNorm());
    case KernelKind::Linear: return sigma * sigma * x.dot(x2);
    case KernelKind::Laplacian: return std::exp(-sigma * (x - x2).lpNorm<1>());
    case KernelKind::Cauchy: {
        double k = 1.0;
        for (Eigen::Index l = 0; l < x.size(); ++l) {
            const double delta = sigma * (x(l) - x2(l));
            k /= 1.0 + delta * delta;
        }
        return k;
    }
    }
    throw std::invalid_argument("kernel_value: unknown kernel");
}

void write_features_csv(std::ostream& out, const FeatureSet& fs) {
    for (std::size_t l = 0; l < fs.dimension(); ++l) out << "nu" << (l + 1) << ',';
    out << "b\n";
    out.precision(17);
    for (Eigen::Index m = 0; m < fs.frequencies.rows(); ++m) {
        for (Eigen::Index l = 0; l < fs.frequencies.cols(); ++l) out << fs.frequencies(m, l) << ',';
        out << fs.phases(m) << '\n';
    }
}

FeatureSet read_features_csv(std::istream& in, KernelKind kernel, FeatureMap map, double sigma) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("features csv: empty input");
    std::size_t dim = 0;
    {
        std::istringstream header(line);
        std::string cell;
        std::size_t count = 0;
        while (std::getline(header, cell, ',')) ++count;
        if (count < 2) throw std::runtime_error("features csv: header needs nu columns and b");
        dim = count - 1;
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() != dim + 1) throw std::runtime_error("features csv: wrong column count");
        rows.push_back(std::move(vals));
    }
    FeatureSet fs;
    fs.kernel = kernel;
    fs.map = map;
    fs.sampling = map == FeatureMap::CosSinPair ? Sampling::Orthogonal : Sampling::Iid;
    fs.sigma = sigma;
    fs.frequencies.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
    fs.phases.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t m = 0; m < rows.size(); ++m) {
        for (std::size_t l = 0; l < dim; ++l)
            fs.frequencies(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(l)) = rows[m][l];
        fs.phases(static_cast<Eigen::Index>(m)) = rows[m][dim];
    }
    fs.validate();
    return fs;
}

}  // namespace rfcover

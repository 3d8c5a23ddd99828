#include "rfcover/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace rfcover {

namespace {

constexpr std::size_t kRadiusCheckSamples = 8192;
constexpr std::size_t kBoundaryVertices = 2048;

double polar_angle(const Eigen::Vector2d& v) { return std::atan2(v.y(), v.x()); }

/// Closed polyline approximation of one star-shaped boundary.
std::vector<Eigen::Vector2d> boundary_polyline(const BaseStation& bs) {
    std::vector<Eigen::Vector2d> pts;
    pts.reserve(kBoundaryVertices);
    for (std::size_t i = 0; i < kBoundaryVertices; ++i) {
        const double phi = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(i) / kBoundaryVertices;
        const double r = bs.radius_at(phi);
        pts.emplace_back(bs.center + r * Eigen::Vector2d(std::cos(phi), std::sin(phi)));
    }
    return pts;
}

double segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    const Eigen::Vector2d ab = b - a;
    const double len2 = ab.squaredNorm();
    double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

double polyline_distance(const std::vector<Eigen::Vector2d>& poly, const Eigen::Vector2d& p) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        best = std::min(best, segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
    }
    return best;
}

class BoundaryGeometry {
public:
    explicit BoundaryGeometry(const ScenarioConfig& cfg)
        : curves_{boundary_polyline(cfg.stations[0]), boundary_polyline(cfg.stations[1])} {}

    double distance(const Eigen::Vector2d& p) const {
        return std::min(polyline_distance(curves_[0], p), polyline_distance(curves_[1], p));
    }

private:
    std::array<std::vector<Eigen::Vector2d>, 2> curves_;
};

Label other_label(Label y, bool pick_second) {
    // The two labels different from y, in kClassOrder order.
    std::array<Label, 2> others{};
    std::size_t k = 0;
    for (Label c : kClassOrder) {
        if (c != y) others[k++] = c;
    }
    return others[pick_second ? 1 : 0];
}

}  // namespace

double BaseStation::radius_at(double phi) const noexcept {
    double r = base_radius;
    for (const auto& h : harmonics) r += h.amplitude * std::cos(h.frequency * phi + h.phase);
    return r;
}

double BaseStation::coverage_margin(const Eigen::Vector2d& x) const noexcept {
    const Eigen::Vector2d rel = x - center;
    return radius_at(polar_angle(rel)) - rel.norm();
}

ScenarioConfig ScenarioConfig::defaults() {
    ScenarioConfig c;
    c.field_side = 10.0;
    c.n_train = 2000;
    c.n_test = 1000;
    c.stations[0].center = {2.85, 5.0};
    c.stations[0].base_radius = 3.15;
    c.stations[0].harmonics = {{0.29, 3.0, 0.4}, {0.17, 5.0, 1.3}};
    c.stations[1].center = {7.15, 5.0};
    c.stations[1].base_radius = 2.35;
    c.stations[1].harmonics = {{0.21, 4.0, 2.0}, {0.125, 6.0, 0.7}};
    c.label_noise_rate = 0.3;
    c.noise_decay_length = 0.33;
    c.rng_seed = 2020;
    return c;
}

void ScenarioConfig::validate() const {
    if (!(field_side > 0.0) || !std::isfinite(field_side)) throw std::invalid_argument("field_side must be positive");
    if (n_train < 1) throw std::invalid_argument("n_train must be at least 1");
    if (!(label_noise_rate >= 0.0 && label_noise_rate <= 1.0))
        throw std::invalid_argument("label_noise_rate must lie in [0, 1]");
    if (!(noise_decay_length > 0.0)) throw std::invalid_argument("noise_decay_length must be positive");
    for (std::size_t k = 0; k < stations.size(); ++k) {
        const auto& bs = stations[k];
        const std::string who = "station " + std::to_string(k + 1);
        if (!(bs.base_radius > 0.0)) throw std::invalid_argument(who + ": base_radius must be positive");
        if (!(bs.center.x() >= 0.0 && bs.center.x() <= field_side && bs.center.y() >= 0.0 &&
              bs.center.y() <= field_side))
            throw std::invalid_argument(who + ": center outside the field");
        double slack = bs.base_radius;
        for (const auto& h : bs.harmonics) slack -= std::abs(h.amplitude);
        if (slack >= 0.0) continue;
        for (std::size_t i = 0; i < kRadiusCheckSamples; ++i) {
            const double phi = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(i) / kRadiusCheckSamples;
            if (bs.radius_at(phi) < 0.0)
                throw std::invalid_argument(who + ": boundary radius is negative at phi=" + std::to_string(phi));
        }
    }
}

Eigen::MatrixXd Dataset::locations() const {
    Eigen::MatrixXd X(static_cast<Eigen::Index>(points.size()), 2);
    for (std::size_t i = 0; i < points.size(); ++i) X.row(static_cast<Eigen::Index>(i)) = points[i].x.transpose();
    return X;
}

std::vector<Label> Dataset::labels() const {
    std::vector<Label> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.y);
    return out;
}

Label ground_truth_label(const ScenarioConfig& config, const Eigen::Vector2d& x) {
    const double m1 = config.stations[0].coverage_margin(x);
    const double m2 = config.stations[1].coverage_margin(x);
    const bool in1 = m1 >= 0.0;
    const bool in2 = m2 >= 0.0;
    if (in1 && in2) return m1 >= m2 ? Label::BS1 : Label::BS2;
    if (in1) return Label::BS1;
    if (in2) return Label::BS2;
    return Label::None;
}

double boundary_distance(const ScenarioConfig& config, const Eigen::Vector2d& x) {
    return BoundaryGeometry(config).distance(x);
}

double flip_probability(const ScenarioConfig& config, const Eigen::Vector2d& x) {
    return config.label_noise_rate * std::exp(-boundary_distance(config, x) / config.noise_decay_length);
}

std::pair<Dataset, Dataset> generate_scenario(const ScenarioConfig& config) {
    config.validate();

    std::mt19937_64 loc_rng(mix_seed(config.rng_seed, 0));
    std::mt19937_64 noise_rng(mix_seed(config.rng_seed, 1));
    std::uniform_real_distribution<double> coord(0.0, config.field_side);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::bernoulli_distribution coin(0.5);

    const BoundaryGeometry geometry(config);
    const bool noisy = config.label_noise_rate > 0.0;

    auto draw = [&](std::size_t n, Split split) {
        Dataset ds;
        ds.split = split;
        ds.points.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            LabeledPoint p;
            p.x.x() = coord(loc_rng);
            p.x.y() = coord(loc_rng);
            p.y = ground_truth_label(config, p.x);
            // Both noise draws are always consumed so streams stay aligned across noise settings.
            const double u = unit(noise_rng);
            const bool pick_second = coin(noise_rng);
            if (noisy) {
                const double prob = config.label_noise_rate *
                                    std::exp(-geometry.distance(p.x) / config.noise_decay_length);
                if (u < prob) p.y = other_label(p.y, pick_second);
            }
            ds.points.push_back(p);
        }
        return ds;
    };

    Dataset train = draw(config.n_train, Split::Train);
    Dataset test = draw(config.n_test, Split::Test);
    return {std::move(train), std::move(test)};
}

double sigma_heuristic(const Dataset& data, std::size_t k) {
    const std::size_t n = data.size();
    if (k < 1) throw std::invalid_argument("sigma_heuristic: k must be at least 1");
    if (n <= k) throw std::invalid_argument("sigma_heuristic: need more than k points");

    std::vector<double> dist(n - 1);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j_out = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            dist[j_out++] = (data.points[i].x - data.points[j].x).squaredNorm();
        }
        std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k - 1), dist.end());
        total += std::sqrt(dist[k - 1]);
    }
    const double mean = total / static_cast<double>(n);
    if (!(mean > 0.0)) throw std::invalid_argument("sigma_heuristic: k-th neighbour distances are all zero");
    return 1.0 / mean;
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
    out << "x1,x2,y\n";
    out.precision(17);
    for (const auto& p : data.points) out << p.x.x() << ',' << p.x.y() << ',' << to_int(p.y) << '\n';
}

Dataset read_dataset_csv(std::istream& in, Split split) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("dataset csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x1,x2,y") throw std::runtime_error("dataset csv: expected header x1,x2,y");
    Dataset ds;
    ds.split = split;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::istringstream row(line);
        double x1 = 0, x2 = 0;
        int y = 0;
        char c1 = 0, c2 = 0;
        if (!(row >> x1 >> c1 >> x2 >> c2 >> y) || c1 != ',' || c2 != ',')
            throw std::runtime_error("dataset csv: malformed line " + std::to_string(lineno));
        ds.points.push_back({Eigen::Vector2d(x1, x2), label_from_int(y)});
    }
    return ds;
}

}  // namespace rfcover

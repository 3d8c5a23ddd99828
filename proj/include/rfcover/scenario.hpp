#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "rfcover/common.hpp"

namespace rfcover {

/// Cosine perturbation of a coverage radius: amplitude * cos(frequency * phi + phase).
struct Harmonic {
    double amplitude = 0.0;
    double frequency = 0.0;
    double phase = 0.0;
};

/// A transmitter with a star-shaped coverage region about its center.
struct BaseStation {
    Eigen::Vector2d center{0.0, 0.0};
    double base_radius = 1.0;
    std::vector<Harmonic> harmonics;

    /// Boundary radius in direction `phi` (radians, about `center`).
    double radius_at(double phi) const noexcept;
    /// Signed coverage margin r(phi) - |x - center|; positive inside.
    double coverage_margin(const Eigen::Vector2d& x) const noexcept;
};

struct ScenarioConfig {
    double field_side = 10.0;
    std::size_t n_train = 2000;
    std::size_t n_test = 1000;
    std::array<BaseStation, 2> stations;
    double label_noise_rate = 0.0;
    double noise_decay_length = 1.0;
    std::uint64_t rng_seed = 0;

    /// Field layout used throughout the benchmarks.
    static ScenarioConfig defaults();

    /// Throws std::invalid_argument on any violated invariant, including a
    /// boundary radius that goes negative somewhere.
    void validate() const;
};

struct LabeledPoint {
    Eigen::Vector2d x;
    Label y = Label::None;
};

enum class Split { Train, Test };

struct Dataset {
    std::vector<LabeledPoint> points;
    Split split = Split::Train;

    std::size_t size() const noexcept { return points.size(); }
    bool empty() const noexcept { return points.empty(); }
    /// n x 2 location matrix.
    Eigen::MatrixXd locations() const;
    std::vector<Label> labels() const;
};

/// Noise-free label of location `x`.
Label ground_truth_label(const ScenarioConfig& config, const Eigen::Vector2d& x);

/// Distance from `x` to the nearest of the two boundary curves.
double boundary_distance(const ScenarioConfig& config, const Eigen::Vector2d& x);

/// rate * exp(-m / decay) with m the boundary distance of `x`.
double flip_probability(const ScenarioConfig& config, const Eigen::Vector2d& x);

/// Draws the train and test sensor fields. Deterministic in config.rng_seed.
/// Locations and noise come from separate streams so the sensor layout is
/// independent of the noise settings.
std::pair<Dataset, Dataset> generate_scenario(const ScenarioConfig& config);

/// Reciprocal of the mean distance from each point to its k-th nearest
/// neighbour (self excluded). Requires size() > k >= 1.
double sigma_heuristic(const Dataset& data, std::size_t k = 50);

/// CSV with header `x1,x2,y`.
void write_dataset_csv(std::ostream& out, const Dataset& data);
Dataset read_dataset_csv(std::istream& in, Split split = Split::Train);

}  // namespace rfcover

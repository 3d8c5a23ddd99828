#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "rfcover/scenario.hpp"

using namespace rfcover;

namespace {

ScenarioConfig two_disks(double noise = 0.0) {
    ScenarioConfig c = ScenarioConfig::defaults();
    c.stations[0].harmonics.clear();
    c.stations[1].harmonics.clear();
    c.stations[0].center = {3.0, 5.0};
    c.stations[0].base_radius = 2.0;
    c.stations[1].center = {7.5, 5.0};
    c.stations[1].base_radius = 1.5;
    c.label_noise_rate = noise;
    return c;
}

// Boundary distance from a dense point cloud on both curves; independent of
// the polyline construction used by the generator.
struct DenseBoundary {
    std::vector<Eigen::Vector2d> points;

    explicit DenseBoundary(const ScenarioConfig& c, int samples = 20000) {
        for (const auto& bs : c.stations) {
            for (int i = 0; i < samples; ++i) {
                const double phi = 2.0 * std::numbers::pi * i / samples;
                double r = bs.base_radius;
                for (const auto& h : bs.harmonics) r += h.amplitude * std::cos(h.frequency * phi + h.phase);
                points.push_back(bs.center + r * Eigen::Vector2d(std::cos(phi), std::sin(phi)));
            }
        }
    }

    double distance(const Eigen::Vector2d& x) const {
        double best = 1e300;
        for (const auto& p : points) best = std::min(best, (p - x).squaredNorm());
        return std::sqrt(best);
    }
};

}  // namespace

TEST_CASE("default config produces the requested split sizes and all three labels") {
    const auto [train, test] = generate_scenario(ScenarioConfig::defaults());
    CHECK(train.size() == 2000);
    CHECK(test.size() == 1000);
    CHECK(train.split == Split::Train);
    CHECK(test.split == Split::Test);
    int counts[3] = {0, 0, 0};
    for (const auto& p : train.points) {
        ++counts[to_int(p.y) + 1];
        CHECK(p.x.x() >= 0.0);
        CHECK(p.x.x() <= 10.0);
        CHECK(p.x.y() >= 0.0);
        CHECK(p.x.y() <= 10.0);
    }
    CHECK(counts[0] > 0);
    CHECK(counts[1] > 0);
    CHECK(counts[2] > 0);
}

TEST_CASE("noiseless disks match a direct distance test on every point") {
    const ScenarioConfig c = two_disks();
    const auto [train, test] = generate_scenario(c);
    for (const auto* ds : {&train, &test}) {
        for (const auto& p : ds->points) {
            const double d1 = (p.x - c.stations[0].center).norm();
            const double d2 = (p.x - c.stations[1].center).norm();
            Label expect = Label::None;
            if (d1 <= 2.0) expect = Label::BS1;
            else if (d2 <= 1.5) expect = Label::BS2;
            REQUIRE(p.y == expect);
        }
    }
}

TEST_CASE("overlapping coverage goes to the larger margin, exact ties to BS1") {
    ScenarioConfig c = two_disks();
    c.stations[0].center = {4.0, 5.0};
    c.stations[1].center = {6.0, 5.0};
    c.stations[1].base_radius = 2.0;
    CHECK(ground_truth_label(c, {4.5, 5.0}) == Label::BS1);
    CHECK(ground_truth_label(c, {5.5, 5.0}) == Label::BS2);
    CHECK(ground_truth_label(c, {5.0, 5.0}) == Label::BS1);
    CHECK(ground_truth_label(c, {0.5, 0.5}) == Label::None);
}

TEST_CASE("generation is deterministic in the seed") {
    const ScenarioConfig c = ScenarioConfig::defaults();
    const auto a = generate_scenario(c);
    const auto b = generate_scenario(c);
    REQUIRE(a.first.size() == b.first.size());
    for (std::size_t i = 0; i < a.first.size(); ++i) {
        CHECK(a.first.points[i].x == b.first.points[i].x);
        CHECK(a.first.points[i].y == b.first.points[i].y);
    }
    ScenarioConfig other = c;
    other.rng_seed += 1;
    CHECK(generate_scenario(other).first.points[0].x != a.first.points[0].x);
}

TEST_CASE("flip count matches the analytic expectation within three standard deviations") {
    ScenarioConfig noisy = ScenarioConfig::defaults();
    ScenarioConfig clean = noisy;
    clean.label_noise_rate = 0.0;
    const auto [nt, ns] = generate_scenario(noisy);
    const auto [ct, cs] = generate_scenario(clean);

    const DenseBoundary oracle(noisy);
    double expected = 0.0, variance = 0.0;
    int flips = 0;
    for (const auto& [noisy_ds, clean_ds] : {std::pair{&nt, &ct}, std::pair{&ns, &cs}}) {
        for (std::size_t i = 0; i < noisy_ds->size(); ++i) {
            const auto& p = noisy_ds->points[i];
            REQUIRE(p.x == clean_ds->points[i].x);
            if (p.y != clean_ds->points[i].y) ++flips;
            const double prob = noisy.label_noise_rate *
                                std::exp(-oracle.distance(p.x) / noisy.noise_decay_length);
            expected += prob;
            variance += prob * (1.0 - prob);
        }
    }
    MESSAGE("flips=" << flips << " expected=" << expected << " sd=" << std::sqrt(variance));
    CHECK(flips > 0);
    CHECK(std::abs(flips - expected) <= 3.0 * std::sqrt(variance));
}

TEST_CASE("boundary distance agrees with a dense-sampling oracle") {
    const ScenarioConfig c = ScenarioConfig::defaults();
    const DenseBoundary oracle(c);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int i = 0; i < 20; ++i) {
        const Eigen::Vector2d x(u(rng), u(rng));
        CHECK(std::abs(boundary_distance(c, x) - oracle.distance(x)) <= 2e-3);
    }
}

TEST_CASE("larger noise rate never flips fewer labels for the same seed") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        ScenarioConfig lo = ScenarioConfig::defaults();
        lo.rng_seed = seed;
        lo.n_train = 500;
        lo.n_test = 0;
        ScenarioConfig hi = lo;
        ScenarioConfig clean = lo;
        lo.label_noise_rate = 0.1;
        hi.label_noise_rate = 0.4;
        clean.label_noise_rate = 0.0;
        const auto c = generate_scenario(clean).first;
        const auto a = generate_scenario(lo).first;
        const auto b = generate_scenario(hi).first;
        int fa = 0, fb = 0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            fa += a.points[i].y != c.points[i].y;
            fb += b.points[i].y != c.points[i].y;
        }
        CHECK(fb >= fa);
    }
}

TEST_CASE("config validation") {
    ScenarioConfig c = ScenarioConfig::defaults();
    SUBCASE("negative boundary radius") {
        c.stations[0].base_radius = 0.5;
        c.stations[0].harmonics = {{0.8, 3.0, 0.0}};
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
    SUBCASE("large harmonics that stay positive are fine") {
        c.stations[0].base_radius = 1.0;
        c.stations[0].harmonics = {{0.6, 3.0, 0.0}, {0.5, 6.0, 0.0}};
        CHECK_NOTHROW(c.validate());
    }
    SUBCASE("noise rate out of range") {
        c.label_noise_rate = 1.5;
        CHECK_THROWS_AS(generate_scenario(c), std::invalid_argument);
    }
    SUBCASE("center outside field") {
        c.stations[1].center = {11.0, 5.0};
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
    SUBCASE("no training points") {
        c.n_train = 0;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
}

TEST_CASE("sigma heuristic: collinear hand case") {
    Dataset d;
    for (int i = 0; i < 3; ++i) d.points.push_back({Eigen::Vector2d(i, 0.0), Label::None});
    CHECK(sigma_heuristic(d, 1) == doctest::Approx(1.0));
    CHECK_THROWS_AS(sigma_heuristic(d, 3), std::invalid_argument);
    CHECK_THROWS_AS(sigma_heuristic(d, 0), std::invalid_argument);
}

TEST_CASE("sigma heuristic equals an exhaustive pairwise oracle") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Dataset d;
    for (int i = 0; i < 100; ++i) d.points.push_back({Eigen::Vector2d(u(rng), u(rng)), Label::None});

    constexpr std::size_t k = 5;
    double total = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        std::vector<double> all;
        for (std::size_t j = 0; j < d.size(); ++j)
            if (j != i) all.push_back((d.points[i].x - d.points[j].x).norm());
        std::sort(all.begin(), all.end());
        total += all[k - 1];
    }
    const double oracle = 1.0 / (total / static_cast<double>(d.size()));
    CHECK(sigma_heuristic(d, k) == oracle);
}

TEST_CASE("default field sigma is logged") {
    const auto train = generate_scenario(ScenarioConfig::defaults()).first;
    const double sigma = sigma_heuristic(train, 50);
    MESSAGE("default scenario sigma = " << sigma);
    CHECK(sigma > 0.0);
}

TEST_CASE("dataset csv round trip") {
    ScenarioConfig c = ScenarioConfig::defaults();
    c.n_train = 50;
    const auto train = generate_scenario(c).first;
    std::stringstream ss;
    write_dataset_csv(ss, train);
    CHECK(ss.str().rfind("x1,x2,y\n", 0) == 0);
    const Dataset back = read_dataset_csv(ss);
    REQUIRE(back.size() == train.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back.points[i].x == train.points[i].x);
        CHECK(back.points[i].y == train.points[i].y);
    }
    std::stringstream bad("x,y\n1,2\n");
    CHECK_THROWS(read_dataset_csv(bad));
}

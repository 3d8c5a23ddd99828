#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace rfcover {

/// Sensor declaration. +1 is BS1 coverage, -1 is BS2 coverage, 0 is no
/// sufficiently strong coverage.
enum class Label : int { BS2 = -1, None = 0, BS1 = 1 };

/// One-vs-all task order; also the argmax tie-break order.
inline constexpr std::array<Label, 3> kClassOrder{Label::BS1, Label::None, Label::BS2};

constexpr int to_int(Label y) noexcept { return static_cast<int>(y); }

inline Label label_from_int(int v) {
    switch (v) {
    case -1: return Label::BS2;
    case 0: return Label::None;
    case 1: return Label::BS1;
    default: throw std::invalid_argument("label must be -1, 0 or +1, got " + std::to_string(v));
    }
}

/// Index of a class in kClassOrder.
constexpr std::size_t class_slot(Label y) noexcept {
    switch (y) {
    case Label::BS1: return 0;
    case Label::None: return 1;
    case Label::BS2: return 2;
    }
    return 0;
}

std::string_view class_name(Label y) noexcept;

/// SplitMix64 finalizer. Used to derive independent RNG streams from a base
/// seed so that adding a trial or a method never perturbs the others.
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) noexcept {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Vector of +1/-1 targets.
using BinaryTargets = Eigen::VectorXd;

}  // namespace rfcover

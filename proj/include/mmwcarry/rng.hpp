#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <utility>

namespace mmw {

/// Seed derivation. Every random stream in the project is drawn from
///   derive_seed(root, "<stage>", {keys...})
/// which folds a FNV-1a hash of the stage name and each key through
/// SplitMix64. Stages in use: "if-noise" {frame, chirp}, "camera" {frame},
/// "ghost" {subject}, "object-amp" {subject, class}, "oracle"
/// {frame, subject, class}, "oracle-subject" {subject, class},
/// "oracle-episode" {subject, class, knot}, "scenario" and "study" {index}.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t root, std::string_view stage,
                          std::initializer_list<std::uint64_t> keys = {});

inline std::mt19937_64 make_rng(std::uint64_t root, std::string_view stage,
                                std::initializer_list<std::uint64_t> keys = {}) {
  return std::mt19937_64(derive_seed(root, stage, keys));
}

/// Uniform double in [0, 1) from the top 53 bits; independent of the
/// standard library's distribution implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Two independent standard normals (Marsaglia polar method).
std::pair<double, double> gaussian_pair(std::mt19937_64& rng);
inline double gaussian(std::mt19937_64& rng) { return gaussian_pair(rng).first; }

}  // namespace mmw

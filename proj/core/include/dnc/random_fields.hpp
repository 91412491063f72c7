#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dnc/mesh.hpp"

namespace dnc {

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// sum_{k=1..modes} c_k sin(k pi x), c_k uniform in [-1, 1] / k^2.
/// Vanishes at both ends.
std::vector<double> random_sine_profile(const SpaceTimeGrid& grid, std::uint64_t seed,
                                        int modes = 4);

/// sum_{k=1..x_modes} sum_{l=0..t_modes-1} c_kl sin(k pi x) cos(l pi t / T),
/// c_kl uniform in [-1, 1] / (k (l + 1)).
Field2D random_sine_field(const SpaceTimeGrid& grid, std::uint64_t seed, int x_modes = 4,
                          int t_modes = 3);

/// Seed of ensemble member k derived from a base seed (splitmix64 mixing).
std::uint64_t member_seed(std::uint64_t base, std::uint64_t k);

}  // namespace dnc

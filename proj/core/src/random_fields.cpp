#include "dnc/random_fields.hpp"

#include <cmath>
#include <numbers>

#include "dnc/errors.hpp"

namespace dnc {

std::vector<double> random_sine_profile(const SpaceTimeGrid& grid, std::uint64_t seed,
                                        int modes) {
  if (modes < 1) throw InvalidArgument("random_sine_profile: need at least one mode");
  std::mt19937_64 gen(seed);
  std::vector<double> c(modes);
  for (int k = 0; k < modes; ++k) c[k] = (2.0 * uniform01(gen) - 1.0) / ((k + 1.0) * (k + 1.0));
  std::vector<double> w(grid.nodes(), 0.0);
  for (int i = 1; i < grid.nx; ++i) {
    double v = 0.0;
    for (int k = 0; k < modes; ++k) v += c[k] * std::sin((k + 1) * std::numbers::pi * grid.x[i]);
    w[i] = v;
  }
  return w;
}

Field2D random_sine_field(const SpaceTimeGrid& grid, std::uint64_t seed, int x_modes,
                          int t_modes) {
  if (x_modes < 1 || t_modes < 1) throw InvalidArgument("random_sine_field: need modes >= 1");
  std::mt19937_64 gen(seed);
  std::vector<double> c(static_cast<std::size_t>(x_modes * t_modes));
  for (int k = 0; k < x_modes; ++k) {
    for (int l = 0; l < t_modes; ++l) {
      c[k * t_modes + l] = (2.0 * uniform01(gen) - 1.0) / ((k + 1.0) * (l + 1.0));
    }
  }
  Field2D F = grid.make_field();
  std::vector<double> time_factor(t_modes);
  for (int j = 0; j <= grid.nt; ++j) {
    for (int l = 0; l < t_modes; ++l) {
      time_factor[l] = std::cos(l * std::numbers::pi * grid.t[j] / grid.T);
    }
    for (int i = 1; i < grid.nx; ++i) {
      double v = 0.0;
      for (int k = 0; k < x_modes; ++k) {
        const double sx = std::sin((k + 1) * std::numbers::pi * grid.x[i]);
        for (int l = 0; l < t_modes; ++l) v += c[k * t_modes + l] * sx * time_factor[l];
      }
      F(j, i) = v;
    }
  }
  return F;
}

std::uint64_t member_seed(std::uint64_t base, std::uint64_t k) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace dnc

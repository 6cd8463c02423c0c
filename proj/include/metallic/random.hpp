#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace metallic {

/// Seeded generator with a platform-independent output sequence.
///
/// Raw bits come from std::mt19937_64 (fully specified by the standard); the
/// conversions to reals are done here rather than through the standard
/// distributions, whose algorithms are implementation-defined. Uniform reals
/// take the top 53 bits; normals use the Box-Muller transform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gaussian() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Eigen::VectorXd gaussian_vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = gaussian();
    return v;
  }

  Eigen::VectorXd unit_vector(Eigen::Index n) {
    Eigen::VectorXd v = gaussian_vector(n);
    while (v.norm() < 1e-12) v = gaussian_vector(n);
    return v.normalized();
  }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 mix of a base seed with a stream index; used to give every sample
/// its own reproducible sub-stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace metallic

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "lpvss/types.hpp"

namespace lpvss {

/// splitmix64 step, used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed for an independent Monte Carlo stream: splitmix64(base ^ splitmix64(index)).
inline std::uint64_t derive_stream_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ splitmix64(index));
}

/// Seedable generator with a pinned algorithm: mt19937_64 for the raw 64-bit
/// stream, uniforms as (x >> 11) * 2^-53, Gaussians by the Box-Muller
/// transform (both values of each pair consumed in order). Identical seeds
/// give identical streams within one build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  Vector normal_vector(int n) {
    Vector z(n);
    for (int i = 0; i < n; ++i) z(i) = normal();
    return z;
  }

  /// Random unit vector (normalized Gaussian direction).
  Vector unit_vector(int n) {
    Vector z = normal_vector(n);
    const double norm = z.norm();
    return norm > 0.0 ? Vector(z / norm) : unit_vector(n);
  }

  bool coin() { return (engine_() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lpvss

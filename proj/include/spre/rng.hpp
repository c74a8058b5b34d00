#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace spre {

/// Seeded uniform stream with a fixed, library-independent mapping:
/// std::mt19937_64 seeded with the 64-bit seed, each draw taking the top 53
/// bits of one engine output, u = (w >> 11) * 2^-53 in [0, 1).
/// std::uniform_real_distribution is avoided because its output is
/// implementation-defined.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}

  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1): zero draws are rejected and redrawn.
  double next_positive() {
    double u = next();
    while (u == 0.0) u = next();
    return u;
  }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finaliser, used to hash seeds and coordinates.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Box-Muller on two uniforms from `stream`.
inline double standard_normal(UniformStream& stream) {
  const double u1 = stream.next_positive();
  const double u2 = stream.next();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace spre

#ifndef RTCLAB_COMMON_RANDOM_H_
#define RTCLAB_COMMON_RANDOM_H_

#include <cmath>
#include <numbers>
#include <random>

namespace rtclab {

// Draws built directly on the engine's bits, so results do not depend on
// the standard library's distribution implementations.

// Uniform in [0, 1) from the top 53 bits.
inline double UnitUniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double UniformIn(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * UnitUniform(rng);
}

// Box-Muller; consumes two draws per call.
inline double StandardNormal(std::mt19937_64& rng) {
  const double u1 = 1.0 - UnitUniform(rng);  // (0, 1]
  const double u2 = UnitUniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace rtclab

#endif  // RTCLAB_COMMON_RANDOM_H_

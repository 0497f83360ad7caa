#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace dcsit {

// Deterministic counter generator (SplitMix64). State is a counter advanced by
// a fixed odd gamma and every output is a bijective mix of it, so distinct
// (seed, stream) pairs give non-overlapping sequences and draws from one
// stream never perturb another. That independence is what lets the channel,
// the pre-shared combining coefficients, and the planted data evolve on
// separate clocks while the whole run stays reproducible from one seed.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream)
      : state_(mix(seed ^ mix(stream * kGamma)) ^ (stream << 1)) {}

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // Uniform on (0, 1]: 53-bit mantissa, never 0, so log() below is safe.
  double uniform01() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Circularly symmetric complex Gaussian with unit total variance:
  // Box-Muller pair scaled by 1/sqrt(2) per real component.
  std::complex<double> cn01() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-std::log(u1));
    const double th = 2.0 * kPi * u2;
    return {r * std::cos(th), r * std::sin(th)};
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;
  static constexpr double kPi = 3.141592653589793238462643383279502884;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

// Stream ids shared by the whole simulator.
namespace streams {
inline constexpr std::uint64_t kChannel = 1;
inline constexpr std::uint64_t kCoefficients = 2;
inline constexpr std::uint64_t kData = 3;
}  // namespace streams

}  // namespace dcsit

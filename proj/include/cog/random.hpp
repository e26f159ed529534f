#pragma once

// Deterministic normal variates.
//
// Every Monte Carlo draw is addressed by (seed, stream index). A stream is a
// SplitMix64 generator whose initial state is
//
//     state_0 = mix64(mix64(seed) ^ index)
//
// where mix64 is the SplitMix64 output finalizer. Each step advances the
// state by 0x9E3779B97F4A7C15 and returns mix64(state). Uniforms take the top
// 53 bits: u = (next() >> 11) * 2^-53 in [0, 1). Normals come in pairs from
// the Box-Muller transform with u1 = 1 - u (so u1 is in (0, 1]) and u2 = u:
//
//     r = sqrt(-2 ln u1),  n_0 = r cos(2 pi u2),  n_1 = r sin(2 pi u2)
//
// emitted in the order n_0, n_1. Latents consume normals component by
// component, so results never depend on how trials are spread over threads.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace cog {

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  constexpr explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  /// The generator for substream `index` of `seed`.
  static constexpr SplitMix64 substream(std::uint64_t seed, std::uint64_t index) noexcept {
    return SplitMix64(mix64(mix64(seed) ^ index));
  }

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform on [0, 1).
  constexpr double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

/// Standard normal variates from one substream.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t index) noexcept
      : rng_(SplitMix64::substream(seed, index)) {}

  double next() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - rng_.uniform();
    const double u2 = rng_.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

 private:
  SplitMix64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace cog

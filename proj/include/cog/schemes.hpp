#pragma once

// Interpolation and centroid schemes: the classical baselines (LERP, SLERP,
// Euclidean centroid and its two rescaled variants) next to the corrected
// combination.

#include <optional>
#include <span>
#include <string_view>

#include "cog/latent.hpp"

namespace cog {

enum class InterpolationMethod { Lerp, Slerp, Cog };
enum class CentroidMethod { Euclidean, StandardizedEuclidean, ModeNormEuclidean, Cog };

/// Case-insensitive. Returns nullopt for unknown names.
std::optional<InterpolationMethod> parse_interpolation_method(std::string_view name);
/// Accepts euclidean, std-euclidean (standardized-euclidean), mode-norm
/// (mode-norm-euclidean) and cog, case-insensitively.
std::optional<CentroidMethod> parse_centroid_method(std::string_view name);

std::string_view to_string(InterpolationMethod m);
std::string_view to_string(CentroidMethod m);

/// SLERP falls back to linear weights when sin(theta) drops below this.
inline constexpr double kSlerpMinSin = 1e-8;

/// [v, 1 - v]; v must lie in [0, 1].
WeightVec lerp_weights(double v);

/// [sin(v t) / sin t, sin((1 - v) t) / sin t] with t the angle between x1
/// and x2. Throws InvalidArgument for zero-norm inputs.
WeightVec slerp_weights(double v, const Latent& x1, const Latent& x2);

/// Same weights from a precomputed cosine similarity (clamped to [-1, 1]).
WeightVec slerp_weights_from_cosine(double v, double cosine);

/// v = 1 returns x1 and v = 0 returns x2 for every method. Slerp is the
/// uncorrected spherical baseline; Cog applies the transform to linear
/// weights.
Latent interpolate(const Latent& x1, const Latent& x2, double v, InterpolationMethod method,
                   const GaussianSpec& spec);

struct CentroidOptions {
  /// Restrict the Euclidean-derived baselines to the N(0, I) prior they were
  /// defined for, instead of mapping through standardized coordinates.
  bool strict_baselines = false;
};

/// Inputs are ordered lexicographically by value before summation, so the
/// result does not depend on the order of `latents`.
Latent centroid(std::span<const Latent> latents, CentroidMethod method,
                const GaussianSpec& spec, CentroidOptions options = {});

/// (x - m) / s with m and s the mean and population standard deviation of
/// x's own components. Throws InvalidArgument when s == 0.
Latent standardize_components(const Latent& x);

/// x rescaled to norm sqrt(dim - 2). Throws InvalidArgument for a zero
/// vector or dim < 3.
Latent rescale_to_mode_norm(const Latent& x);

}  // namespace cog

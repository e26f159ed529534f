#include "cog/schemes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "cog/error.hpp"

namespace cog {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

std::vector<Latent> canonical_order(std::span<const Latent> latents) {
  std::vector<Latent> sorted(latents.begin(), latents.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const Latent& a, const Latent& b) {
    return std::lexicographical_compare(a.values().begin(), a.values().end(),
                                        b.values().begin(), b.values().end());
  });
  return sorted;
}

WeightVec uniform_weights(std::size_t k) {
  return WeightVec(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

}  // namespace

std::optional<InterpolationMethod> parse_interpolation_method(std::string_view name) {
  const auto n = lower(name);
  if (n == "lerp") return InterpolationMethod::Lerp;
  if (n == "slerp") return InterpolationMethod::Slerp;
  if (n == "cog") return InterpolationMethod::Cog;
  return std::nullopt;
}

std::optional<CentroidMethod> parse_centroid_method(std::string_view name) {
  const auto n = lower(name);
  if (n == "euclidean") return CentroidMethod::Euclidean;
  if (n == "std-euclidean" || n == "standardized-euclidean")
    return CentroidMethod::StandardizedEuclidean;
  if (n == "mode-norm" || n == "mode-norm-euclidean") return CentroidMethod::ModeNormEuclidean;
  if (n == "cog") return CentroidMethod::Cog;
  return std::nullopt;
}

std::string_view to_string(InterpolationMethod m) {
  switch (m) {
    case InterpolationMethod::Lerp: return "lerp";
    case InterpolationMethod::Slerp: return "slerp";
    case InterpolationMethod::Cog: return "cog";
  }
  return "?";
}

std::string_view to_string(CentroidMethod m) {
  switch (m) {
    case CentroidMethod::Euclidean: return "euclidean";
    case CentroidMethod::StandardizedEuclidean: return "std-euclidean";
    case CentroidMethod::ModeNormEuclidean: return "mode-norm";
    case CentroidMethod::Cog: return "cog";
  }
  return "?";
}

WeightVec lerp_weights(double v) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InvalidArgument("interpolation parameter v = " + std::to_string(v) +
                          " is outside [0, 1]");
  }
  return WeightVec({v, 1.0 - v});
}

WeightVec slerp_weights_from_cosine(double v, double cosine) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InvalidArgument("interpolation parameter v = " + std::to_string(v) +
                          " is outside [0, 1]");
  }
  const double theta = std::acos(std::clamp(cosine, -1.0, 1.0));
  const double sin_theta = std::sin(theta);
  if (sin_theta < kSlerpMinSin) return lerp_weights(v);
  return WeightVec({std::sin(v * theta) / sin_theta, std::sin((1.0 - v) * theta) / sin_theta});
}

WeightVec slerp_weights(double v, const Latent& x1, const Latent& x2) {
  require_dim(x2, x1.dim(), "slerp endpoint");
  const double n1 = norm(x1.values());
  const double n2 = norm(x2.values());
  if (!(n1 > 0.0) || !(n2 > 0.0)) throw InvalidArgument("slerp: endpoint has zero norm");
  double dot = 0.0;
  for (std::size_t d = 0; d < x1.dim(); ++d) dot += x1[d] * x2[d];
  return slerp_weights_from_cosine(v, dot / (n1 * n2));
}

Latent interpolate(const Latent& x1, const Latent& x2, double v, InterpolationMethod method,
                   const GaussianSpec& spec) {
  require_dim(x1, spec.dim(), "interpolation endpoint");
  require_dim(x2, spec.dim(), "interpolation endpoint");
  const Latent pair[] = {x1, x2};
  switch (method) {
    case InterpolationMethod::Lerp: return linear_combine(pair, lerp_weights(v));
    case InterpolationMethod::Slerp: return linear_combine(pair, slerp_weights(v, x1, x2));
    case InterpolationMethod::Cog: return cog_combine(pair, lerp_weights(v), spec);
  }
  throw InvalidArgument("unknown interpolation method");
}

Latent standardize_components(const Latent& x) {
  const auto n = static_cast<double>(x.dim());
  const double m = std::accumulate(x.values().begin(), x.values().end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x.values()) ss += (v - m) * (v - m);
  const double s = std::sqrt(ss / n);
  if (!(s > 0.0)) {
    throw InvalidArgument("standardized centroid: components are constant (zero spread)");
  }
  std::vector<double> out(x.dim());
  for (std::size_t d = 0; d < out.size(); ++d) out[d] = (x[d] - m) / s;
  return Latent(std::move(out));
}

Latent rescale_to_mode_norm(const Latent& x) {
  if (x.dim() < 3) {
    throw InvalidArgument("mode-norm centroid: the chi-squared mode D - 2 needs D >= 3");
  }
  const double n = norm(x.values());
  if (!(n > 0.0)) throw InvalidArgument("mode-norm centroid: centroid has zero norm");
  const double scale = std::sqrt(static_cast<double>(x.dim() - 2)) / n;
  std::vector<double> out(x.dim());
  for (std::size_t d = 0; d < out.size(); ++d) out[d] = x[d] * scale;
  return Latent(std::move(out));
}

Latent centroid(std::span<const Latent> latents, CentroidMethod method,
                const GaussianSpec& spec, CentroidOptions options) {
  if (latents.empty()) throw InvalidArgument("centroid: at least one latent is required");
  for (const auto& x : latents) require_dim(x, spec.dim(), "centroid input");

  const auto sorted = canonical_order(latents);
  const auto uniform = uniform_weights(sorted.size());

  switch (method) {
    case CentroidMethod::Euclidean: return linear_combine(sorted, uniform);
    case CentroidMethod::Cog: return cog_combine(sorted, uniform, spec);
    case CentroidMethod::StandardizedEuclidean:
    case CentroidMethod::ModeNormEuclidean: break;
  }

  if (options.strict_baselines && !spec.is_standard()) {
    throw InvalidArgument(std::string("centroid: ") + std::string(to_string(method)) +
                          " is only defined for a zero-mean unit-variance prior");
  }

  // Work in standardized coordinates, then map back onto the prior.
  std::vector<Latent> standardized;
  standardized.reserve(sorted.size());
  for (const auto& x : sorted) {
    std::vector<double> u(x.dim());
    for (std::size_t d = 0; d < u.size(); ++d) u[d] = (x[d] - spec.mean(d)) / spec.stddev(d);
    standardized.emplace_back(std::move(u));
  }
  const Latent mean = linear_combine(standardized, uniform);
  const Latent shaped = method == CentroidMethod::StandardizedEuclidean
                            ? standardize_components(mean)
                            : rescale_to_mode_norm(mean);
  std::vector<double> out(shaped.dim());
  for (std::size_t d = 0; d < out.size(); ++d) out[d] = shaped[d] * spec.stddev(d) + spec.mean(d);
  return Latent(std::move(out));
}

}  // namespace cog

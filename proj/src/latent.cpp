#include "cog/latent.hpp"

#include <cmath>
#include <string>

#include "cog/error.hpp"

namespace cog {

namespace {

void check_finite(std::span<const double> values, const char* what) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw NonFinite(std::string(what) + ": entry " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace

Latent::Latent(std::vector<double> values) : values_(std::move(values)) {
  check_finite(values_, "latent");
}

GaussianSpec::GaussianSpec(std::size_t dim, Mean mean, Covariance cov)
    : dim_(dim), mean_(std::move(mean)), cov_(std::move(cov)) {
  if (dim_ == 0) throw InvalidArgument("spec: dim must be at least 1");

  if (auto* m = std::get_if<std::vector<double>>(&mean_)) {
    if (m->size() != dim_) {
      throw DimensionMismatch("spec: mean has " + std::to_string(m->size()) +
                              " components, expected " + std::to_string(dim_));
    }
    check_finite(*m, "spec mean");
  } else {
    check_finite(std::span<const double>(&std::get<double>(mean_), 1), "spec mean");
  }

  auto check_variance = [](double v, std::size_t i) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw InvalidArgument("spec: variance " + std::to_string(i) +
                            " must be finite and strictly positive");
    }
  };
  if (auto* c = std::get_if<std::vector<double>>(&cov_)) {
    if (c->size() != dim_) {
      throw DimensionMismatch("spec: covariance diagonal has " + std::to_string(c->size()) +
                              " entries, expected " + std::to_string(dim_));
    }
    for (std::size_t i = 0; i < c->size(); ++i) check_variance((*c)[i], i);
  } else {
    check_variance(std::get<double>(cov_), 0);
  }
}

double GaussianSpec::mean(std::size_t d) const noexcept {
  if (auto* m = std::get_if<double>(&mean_)) return *m;
  return std::get<std::vector<double>>(mean_)[d];
}

double GaussianSpec::variance(std::size_t d) const noexcept {
  if (auto* c = std::get_if<double>(&cov_)) return *c;
  return std::get<std::vector<double>>(cov_)[d];
}

double GaussianSpec::stddev(std::size_t d) const noexcept { return std::sqrt(variance(d)); }

bool GaussianSpec::is_zero_mean() const noexcept {
  if (auto* m = std::get_if<double>(&mean_)) return *m == 0.0;
  for (double v : std::get<std::vector<double>>(mean_)) {
    if (v != 0.0) return false;
  }
  return true;
}

bool GaussianSpec::is_standard() const noexcept {
  if (!is_zero_mean()) return false;
  if (auto* c = std::get_if<double>(&cov_)) return *c == 1.0;
  for (double v : std::get<std::vector<double>>(cov_)) {
    if (v != 1.0) return false;
  }
  return true;
}

WeightVec::WeightVec(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidArgument("weights: at least one weight is required");
  check_finite(weights_, "weights");
  for (double w : weights_) {
    alpha_ += w;
    beta_ += w * w;
  }
}

WeightVec combination_stats(std::vector<double> weights) { return WeightVec(std::move(weights)); }

void require_dim(const Latent& x, std::size_t dim, const char* what) {
  if (x.dim() != dim) {
    throw DimensionMismatch(std::string(what) + " has dimension " + std::to_string(x.dim()) +
                            ", expected " + std::to_string(dim));
  }
}

void require_same_dim(std::span<const Latent> latents) {
  if (latents.empty()) throw InvalidArgument("at least one latent is required");
  const std::size_t dim = latents.front().dim();
  for (const auto& x : latents) require_dim(x, dim, "latent");
}

Latent linear_combine(std::span<const Latent> latents, const WeightVec& w) {
  require_same_dim(latents);
  if (latents.size() != w.size()) {
    throw DimensionMismatch("linear_combine: " + std::to_string(latents.size()) +
                            " latents but " + std::to_string(w.size()) + " weights");
  }
  const std::size_t dim = latents.front().dim();
  std::vector<double> y(dim, 0.0);
  for (std::size_t k = 0; k < latents.size(); ++k) {
    const double wk = w[k];
    const auto x = latents[k].values();
    for (std::size_t d = 0; d < dim; ++d) y[d] += wk * x[d];
  }
  return Latent(std::move(y));
}

Latent cog_transform(const Latent& y, const WeightVec& w, const GaussianSpec& spec) {
  require_dim(y, spec.dim(), "cog_transform input");
  if (!(w.beta() > kBetaMin)) {
    throw DegenerateWeights("cog_transform: beta = " + std::to_string(w.beta()) +
                            " does not exceed the minimum of 1e-12");
  }
  const double root_beta = std::sqrt(w.beta());
  const double shift = 1.0 - w.alpha() / root_beta;
  std::vector<double> z(y.dim());
  for (std::size_t d = 0; d < z.size(); ++d) z[d] = shift * spec.mean(d) + y[d] / root_beta;
  return Latent(std::move(z));
}

Latent cog_combine(std::span<const Latent> latents, const WeightVec& w,
                   const GaussianSpec& spec) {
  return cog_transform(linear_combine(latents, w), w, spec);
}

Latent cog_combine(std::span<const Latent> latents, std::vector<double> weights,
                   const GaussianSpec& spec) {
  return cog_combine(latents, combination_stats(std::move(weights)), spec);
}

}  // namespace cog

#pragma once

// Gaussian latent primitives: the prior N(mu, Sigma), latent vectors,
// combination weights and the distribution-restoring transform
//
//   z = (1 - alpha / sqrt(beta)) * mu + y / sqrt(beta),
//   y = sum_k w_k x_k,  alpha = sum_k w_k,  beta = sum_k w_k^2,
//
// which maps any linear combination of i.i.d. N(mu, Sigma) latents back to
// N(mu, Sigma).

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace cog {

/// Weights whose squared sum is at or below this are rejected by the
/// transform (the combination carries no sample information).
inline constexpr double kBetaMin = 1e-12;

/// A D-dimensional real vector with finite entries.
class Latent {
 public:
  Latent() = default;
  /// Throws NonFinite if any entry is NaN or infinite.
  explicit Latent(std::vector<double> values);

  std::size_t dim() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& vector() const noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  friend bool operator==(const Latent&, const Latent&) = default;

 private:
  std::vector<double> values_;
};

/// Diagonal Gaussian prior. Mean and covariance are each stored either as a
/// scalar broadcast over all components or as one value per component.
class GaussianSpec {
 public:
  using Mean = std::variant<double, std::vector<double>>;
  /// A scalar is an isotropic variance; a vector is the covariance diagonal.
  using Covariance = std::variant<double, std::vector<double>>;

  GaussianSpec(std::size_t dim, Mean mean, Covariance cov);

  static GaussianSpec standard(std::size_t dim) { return {dim, 0.0, 1.0}; }
  static GaussianSpec isotropic(std::size_t dim, double mean, double variance) {
    return {dim, mean, variance};
  }

  std::size_t dim() const noexcept { return dim_; }
  double mean(std::size_t d) const noexcept;
  double variance(std::size_t d) const noexcept;
  double stddev(std::size_t d) const noexcept;

  const Mean& mean_storage() const noexcept { return mean_; }
  const Covariance& cov_storage() const noexcept { return cov_; }

  bool has_scalar_mean() const noexcept { return std::holds_alternative<double>(mean_); }
  bool is_isotropic() const noexcept { return std::holds_alternative<double>(cov_); }
  /// True when every mean component is 0.
  bool is_zero_mean() const noexcept;
  /// True for N(0, I).
  bool is_standard() const noexcept;

 private:
  std::size_t dim_;
  Mean mean_;
  Covariance cov_;
};

/// Combination weights with their sum (alpha) and squared sum (beta).
class WeightVec {
 public:
  /// Throws InvalidArgument for an empty list, NonFinite for NaN/Inf entries.
  explicit WeightVec(std::vector<double> weights);

  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  double operator[](std::size_t k) const noexcept { return weights_[k]; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

 private:
  std::vector<double> weights_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
};

WeightVec combination_stats(std::vector<double> weights);

/// y_d = sum_k w_k * x_k[d], summed in index order.
Latent linear_combine(std::span<const Latent> latents, const WeightVec& w);

/// Throws DegenerateWeights when w.beta() <= kBetaMin.
Latent cog_transform(const Latent& y, const WeightVec& w, const GaussianSpec& spec);

Latent cog_combine(std::span<const Latent> latents, const WeightVec& w,
                   const GaussianSpec& spec);
Latent cog_combine(std::span<const Latent> latents, std::vector<double> weights,
                   const GaussianSpec& spec);

// Shared argument checks.
void require_dim(const Latent& x, std::size_t dim, const char* what);
void require_same_dim(std::span<const Latent> latents);

}  // namespace cog

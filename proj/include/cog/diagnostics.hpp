#pragma once

// Statistical checks for Gaussian latents: chi-squared norm typicality,
// diagonal Gaussian log-density, Monte Carlo estimates of the SLERP weight
// energy beta, and a moment test of corrected combinations.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cog/latent.hpp"

namespace cog {

/// log N(x; mu, Sigma) for a diagonal Sigma.
double gaussian_log_density(const Latent& x, const GaussianSpec& spec);

/// The mode D - 2 of chi^2(D). Throws InvalidArgument for D < 3.
double chi2_mode(std::size_t dof);

/// log P(chi^2(dof) <= t), -inf at t = 0.
double chi2_log_cdf(double t, std::size_t dof);
/// log P(chi^2(dof) > t), 0 at t = 0.
double chi2_log_sf(double t, std::size_t dof);

struct TypicalityReport {
  double norm = 0.0;        ///< ||(x - mu) / sigma||
  double norm_sq = 0.0;
  double norm_log_cdf = 0.0;
  double norm_log_sf = 0.0;
  double log_density = 0.0;
  /// Probability that a prior sample has log-density at or below this one.
  double density_percentile = 0.0;
};

TypicalityReport typicality_report(const Latent& x, const GaussianSpec& spec);

struct IntervalEstimate {
  double lo = 0.0;
  double hi = 0.0;
  double confidence = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Central empirical quantile interval of the SLERP beta over n_samples
/// pairs x1, x2 ~ N(0, I_dim). Pair i is drawn from normal substream i
/// (x1 components first, then x2). `threads` = 0 uses all cores; the result
/// is the same for every thread count.
IntervalEstimate estimate_slerp_beta_ci(std::size_t dim, std::size_t n_samples, double v,
                                        double confidence, std::uint64_t seed,
                                        unsigned threads = 0);

/// Empirical quantile with linear interpolation between order statistics
/// (h = (n - 1) p). `sorted` must be ascending and non-empty.
double empirical_quantile(std::span<const double> sorted, double p);

/// count i.i.d. draws from spec; latent i comes from normal substream i.
std::vector<Latent> sample_latents(const GaussianSpec& spec, std::size_t count,
                                   std::uint64_t seed, unsigned threads = 0);

enum class CombineMode { Corrected, Uncorrected };

struct CogDistributionReport {
  std::size_t dim = 0;
  std::size_t n_trials = 0;
  double alpha = 0.0;
  double beta = 0.0;
  CombineMode mode = CombineMode::Corrected;
  /// Per component: (sample mean - mu_d) / sigma_d.
  std::vector<double> standardized_mean_error;
  /// Per component: sample variance / Sigma_dd.
  std::vector<double> variance_ratio;
  double max_mean_error = 0.0;
  double max_variance_error = 0.0;
  double mean_tolerance = 0.0;      ///< 5 / sqrt(n_trials)
  double variance_tolerance = 0.1;
  bool passed = false;
};

/// Draws n_trials independent groups of K = weights.size() latents from
/// spec (trial t uses normal substream t, latents in order) and combines
/// each group, corrected or not. Passes iff every component's standardized
/// mean error is within 5 / sqrt(n_trials) and its variance is within 10% of
/// Sigma_dd. Throws DegenerateWeights when beta <= kBetaMin.
CogDistributionReport check_cog_distribution(const GaussianSpec& spec,
                                             std::vector<double> weights,
                                             std::size_t n_trials, std::uint64_t seed,
                                             CombineMode mode = CombineMode::Corrected,
                                             unsigned threads = 0);

}  // namespace cog

#include "cog/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>

#include "cog/error.hpp"
#include "cog/parallel.hpp"
#include "cog/random.hpp"
#include "cog/schemes.hpp"

namespace cog {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr int kMaxIterations = 1'000'000;

// log P(a, x) by the power series, for x < a + 1.
double log_lower_gamma_series(double a, double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return a * std::log(x) - x - std::lgamma(a + 1.0) + std::log(sum);
}

// log Q(a, x) by the modified Lentz continued fraction, for x >= a + 1.
double log_upper_gamma_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return a * std::log(x) - x - std::lgamma(a) + std::log(h);
}

void check_chi2_args(double t, std::size_t dof) {
  if (dof == 0) throw InvalidArgument("chi-squared: degrees of freedom must be at least 1");
  if (std::isnan(t) || t < 0.0) throw InvalidArgument("chi-squared: argument must be >= 0");
}

// Returns {log P, log Q} for chi^2(dof) at t.
std::pair<double, double> chi2_log_tails(double t, std::size_t dof) {
  check_chi2_args(t, dof);
  if (t == 0.0) return {kNegInf, 0.0};
  if (std::isinf(t)) return {0.0, kNegInf};
  const double a = 0.5 * static_cast<double>(dof);
  const double x = 0.5 * t;
  if (x < a + 1.0) {
    const double lp = log_lower_gamma_series(a, x);
    return {lp, std::log1p(-std::exp(lp))};
  }
  const double lq = log_upper_gamma_fraction(a, x);
  return {std::log1p(-std::exp(lq)), lq};
}

double log_normalizer(const GaussianSpec& spec) {
  const double two_pi = 2.0 * std::numbers::pi;
  if (spec.is_isotropic()) {
    return static_cast<double>(spec.dim()) * std::log(two_pi * spec.variance(0));
  }
  double s = 0.0;
  for (std::size_t d = 0; d < spec.dim(); ++d) s += std::log(two_pi * spec.variance(d));
  return s;
}

double standardized_norm_sq(const Latent& x, const GaussianSpec& spec) {
  double q = 0.0;
  for (std::size_t d = 0; d < x.dim(); ++d) {
    const double u = x[d] - spec.mean(d);
    q += u * u / spec.variance(d);
  }
  return q;
}

}  // namespace

double gaussian_log_density(const Latent& x, const GaussianSpec& spec) {
  require_dim(x, spec.dim(), "log-density input");
  return -0.5 * (log_normalizer(spec) + standardized_norm_sq(x, spec));
}

double chi2_mode(std::size_t dof) {
  if (dof < 3) throw InvalidArgument("chi-squared mode: needs at least 3 degrees of freedom");
  return static_cast<double>(dof - 2);
}

double chi2_log_cdf(double t, std::size_t dof) { return chi2_log_tails(t, dof).first; }
double chi2_log_sf(double t, std::size_t dof) { return chi2_log_tails(t, dof).second; }

TypicalityReport typicality_report(const Latent& x, const GaussianSpec& spec) {
  require_dim(x, spec.dim(), "typicality input");
  TypicalityReport report;
  report.norm_sq = standardized_norm_sq(x, spec);
  report.norm = std::sqrt(report.norm_sq);
  std::tie(report.norm_log_cdf, report.norm_log_sf) = chi2_log_tails(report.norm_sq, spec.dim());
  report.log_density = -0.5 * (log_normalizer(spec) + report.norm_sq);
  // Lower density <=> larger quadratic form, whose law is chi^2(D).
  report.density_percentile = std::exp(report.norm_log_sf);
  return report;
}

double empirical_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InvalidArgument("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("quantile level must be in [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

IntervalEstimate estimate_slerp_beta_ci(std::size_t dim, std::size_t n_samples, double v,
                                        double confidence, std::uint64_t seed,
                                        unsigned threads) {
  if (dim == 0) throw InvalidArgument("slerp beta: dimension must be at least 1");
  if (n_samples < 100) throw InvalidArgument("slerp beta: at least 100 samples are required");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InvalidArgument("slerp beta: confidence must lie strictly between 0 and 1");
  }
  if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("slerp beta: v must lie in [0, 1]");

  std::vector<double> betas(n_samples);
  parallel_for(n_samples, threads, [&](std::size_t i) {
    NormalStream stream(seed, i);
    // x1 is needed again for the inner product, so keep it.
    std::vector<double> x1(dim);
    double n1 = 0.0;
    for (auto& c : x1) {
      c = stream.next();
      n1 += c * c;
    }
    double n2 = 0.0;
    double dot = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double c = stream.next();
      n2 += c * c;
      dot += x1[d] * c;
    }
    if (!(n1 > 0.0) || !(n2 > 0.0)) throw InvalidArgument("slerp beta: zero-norm sample");
    betas[i] = slerp_weights_from_cosine(v, dot / (std::sqrt(n1) * std::sqrt(n2))).beta();
  });

  std::sort(betas.begin(), betas.end());
  IntervalEstimate ci;
  ci.lo = empirical_quantile(betas, 0.5 * (1.0 - confidence));
  ci.hi = empirical_quantile(betas, 0.5 * (1.0 + confidence));
  ci.confidence = confidence;
  ci.n_samples = n_samples;
  ci.seed = seed;
  return ci;
}

std::vector<Latent> sample_latents(const GaussianSpec& spec, std::size_t count,
                                   std::uint64_t seed, unsigned threads) {
  if (count == 0) throw InvalidArgument("sample: count must be at least 1");
  std::vector<std::vector<double>> raw(count);
  parallel_for(count, threads, [&](std::size_t i) {
    NormalStream stream(seed, i);
    auto& x = raw[i];
    x.resize(spec.dim());
    for (std::size_t d = 0; d < x.size(); ++d) x[d] = spec.mean(d) + spec.stddev(d) * stream.next();
  });
  std::vector<Latent> out;
  out.reserve(count);
  for (auto& x : raw) out.emplace_back(std::move(x));
  return out;
}

CogDistributionReport check_cog_distribution(const GaussianSpec& spec,
                                             std::vector<double> weights,
                                             std::size_t n_trials, std::uint64_t seed,
                                             CombineMode mode, unsigned threads) {
  const WeightVec w(std::move(weights));
  if (!(w.beta() > kBetaMin)) {
    throw DegenerateWeights("cog distribution check: beta = " + std::to_string(w.beta()) +
                            " does not exceed the minimum of 1e-12");
  }
  if (n_trials < 2) throw InvalidArgument("cog distribution check: needs at least 2 trials");

  const std::size_t dim = spec.dim();
  const std::size_t k_count = w.size();

  // Trials are grouped into fixed-size chunks whose partial sums are folded
  // in chunk order, so the statistics are identical for any thread count.
  constexpr std::size_t kChunk = 256;
  constexpr std::size_t kChunksPerWave = 16;
  const std::size_t n_chunks = (n_trials + kChunk - 1) / kChunk;

  // Sums of (z_d - mu_d) and (z_d - mu_d)^2.
  std::vector<double> sum1(dim, 0.0);
  std::vector<double> sum2(dim, 0.0);

  for (std::size_t wave = 0; wave < n_chunks; wave += kChunksPerWave) {
    const std::size_t wave_size = std::min(kChunksPerWave, n_chunks - wave);
    std::vector<std::vector<double>> part1(wave_size), part2(wave_size);
    parallel_for(wave_size, threads, [&](std::size_t j) {
      const std::size_t chunk = wave + j;
      auto& s1 = part1[j];
      auto& s2 = part2[j];
      s1.assign(dim, 0.0);
      s2.assign(dim, 0.0);
      std::vector<Latent> group(k_count);
      std::vector<double> x(dim);
      const std::size_t end = std::min(n_trials, (chunk + 1) * kChunk);
      for (std::size_t t = chunk * kChunk; t < end; ++t) {
        NormalStream stream(seed, t);
        for (auto& latent : group) {
          for (std::size_t d = 0; d < dim; ++d)
            x[d] = spec.mean(d) + spec.stddev(d) * stream.next();
          latent = Latent(x);
        }
        const Latent z = mode == CombineMode::Corrected ? cog_combine(group, w, spec)
                                                        : linear_combine(group, w);
        for (std::size_t d = 0; d < dim; ++d) {
          const double c = z[d] - spec.mean(d);
          s1[d] += c;
          s2[d] += c * c;
        }
      }
    });
    for (std::size_t j = 0; j < wave_size; ++j) {
      for (std::size_t d = 0; d < dim; ++d) {
        sum1[d] += part1[j][d];
        sum2[d] += part2[j][d];
      }
    }
  }

  CogDistributionReport report;
  report.dim = dim;
  report.n_trials = n_trials;
  report.alpha = w.alpha();
  report.beta = w.beta();
  report.mode = mode;
  report.mean_tolerance = 5.0 / std::sqrt(static_cast<double>(n_trials));
  report.standardized_mean_error.resize(dim);
  report.variance_ratio.resize(dim);
  const auto n = static_cast<double>(n_trials);
  for (std::size_t d = 0; d < dim; ++d) {
    const double centered_mean = sum1[d] / n;
    const double var = (sum2[d] - n * centered_mean * centered_mean) / (n - 1.0);
    report.standardized_mean_error[d] = centered_mean / spec.stddev(d);
    report.variance_ratio[d] = var / spec.variance(d);
    report.max_mean_error =
        std::max(report.max_mean_error, std::abs(report.standardized_mean_error[d]));
    report.max_variance_error =
        std::max(report.max_variance_error, std::abs(report.variance_ratio[d] - 1.0));
  }
  report.passed = report.max_mean_error <= report.mean_tolerance &&
                  report.max_variance_error <= report.variance_tolerance;
  return report;
}

}  // namespace cog

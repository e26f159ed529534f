// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cog/diagnostics.hpp"
#include "cog/error.hpp"
#include "cog/latent_io.hpp"
#include "cog/schemes.hpp"
#include "cog/subspace.hpp"
#include "oracles.hpp"

using namespace cog;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult cli(const std::string& args) {
  const std::string cmd = std::string(COGL_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {};
  CliResult r;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// 1. Corrected combinations follow the prior; the plain sum does not.
Outcome moment_test() {
  Outcome o;
  const auto spec = GaussianSpec::isotropic(1024, 0.3, 2.0);
  const std::vector<double> w = {0.7, 0.2, -0.4};
  const auto r = check_cog_distribution(spec, w, 20000, 20240501);
  o.require(r.max_mean_error <= 5.0 / std::sqrt(20000.0),
            fmt("mean error %.4g > %.4g", r.max_mean_error, r.mean_tolerance));
  o.require(r.max_variance_error <= 0.1, fmt("variance error %.4g", r.max_variance_error));
  o.require(r.passed, "corrected report not passed");
  const auto raw = check_cog_distribution(spec, w, 20000, 20240501, CombineMode::Uncorrected);
  o.require(raw.max_variance_error > 0.1 && !raw.passed,
            fmt("uncorrected variance error %.4g passed", raw.max_variance_error));
  o.detail = fmt("mean_err=%.4g var_err=%.4g", r.max_mean_error, r.max_variance_error) +
             fmt(" uncorrected_var_err=%.4g", raw.max_variance_error) +
             (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

// 2. Empirical 99% interval of the SLERP beta at v = 0.5, via the CLI.
Outcome slerp_beta_interval() {
  Outcome o;
  struct Case {
    std::size_t dim;
    double lo, hi, tol;
  };
  std::string summary;
  for (const Case c : {Case{147456, 0.9934, 1.0067, 0.0015}, Case{36864, 0.9868, 1.014, 0.002}}) {
    const auto r = cli("verify slerp-beta --dim " + std::to_string(c.dim) +
                       " --samples 10000 --v 0.5 --confidence 0.99");
    double lo = NAN, hi = NAN;
    std::istringstream(r.out) >> lo >> hi;
    o.require(r.code == 0, "cli exit " + std::to_string(r.code));
    o.require(std::abs(lo - c.lo) <= c.tol && std::abs(hi - c.hi) <= c.tol,
              "dim " + std::to_string(c.dim) + fmt(" gave [%.5f, %.5f]", lo, hi));
    summary += "D=" + std::to_string(c.dim) + fmt(" [%.5f, %.5f] ", lo, hi);
  }
  o.detail = summary + o.detail;
  return o;
}

// 3. Chi-squared tails at the quoted norms for D = 36864.
Outcome chi2_tails() {
  Outcome o;
  const double lo = chi2_log_cdf(186.21 * 186.21, 36864) / std::log(10.0);
  const double hi = chi2_log_sf(197.83 * 197.83, 36864) / std::log(10.0);
  o.require(lo >= -17.5 && lo <= -14.5, fmt("log10 cdf %.3f", lo));
  o.require(hi >= -17.5 && hi <= -14.5, fmt("log10 sf %.3f", hi));
  o.detail = fmt("log10 P(<186.21)=%.3f log10 P(>197.83)=%.3f", lo, hi);
  return o;
}

// 4. Random subspaces against a normal-equations oracle.
Outcome subspace_oracle() {
  Outcome o;
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<std::size_t> dim_dist(4, 64), k_dist(1, 8);
  std::size_t instances = 0;
  double worst_orth = 0, worst_qr = 0, worst_w = 0, worst_rec = 0, worst_fix = 0;
  while (instances < 250) {
    const std::size_t dim = dim_dist(rng);
    const std::size_t k = std::min(k_dist(rng), dim);
    const auto xs = testing::random_latents(rng, k, dim);
    const auto spec = GaussianSpec::standard(dim);
    const auto basis = build_basis(xs);
    const auto& u = basis.u();
    const auto& r = basis.r();
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        double dot = 0.0;
        for (std::size_t d = 0; d < dim; ++d) dot += u(d, i) * u(d, j);
        worst_orth = std::max(worst_orth, std::abs(dot - (i == j ? 1.0 : 0.0)));
      }
    for (std::size_t d = 0; d < dim; ++d)
      for (std::size_t j = 0; j < k; ++j) {
        double ur = 0.0;
        for (std::size_t i = 0; i < k; ++i) ur += u(d, i) * r(i, j);
        worst_qr = std::max(worst_qr, std::abs(ur - xs[j][d]));
      }

    const auto oracle = testing::normal_equations_pinv(xs);
    const Latent x(testing::random_vector(rng, dim));
    const auto s = project(basis, x);
    const auto w = recover_weights(basis, s);
    const auto w_ref = testing::apply(oracle, s.values());
    worst_w = std::max(worst_w, testing::max_abs_diff(w.weights(), w_ref));
    const auto as = linear_combine(xs, w);
    worst_rec = std::max(worst_rec, testing::max_abs_diff(as.values(), s.values()) / norm(s.values()));

    for (std::size_t j = 0; j < k; ++j) {
      const auto z = latent_at(basis, coords(basis, xs[j]), spec);
      worst_fix = std::max(worst_fix, testing::max_abs_diff(z.values(), xs[j].values()));
    }
    ++instances;
  }
  o.require(worst_orth <= 1e-10, fmt("U^T U error %.3g", worst_orth));
  o.require(worst_qr <= 1e-10, fmt("A - UR error %.3g", worst_qr));
  o.require(worst_w <= 1e-9, fmt("weights vs oracle %.3g", worst_w));
  o.require(worst_rec <= 1e-8, fmt("reconstruction %.3g", worst_rec));
  o.require(worst_fix <= 1e-9, fmt("fixpoint %.3g", worst_fix));
  o.detail = std::to_string(instances) + " instances" +
             fmt(" orth=%.2g qr=%.2g", worst_orth, worst_qr) +
             fmt(" w=%.2g rec=%.2g", worst_w, worst_rec) + fmt(" fix=%.2g", worst_fix) +
             (o.detail.empty() ? "" : " (" + o.detail + ")");
  return o;
}

// 5. Endpoints and one-hot selectors.
Outcome endpoints() {
  Outcome o;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 3 + trial;
    const double mu = 0.1 * (trial % 7) - 0.3;
    const auto spec = GaussianSpec::isotropic(dim, mu, 0.5 + 0.1 * (trial % 5));
    const auto xs = sample_latents(spec, 4, 1000 + trial, 1);
    for (auto m : {InterpolationMethod::Lerp, InterpolationMethod::Slerp, InterpolationMethod::Cog}) {
      worst = std::max(worst, testing::max_abs_diff(interpolate(xs[0], xs[1], 1.0, m, spec).values(),
                                                    xs[0].values()));
      worst = std::max(worst, testing::max_abs_diff(interpolate(xs[0], xs[1], 0.0, m, spec).values(),
                                                    xs[1].values()));
    }
    for (std::size_t k = 0; k < xs.size(); ++k) {
      std::vector<double> w(xs.size(), 0.0);
      w[k] = 1.0;
      worst = std::max(worst, testing::max_abs_diff(cog_combine(xs, w, spec).values(), xs[k].values()));
    }
  }
  o.require(worst <= 1e-12, fmt("max error %.3g", worst));
  o.detail = fmt("max error %.3g", worst);
  return o;
}

// 6. Centroid identities.
Outcome centroid_algebra() {
  Outcome o;
  double worst_cog = 0, worst_mode = 0, worst_std = 0;
  for (std::size_t k : {2, 3, 5, 8, 16}) {
    for (std::size_t dim : {3, 16, 257}) {
      const auto unit = GaussianSpec::isotropic(dim, 0.0, 1.7);
      const auto xs = sample_latents(unit, k, 31 * k + dim, 1);
      const auto c = centroid(xs, CentroidMethod::Cog, unit);
      const auto e = centroid(xs, CentroidMethod::Euclidean, unit);
      for (std::size_t d = 0; d < dim; ++d)
        worst_cog = std::max(worst_cog, std::abs(c[d] - std::sqrt(double(k)) * e[d]));

      const auto std_spec = GaussianSpec::standard(dim);
      const auto m = centroid(xs, CentroidMethod::ModeNormEuclidean, std_spec);
      worst_mode = std::max(worst_mode, std::abs(norm(m.values()) - std::sqrt(double(dim) - 2.0)));

      const auto s = standardize_components(e);
      double mean = 0.0, var = 0.0;
      for (double v : s.values()) mean += v;
      mean /= double(dim);
      for (double v : s.values()) var += (v - mean) * (v - mean);
      var /= double(dim);
      worst_std = std::max({worst_std, std::abs(mean), std::abs(var - 1.0)});
      const auto strict = centroid(xs, CentroidMethod::StandardizedEuclidean, std_spec,
                                   CentroidOptions{.strict_baselines = true});
      worst_std = std::max(worst_std, testing::max_abs_diff(strict.values(), s.values()));
    }
  }
  o.require(worst_cog <= 1e-12, fmt("cog vs sqrt(K) euclidean %.3g", worst_cog));
  o.require(worst_mode <= 1e-9, fmt("mode norm %.3g", worst_mode));
  o.require(worst_std <= 1e-9, fmt("standardized moments %.3g", worst_std));
  o.detail = fmt("cog=%.2g mode=%.2g", worst_cog, worst_mode) + fmt(" std=%.2g", worst_std);
  return o;
}

template <class E>
bool rejects(const std::string& bytes) {
  try {
    decode_latents(bytes);
  } catch (const E&) {
    return true;
  } catch (...) {
    return false;
  }
  return false;
}

// 7. COGL round trip and header validation.
Outcome file_format() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::vector<Latent> xs;
  for (int i = 0; i < 1000; ++i) {
    auto v = testing::random_vector(rng, 37, 3.0);
    v[i % 37] = i % 2 ? 1e300 : -4.9e-324;
    xs.emplace_back(std::move(v));
  }
  const auto path = fs::temp_directory_path() / ("cog_accept_" + std::to_string(::getpid()) + ".cogl");
  write_latents(path, xs, Dtype::Float64);
  const auto back = read_latents(path);
  const auto bytes = slurp(path);
  fs::remove(path);
  bool identical = back.size() == xs.size();
  for (std::size_t i = 0; identical && i < xs.size(); ++i)
    identical = std::memcmp(back[i].values().data(), xs[i].values().data(), 37 * sizeof(double)) == 0;
  o.require(identical, "round trip not bit-identical");

  auto mutate = [&](std::size_t off, char v) {
    auto b = bytes;
    b[off] = v;
    return b;
  };
  o.require(rejects<BadMagic>(mutate(0, 'X')), "magic");
  o.require(rejects<BadVersion>(mutate(4, 2)), "version");
  o.require(rejects<BadDtype>(mutate(6, 3)), "dtype");
  o.require(rejects<BadFlags>(mutate(7, 1)), "flags");
  o.require(rejects<BadReserved>(mutate(24, 1)), "reserved");
  o.require(rejects<Truncated>(bytes.substr(0, bytes.size() - 1)), "truncated body");
  o.require(rejects<Truncated>(bytes.substr(0, 27)), "truncated header");
  o.require(rejects<TrailingBytes>(bytes + '\0'), "trailing bytes");
  o.require(rejects<DimensionOverflow>(mutate(15, '\x7f')), "dimension overflow");
  o.detail = std::to_string(back.size()) + " latents, " + std::to_string(bytes.size()) + " bytes" +
             (o.detail.empty() ? "" : " (failed: " + o.detail + ")");
  return o;
}

// 8. Seeded outputs repeat across runs and thread counts.
Outcome determinism() {
  Outcome o;
  const auto spec = GaussianSpec::isotropic(96, 0.3, 2.0);
  o.require(sample_latents(spec, 300, 11, 1) == sample_latents(spec, 300, 11, 8) &&
                sample_latents(spec, 300, 11, 1) == sample_latents(spec, 300, 11, 1),
            "sample_latents");
  const auto ci1 = estimate_slerp_beta_ci(512, 400, 0.3, 0.95, 4, 1);
  const auto ci8 = estimate_slerp_beta_ci(512, 400, 0.3, 0.95, 4, 8);
  o.require(ci1.lo == ci8.lo && ci1.hi == ci8.hi, "slerp beta interval");
  const std::vector<double> w = {0.7, 0.2, -0.4};
  const auto a = check_cog_distribution(spec, w, 2000, 9, CombineMode::Corrected, 1);
  const auto b = check_cog_distribution(spec, w, 2000, 9, CombineMode::Corrected, 8);
  const auto c = check_cog_distribution(spec, w, 2000, 9, CombineMode::Corrected, 1);
  o.require(a.standardized_mean_error == b.standardized_mean_error &&
                a.variance_ratio == b.variance_ratio &&
                a.standardized_mean_error == c.standardized_mean_error,
            "check_cog_distribution");

  const auto dir = fs::temp_directory_path() / ("cog_accept_det_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::ofstream(dir / "spec.json") << R"({"dim": 64, "mean": 0.3, "cov": {"isotropic": 2.0}})";
  const auto specf = (dir / "spec.json").string();
  std::vector<std::string> files;
  for (const char* threads : {"1", "8", "1"}) {
    const auto out = (dir / (std::string("s") + std::to_string(files.size()) + ".cogl")).string();
    cli(std::string("--threads ") + threads + " sample --spec " + specf + " --count 50 --seed 3 --out " + out);
    files.push_back(slurp(out));
  }
  o.require(!files[0].empty() && files[0] == files[1] && files[0] == files[2], "cli sample");
  const std::string beta = "verify slerp-beta --dim 300 --samples 300 --v 0.5 --confidence 0.9 --seed 2";
  const auto b1 = cli("--threads 1 " + beta), b8 = cli("--threads 8 " + beta);
  o.require(b1.code == 0 && b1.out == b8.out && b1.out == cli("--threads 1 " + beta).out,
            "cli slerp-beta");
  const std::string dist = "verify cog-dist --json --spec " + specf + " --weights 0.5,0.5,0.5 --trials 5000 --seed 8";
  const auto d1 = cli("--threads 1 " + dist), d8 = cli("--threads 8 " + dist);
  o.require(d1.code == 0 && d1.out == d8.out, "cli cog-dist");
  fs::remove_all(dir);
  o.detail = o.ok ? "library and cli outputs identical for threads 1 and 8"
                  : "mismatch: " + o.detail;
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "corrected combination moments", 60, moment_test},
      {2, "slerp beta confidence interval", 300, slerp_beta_interval},
      {3, "chi-squared norm tails", 1, chi2_tails},
      {4, "subspace oracle suite", 30, subspace_oracle},
      {5, "endpoint and selector exactness", 0, endpoints},
      {6, "centroid algebra", 0, centroid_algebra},
      {7, "file format round trip", 0, file_format},
      {8, "determinism", 0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      out.ok = false;
      out.detail += fmt(" (over %.0f s budget)", c.budget_s);
    }
    std::printf("%s %d %s: %s [%.2fs]\n", out.ok ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), secs);
    std::fflush(stdout);
    failures += out.ok ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}

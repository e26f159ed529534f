// cogl: command-line front end for corrected latent combinations.
//
// Exit codes: 0 success, 1 usage error, 2 data/format error,
// 3 verification failure.

#include <cstdlib>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cog/config.hpp"
#include "cog/diagnostics.hpp"
#include "cog/error.hpp"
#include "cog/latent_io.hpp"
#include "cog/schemes.hpp"
#include "cog/subspace.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitVerify = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

cog::Dtype parse_dtype(const std::string& s) {
  if (s == "f64") return cog::Dtype::Float64;
  if (s == "f32") return cog::Dtype::Float32;
  throw UsageError("--dtype must be f64 or f32");
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += cog::format_number(values[i]);
  }
  return out;
}

struct Options {
  unsigned threads = 0;

  std::string spec_path;
  std::string out_path;
  std::string dtype = "f64";
  std::uint64_t seed = 0;

  std::size_t count = 1;

  std::string a_path, b_path;
  std::size_t steps = 2;
  std::string method;

  std::string inputs_path;
  bool strict_baselines = false;

  std::string basis_path;
  std::string input_path;
  std::vector<double> coords;
  std::string center_path;
  std::vector<std::size_t> dims;
  double half_extent = 1.0;
  std::size_t rows = 1, cols = 1;

  bool json = false;

  std::size_t dim = 0;
  std::size_t samples = 10000;
  double v = 0.5;
  double confidence = 0.99;

  std::vector<double> weights;
  std::size_t trials = 20000;
  bool uncorrected = false;
};

int run_sample(const Options& o) {
  const auto spec = cog::load_spec_config(o.spec_path);
  const auto latents = cog::sample_latents(spec, o.count, o.seed, o.threads);
  cog::write_latents(o.out_path, latents, parse_dtype(o.dtype));
  return 0;
}

int run_interpolate(const Options& o) {
  const auto method = cog::parse_interpolation_method(o.method);
  if (!method) throw UsageError("--method must be lerp, slerp or cog");
  const auto spec = cog::load_spec_config(o.spec_path);
  const auto a = cog::read_latents(o.a_path);
  const auto b = cog::read_latents(o.b_path);
  if (a.size() != b.size()) {
    throw cog::DimensionMismatch("interpolate: --a holds " + std::to_string(a.size()) +
                                 " latents but --b holds " + std::to_string(b.size()));
  }
  // Steps run from a (v = 1) to b (v = 0); a single step is the midpoint.
  std::vector<cog::Latent> out;
  out.reserve(a.size() * o.steps);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t s = 0; s < o.steps; ++s) {
      const double v = o.steps == 1 ? 0.5
                                    : 1.0 - static_cast<double>(s) /
                                                static_cast<double>(o.steps - 1);
      out.push_back(cog::interpolate(a[i], b[i], v, *method, spec));
    }
  }
  cog::write_latents(o.out_path, out, parse_dtype(o.dtype));
  return 0;
}

int run_centroid(const Options& o) {
  const auto method = cog::parse_centroid_method(o.method);
  if (!method) throw UsageError("--method must be euclidean, std-euclidean, mode-norm or cog");
  const auto spec = cog::load_spec_config(o.spec_path);
  const auto latents = cog::read_latents(o.inputs_path);
  const auto c = cog::centroid(latents, *method, spec, {.strict_baselines = o.strict_baselines});
  cog::write_latents(o.out_path, std::span(&c, 1), parse_dtype(o.dtype));
  return 0;
}

int run_subspace_build(const Options& o) {
  const auto basis = cog::build_basis(cog::read_latents(o.inputs_path));
  cog::write_basis(o.out_path, basis);
  return 0;
}

int run_subspace_coords(const Options& o) {
  const auto basis = cog::read_basis(o.basis_path);
  for (const auto& x : cog::read_latents(o.input_path)) {
    std::cout << join(cog::coords(basis, x).h) << '\n';
  }
  return 0;
}

int run_subspace_at(const Options& o) {
  const auto basis = cog::read_basis(o.basis_path);
  const auto spec = cog::load_spec_config(o.spec_path);
  const auto z = cog::latent_at(basis, {o.coords}, spec);
  cog::write_latents(o.out_path, std::span(&z, 1), parse_dtype(o.dtype));
  return 0;
}

int run_subspace_grid(const Options& o) {
  if (o.dims.size() != 2) throw UsageError("--dims takes exactly two indices, e.g. 0,1");
  const auto basis = cog::read_basis(o.basis_path);
  const auto spec = cog::load_spec_config(o.spec_path);
  const auto centers = cog::read_latents(o.center_path);
  if (centers.empty()) throw cog::InvalidArgument("grid: --center file holds no latents");
  const auto grid = cog::grid_coords(basis, centers.front(), o.dims[0], o.dims[1],
                                     o.half_extent, o.rows, o.cols);
  std::vector<cog::Latent> out;
  out.reserve(grid.size());
  for (const auto& h : grid) out.push_back(cog::latent_at(basis, h, spec));
  cog::write_latents(o.out_path, out, parse_dtype(o.dtype));
  return 0;
}

int run_diagnose(const Options& o) {
  const auto spec = cog::load_spec_config(o.spec_path);
  const auto latents = cog::read_latents(o.input_path);
  if (o.json) {
    auto arr = nlohmann::json::array();
    for (const auto& x : latents) arr.push_back(cog::to_json(cog::typicality_report(x, spec)));
    std::cout << arr.dump(2) << '\n';
    return 0;
  }
  for (std::size_t i = 0; i < latents.size(); ++i) {
    if (i) std::cout << '\n';
    std::cout << "latent=" << i << '\n' << cog::to_key_value(cog::typicality_report(latents[i], spec));
  }
  return 0;
}

int run_verify_slerp_beta(const Options& o) {
  const auto ci =
      cog::estimate_slerp_beta_ci(o.dim, o.samples, o.v, o.confidence, o.seed, o.threads);
  std::cout << cog::format_number(ci.lo) << ' ' << cog::format_number(ci.hi) << '\n';
  return 0;
}

int run_verify_cog_dist(const Options& o) {
  const auto spec = cog::load_spec_config(o.spec_path);
  const auto report = cog::check_cog_distribution(
      spec, o.weights, o.trials, o.seed,
      o.uncorrected ? cog::CombineMode::Uncorrected : cog::CombineMode::Corrected, o.threads);
  if (o.json) {
    std::cout << cog::to_json(report).dump(2) << '\n';
  } else {
    std::cout << cog::to_key_value(report);
  }
  return report.passed ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Statistically corrected combinations of Gaussian latents"};
  app.require_subcommand(1);
  app.add_option("--threads", o.threads, "Worker threads for Monte Carlo work (0 = all cores)");

  auto add_dtype = [&](CLI::App* cmd) {
    cmd->add_option("--dtype", o.dtype, "Output precision: f64 or f32")
        ->check(CLI::IsMember({"f64", "f32"}));
  };

  auto* sample = app.add_subcommand("sample", "Draw latents from a prior");
  sample->add_option("--spec", o.spec_path, "Prior config (JSON)")->required();
  sample->add_option("--count", o.count, "Number of latents")->required()->check(CLI::PositiveNumber);
  sample->add_option("--seed", o.seed, "Generator seed")->required();
  sample->add_option("--out", o.out_path, "Output COGL file")->required();
  add_dtype(sample);

  auto* interp = app.add_subcommand("interpolate", "Interpolate between paired latents");
  interp->add_option("--a", o.a_path, "First endpoints (COGL)")->required();
  interp->add_option("--b", o.b_path, "Second endpoints (COGL)")->required();
  interp->add_option("--steps", o.steps, "Equidistant steps, endpoints included")
      ->required()
      ->check(CLI::PositiveNumber);
  interp->add_option("--method", o.method, "lerp, slerp or cog")->required();
  interp->add_option("--spec", o.spec_path, "Prior config (JSON)")->required();
  interp->add_option("--out", o.out_path, "Output COGL file")->required();
  add_dtype(interp);

  auto* cent = app.add_subcommand("centroid", "Centroid of a group of latents");
  cent->add_option("--inputs", o.inputs_path, "Group members (COGL)")->required();
  cent->add_option("--method", o.method, "euclidean, std-euclidean, mode-norm or cog")->required();
  cent->add_option("--spec", o.spec_path, "Prior config (JSON)")->required();
  cent->add_option("--out", o.out_path, "Output COGL file")->required();
  cent->add_flag("--strict-baselines", o.strict_baselines,
                 "Reject non-unit priors for std-euclidean and mode-norm");
  add_dtype(cent);

  auto* sub = app.add_subcommand("subspace", "Navigable subspaces spanned by latents");
  sub->require_subcommand(1);
  auto* sub_build = sub->add_subcommand("build", "Build a basis from latents");
  sub_build->add_option("--inputs", o.inputs_path, "Spanning latents (COGL)")->required();
  sub_build->add_option("--out", o.out_path, "Output basis file")->required();

  auto* sub_coords = sub->add_subcommand("coords", "Print subspace coordinates of latents");
  sub_coords->add_option("--basis", o.basis_path, "Basis file")->required();
  sub_coords->add_option("--input", o.input_path, "Latents (COGL)")->required();

  auto* sub_at = sub->add_subcommand("at", "Corrected latent at subspace coordinates");
  sub_at->add_option("--basis", o.basis_path, "Basis file")->required();
  sub_at->add_option("--coords", o.coords, "Coordinates h1,h2,...")->required()->delimiter(',');
  sub_at->add_option("--spec", o.spec_path, "Prior config (JSON)")->required();
  sub_at->add_option("--out", o.out_path, "Output COGL file")->required();
  add_dtype(sub_at);

  auto* sub_grid = sub->add_subcommand("grid", "Corrected latents on a 2-D coordinate grid");
  sub_grid->add_option("--basis", o.basis_path, "Basis file")->required();
  sub_grid->add_option("--center", o.center_path, "Grid center (first latent of a COGL file)")
      ->required();
  sub_grid->add_option("--dims", o.dims, "Swept coordinate indices i,j")->required()->delimiter(',');
  sub_grid->add_option("--half-extent", o.half_extent, "Half width of the sweep")
      ->required()
      ->check(CLI::PositiveNumber);
  sub_grid->add_option("--rows", o.rows, "Grid rows")->required()->check(CLI::PositiveNumber);
  sub_grid->add_option("--cols", o.cols, "Grid columns")->required()->check(CLI::PositiveNumber);
  sub_grid->add_option("--spec", o.spec_path, "Prior config (JSON)")->required();
  sub_grid->add_option("--out", o.out_path, "Output COGL file")->required();
  add_dtype(sub_grid);

  auto* diag = app.add_subcommand("diagnose", "Typicality report per latent");
  diag->add_option("--input", o.input_path, "Latents (COGL)")->required();
  diag->add_option("--spec", o.spec_path, "Prior config (JSON)")->required();
  diag->add_flag("--json", o.json, "Emit JSON instead of key=value lines");

  auto* verify = app.add_subcommand("verify", "Monte Carlo checks");
  verify->require_subcommand(1);
  auto* vbeta = verify->add_subcommand("slerp-beta", "Empirical interval of the SLERP beta");
  vbeta->add_option("--dim", o.dim, "Latent dimension")->required()->check(CLI::PositiveNumber);
  vbeta->add_option("--samples", o.samples, "Sampled pairs")->check(CLI::Range(100ULL, ~0ULL));
  vbeta->add_option("--v", o.v, "Interpolation parameter")->check(CLI::Range(0.0, 1.0));
  vbeta->add_option("--confidence", o.confidence, "Central coverage")
      ->check(CLI::Validator(
          [](std::string& s) -> std::string {
            char* end = nullptr;
            const double c = std::strtod(s.c_str(), &end);
            if (s.empty() || *end != '\0') return "not a number: " + s;
            return c > 0.0 && c < 1.0 ? "" : "must lie strictly between 0 and 1";
          },
          "(0,1)"));
  vbeta->add_option("--seed", o.seed, "Generator seed");

  auto* vdist = verify->add_subcommand("cog-dist", "Moment test of corrected combinations");
  vdist->add_option("--spec", o.spec_path, "Prior config (JSON)")->required();
  vdist->add_option("--weights", o.weights, "Weights w1,w2,...")->required()->delimiter(',');
  vdist->add_option("--trials", o.trials, "Monte Carlo trials")->check(CLI::Range(2ULL, ~0ULL));
  vdist->add_option("--seed", o.seed, "Generator seed");
  vdist->add_flag("--uncorrected", o.uncorrected, "Test the plain linear combination instead");
  vdist->add_flag("--json", o.json, "Emit JSON instead of key=value lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sample) return run_sample(o);
    if (*interp) return run_interpolate(o);
    if (*cent) return run_centroid(o);
    if (*sub_build) return run_subspace_build(o);
    if (*sub_coords) return run_subspace_coords(o);
    if (*sub_at) return run_subspace_at(o);
    if (*sub_grid) return run_subspace_grid(o);
    if (*diag) return run_diagnose(o);
    if (*vbeta) return run_verify_slerp_beta(o);
    if (*vdist) return run_verify_cog_dist(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const cog::Error& e) {
    std::cerr << "error: " << e.name() << ": " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

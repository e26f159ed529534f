#include "cog/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cog/error.hpp"

namespace cog {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw SpecConfigError("spec config: " + path + ": " + what);
}

double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

std::vector<double> array_at(const json& j, const std::string& path, std::size_t dim,
                             bool positive) {
  if (!j.is_array()) fail(path, "expected an array");
  if (j.size() != dim) {
    fail(path, "has " + std::to_string(j.size()) + " entries, expected dim = " +
                   std::to_string(dim));
  }
  std::vector<double> out;
  out.reserve(dim);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto item_path = path + "[" + std::to_string(i) + "]";
    const double v = number_at(j[i], item_path);
    if (positive && !(v > 0.0)) fail(item_path, "variance must be strictly positive");
    out.push_back(v);
  }
  return out;
}

}  // namespace

GaussianSpec spec_from_json(const json& j) {
  if (!j.is_object()) fail("$", "expected a JSON object");

  if (!j.contains("dim")) fail("dim", "missing");
  const auto& jdim = j.at("dim");
  if (!jdim.is_number_integer() || jdim.get<long long>() < 1) {
    fail("dim", "expected a positive integer");
  }
  const auto dim = static_cast<std::size_t>(jdim.get<long long>());

  GaussianSpec::Mean mean = 0.0;
  if (!j.contains("mean")) fail("mean", "missing");
  if (const auto& jm = j.at("mean"); jm.is_array()) {
    mean = array_at(jm, "mean", dim, false);
  } else {
    mean = number_at(jm, "mean");
  }

  if (!j.contains("cov")) fail("cov", "missing");
  const auto& jc = j.at("cov");
  if (!jc.is_object() || jc.size() != 1) {
    fail("cov", R"(expected exactly one of {"isotropic": number} or {"diagonal": array})");
  }
  GaussianSpec::Covariance cov = 1.0;
  if (jc.contains("isotropic")) {
    const double v = number_at(jc.at("isotropic"), "cov.isotropic");
    if (!(v > 0.0)) fail("cov.isotropic", "variance must be strictly positive");
    cov = v;
  } else if (jc.contains("diagonal")) {
    cov = array_at(jc.at("diagonal"), "cov.diagonal", dim, true);
  } else if (jc.contains("full")) {
    fail("cov.full", "full covariance matrices are not supported; use isotropic or diagonal");
  } else {
    fail("cov." + jc.begin().key(), "unknown covariance form");
  }

  return GaussianSpec(dim, std::move(mean), std::move(cov));
}

GaussianSpec parse_spec_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecConfigError(std::string("spec config: invalid JSON: ") + e.what());
  }
  return spec_from_json(j);
}

GaussianSpec load_spec_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open spec config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec_config(ss.str());
}

json to_json(const GaussianSpec& spec) {
  json j;
  j["dim"] = spec.dim();
  std::visit([&](const auto& m) { j["mean"] = m; }, spec.mean_storage());
  if (spec.is_isotropic()) {
    j["cov"] = {{"isotropic", spec.variance(0)}};
  } else {
    j["cov"] = {{"diagonal", std::get<std::vector<double>>(spec.cov_storage())}};
  }
  return j;
}

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const TypicalityReport& r) {
  return {{"norm", finite_or_null(r.norm)},
          {"norm_sq", finite_or_null(r.norm_sq)},
          {"norm_log_cdf", finite_or_null(r.norm_log_cdf)},
          {"norm_log_sf", finite_or_null(r.norm_log_sf)},
          {"log_density", finite_or_null(r.log_density)},
          {"density_percentile", finite_or_null(r.density_percentile)}};
}

json to_json(const IntervalEstimate& e) {
  return {{"lo", finite_or_null(e.lo)},
          {"hi", finite_or_null(e.hi)},
          {"confidence", e.confidence},
          {"n_samples", e.n_samples},
          {"seed", e.seed}};
}

json to_json(const CogDistributionReport& r) {
  return {{"dim", r.dim},
          {"n_trials", r.n_trials},
          {"alpha", finite_or_null(r.alpha)},
          {"beta", finite_or_null(r.beta)},
          {"corrected", r.mode == CombineMode::Corrected},
          {"max_mean_error", finite_or_null(r.max_mean_error)},
          {"max_variance_error", finite_or_null(r.max_variance_error)},
          {"mean_tolerance", r.mean_tolerance},
          {"variance_tolerance", r.variance_tolerance},
          {"passed", r.passed},
          {"standardized_mean_error", r.standardized_mean_error},
          {"variance_ratio", r.variance_ratio}};
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string to_key_value(const TypicalityReport& r) {
  std::string out;
  out += "norm=" + format_number(r.norm) + "\n";
  out += "norm_sq=" + format_number(r.norm_sq) + "\n";
  out += "norm_log_cdf=" + format_number(r.norm_log_cdf) + "\n";
  out += "norm_log_sf=" + format_number(r.norm_log_sf) + "\n";
  out += "log_density=" + format_number(r.log_density) + "\n";
  out += "density_percentile=" + format_number(r.density_percentile) + "\n";
  return out;
}

std::string to_key_value(const IntervalEstimate& e) {
  std::string out;
  out += "lo=" + format_number(e.lo) + "\n";
  out += "hi=" + format_number(e.hi) + "\n";
  out += "confidence=" + format_number(e.confidence) + "\n";
  out += "n_samples=" + std::to_string(e.n_samples) + "\n";
  out += "seed=" + std::to_string(e.seed) + "\n";
  return out;
}

std::string to_key_value(const CogDistributionReport& r) {
  std::string out;
  out += "dim=" + std::to_string(r.dim) + "\n";
  out += "n_trials=" + std::to_string(r.n_trials) + "\n";
  out += "alpha=" + format_number(r.alpha) + "\n";
  out += "beta=" + format_number(r.beta) + "\n";
  out += std::string("corrected=") + (r.mode == CombineMode::Corrected ? "true" : "false") + "\n";
  out += "max_mean_error=" + format_number(r.max_mean_error) + "\n";
  out += "max_variance_error=" + format_number(r.max_variance_error) + "\n";
  out += "mean_tolerance=" + format_number(r.mean_tolerance) + "\n";
  out += "variance_tolerance=" + format_number(r.variance_tolerance) + "\n";
  out += std::string("passed=") + (r.passed ? "true" : "false") + "\n";
  return out;
}

}  // namespace cog

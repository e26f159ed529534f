#pragma once

// JSON prior configs and text/JSON renderings of diagnostic reports.
//
//   { "dim": 4, "mean": 0.0 | [..], "cov": {"isotropic": 1.0} | {"diagonal": [..]} }

#include <filesystem>
#include <string>

#include <json.hpp>

#include "cog/diagnostics.hpp"
#include "cog/latent.hpp"

namespace cog {

/// Throws SpecConfigError naming the offending field path (e.g. "cov.diagonal[2]").
GaussianSpec spec_from_json(const nlohmann::json& j);
GaussianSpec parse_spec_config(const std::string& text);
GaussianSpec load_spec_config(const std::filesystem::path& path);

nlohmann::json to_json(const GaussianSpec& spec);
nlohmann::json to_json(const TypicalityReport& report);
nlohmann::json to_json(const IntervalEstimate& estimate);
nlohmann::json to_json(const CogDistributionReport& report);

/// One "key=value" line per field.
std::string to_key_value(const TypicalityReport& report);
std::string to_key_value(const IntervalEstimate& estimate);
std::string to_key_value(const CogDistributionReport& report);

/// %.17g, with "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double value);

}  // namespace cog

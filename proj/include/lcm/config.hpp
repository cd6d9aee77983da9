#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lcm/bodies.hpp"
#include "lcm/measure.hpp"
#include "lcm/phi.hpp"

namespace lcm {

/// Invalid configuration; the message carries file, line/column or field path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Version tag every top-level config file must carry in its "schema" field.
inline constexpr const char* kConfigSchema = "lcm/1";

/// Parses a file; syntax errors report line and column.
nlohmann::json load_json_file(const std::string& path);
/// Parses text; `source` names it in diagnostics.
nlohmann::json parse_json_text(const std::string& text, const std::string& source);
/// Checks and removes the "schema" field.
nlohmann::json strip_schema(nlohmann::json j, const std::string& source);

/// {"type": "ball" | "lpball" | "box" | "polytope" | "dilate", ...}.
/// Polytopes take "normals" + "offsets" (symmetric pairs) or "halfspaces",
/// a list of {"normal", "offset"} that must be closed under negation.
ConvexBody parse_body(const nlohmann::json& j, const std::string& path = "body");
/// {"type": "power" | "linear" | "gaussian" | "pathological", ...}, optional "plateau".
PhiFunction parse_phi(const nlohmann::json& j, const std::string& path = "phi");
/// {"phi": ..., "L": ...} or {"uniform_on": ...}.
NormMeasure parse_measure(const nlohmann::json& j, const std::string& path = "measure");

/// "start:end:count", linear or log spaced.
std::vector<double> parse_grid(const std::string& spec, bool log_spacing);

nlohmann::json body_to_json(const ConvexBody& body);

}  // namespace lcm

#pragma once

#include <json.hpp>
#include <string>

#include "wishart/real_density.hpp"
#include "wishart/spec.hpp"

namespace wishart {

using json = nlohmann::json;

json spec_to_json(const EnsembleSpec& spec);
EnsembleSpec spec_from_json(const json& j);

json quad_config_to_json(const RealQuadConfig& cfg);
// Missing fields keep their defaults.
RealQuadConfig quad_config_from_json(const json& j);

// 17 significant digits.
std::string format_double(double v);

// RFC-4180 CSV with header x,density (plus error when present).
void write_curve_csv(const std::string& path, const DensityCurve& curve);
DensityCurve read_curve_csv(const std::string& path);

json curve_metadata(const DensityCurve& curve);
void write_json(const std::string& path, const json& j);
json read_json(const std::string& path);

json error_json(ErrorCode code, const std::string& message);

}  // namespace wishart

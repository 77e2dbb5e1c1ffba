#pragma once

#include <filesystem>
#include <string>

#include "lpvss/model.hpp"

namespace lpvss {

/// Parses the JSON model description:
/// {
///   "dims": {"nx":., "nu":., "ny":., "np":.},
///   "basis": [{"kind": "identity"|"monomial"|"constant", "params": {...}}],
///   "A".."H": {"M0": [[..]], "terms": [{"i": 1, "M": [[..]]}]},
///   "noise": {"Q": [[..]], "S": [[..]], "R": [[..]]},
///   "scheduling_set": {"min": [..], "max": [..]}
/// }
/// Numbers must be finite decimals; NaN/Inf are rejected. Throws
/// StructuralError with the offending location on malformed input.
LpvSsModel load_model(const std::filesystem::path& path);

LpvSsModel parse_model(const std::string& json_text, const std::string& origin = "<string>");

std::string model_to_json(const LpvSsModel& model);

void save_model(const LpvSsModel& model, const std::filesystem::path& path);

}  // namespace lpvss

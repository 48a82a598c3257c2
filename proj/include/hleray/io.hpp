#pragma once

// Report serialization: JSON with 17-significant-digit floats, CSV helpers.

#include <json.hpp>

#include <string>
#include <vector>

namespace hleray {

/// %.17g rendering, locale independent; non-finite values render as
/// "inf", "-inf" or "nan".
std::string format_double(double x);

/// Serializes like nlohmann::json::dump but prints every floating value with
/// 17 significant digits; non-finite floats become the strings "inf", "-inf", "nan".
std::string dump_json(const nlohmann::ordered_json& j, int indent = 2);

/// Joins already formatted cells with commas.
std::string csv_row(const std::vector<std::string>& cells);

} // namespace hleray

#pragma once

#include <json.hpp>
#include <string>

#include "korn/classify.hpp"
#include "korn/symbol.hpp"

namespace korn {

using Json = nlohmann::json;

/// Parse JSON text; syntax errors become ConfigError naming `source` and line:column.
Json parse_json_text(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);

/// {"n","dim_v","dim_w","order","coeffs":[{"alpha":[..],"matrix":[[..],..]}], "name"?}
OperatorSpec operator_from_json(const Json& j);
Json operator_to_json(const OperatorSpec& a);

/// "catalog:<ref>" builds a catalog entry, anything else is read as an operator JSON file.
OperatorSpec resolve_operator(const std::string& ref);

Json classification_to_json(const Classification& c);

}  // namespace korn

#pragma once
#include <string>

#include <json.hpp>

#include "ppfl/core/config.hpp"

namespace ppfl {

// Strict schema: unknown keys and type mismatches throw ErrCode::config with
// the offending field path in the message.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const RunConfig& cfg);

nlohmann::json load_json_file(const std::string& path);
// `where` labels parse errors (a filename or "<string>").
nlohmann::json parse_json_text(const std::string& text, const std::string& where);

// Dot-path override ("eta.value=0.01", "batch.full=false", "K=4"). The value
// is parsed as JSON when possible, else taken as a string.
void apply_json_override(nlohmann::json& j, const std::string& dot_key, const std::string& value);

}  // namespace ppfl

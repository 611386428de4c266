#pragma once

#include "gbdeer/model.hpp"

#include <filesystem>
#include <string>

namespace gbdeer
{

// JSON config files use the ScenarioConfig field names verbatim. Required keys
// missing from the document raise ConfigError("missing field: <name>").

ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string dump_config(const ScenarioConfig& cfg);

}  // namespace gbdeer

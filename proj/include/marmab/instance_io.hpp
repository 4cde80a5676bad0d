#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "marmab/core.hpp"

namespace marmab {

nlohmann::json arm_to_json(const ArmModel& arm);
ArmModel arm_from_json(const nlohmann::json& j);

nlohmann::json instance_to_json(const RmabInstance& instance);
RmabInstance instance_from_json(const nlohmann::json& j);

void save_instance(const RmabInstance& instance, const std::filesystem::path& path);
RmabInstance load_instance(const std::filesystem::path& path);

/// Reads a whole JSON document; errors name the file.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace marmab

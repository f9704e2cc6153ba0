#pragma once

#include "fedcedar/error.hpp"
#include "fedcedar/experiment_config.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <string>

namespace fedcedar {

// Missing keys keep their defaults; unknown keys are rejected. An empty
// document (or one that is only whitespace) yields the defaults.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& doc);

} // namespace fedcedar

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "hpdob/sim.hpp"

namespace hpdob {

/// A scenario plus the output settings read from the same file.
struct ConfigFile {
  ScenarioConfig scenario;
  std::optional<std::filesystem::path> output_dir;
};

/// Builds a ConfigFile from a JSON document. Missing fields take the baseline
/// servo defaults; unknown keys and non-finite numbers raise ConfigError with
/// the offending key path (e.g. "controller.Kq").
ConfigFile config_from_json(const nlohmann::json& doc);

/// Parses JSON text. Syntax errors are reported with line and column.
ConfigFile parse_config(const std::string& text);

/// Reads and parses a file; I/O failures raise ConfigError.
ConfigFile load_config(const std::filesystem::path& path);

/// Fully resolved document: every field is written, so parsing it back yields
/// the same ScenarioConfig.
nlohmann::json config_to_json(const ConfigFile& cfg);

std::string plant_model_name(PlantModel m);
PlantModel parse_plant_model(const std::string& name);

}  // namespace hpdob

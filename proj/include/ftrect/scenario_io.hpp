#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ftrect/scenario.hpp"

namespace ftrect {

/// Full scenario document with every field present.
nlohmann::json scenario_to_json(const Scenario& scenario);

/// Builds a scenario from a document layered over the defaults. Unknown keys, type
/// mismatches and invariant violations are reported together as a ValidationError.
Scenario scenario_from_json(const nlohmann::json& doc);

Scenario load_scenario(const std::filesystem::path& path);

/// Applies "dotted.path=value" overrides to a document. The value is parsed as JSON
/// when possible, otherwise taken as a string. Paths must already exist.
void apply_overrides(nlohmann::json& doc, const std::vector<std::string>& overrides);

/// Rejects unknown keys, then merges the document over the defaults.
nlohmann::json with_defaults(const nlohmann::json& doc);

/// Reads a scenario file, merges it over the defaults, and applies overrides.
nlohmann::json load_scenario_document(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

}  // namespace ftrect

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "ftrect/engine.hpp"

namespace ftrect {

/// Header line "t [s],v_dc [V],..." in the fixed column order.
std::string timeseries_header();

void write_timeseries(std::ostream& out, const RunLog& log);
void write_timeseries(const std::filesystem::path& path, const RunLog& log);

/// Parses a file written by write_timeseries; throws ValidationError on a header mismatch.
RunLog read_timeseries(const std::filesystem::path& path);

/// Not-reached times are encoded as null.
nlohmann::json metrics_to_json(const Metrics& m);
nlohmann::json run_summary_json(const Scenario& scenario, const RunResult& result);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);

}  // namespace ftrect

#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "phasechain/pipeline.hpp"

namespace phasechain {

nlohmann::ordered_json report_to_json(const CohortReport& report);

/// Writes report.json, pca_model.json, classification.txt and the
/// energy/geometry/phase/conservation/statmech CSV files.
void write_report_files(const CohortReport& report, const std::filesystem::path& dir);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

nlohmann::ordered_json load_report(const std::filesystem::path& path);

}  // namespace phasechain

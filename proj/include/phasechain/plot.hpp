#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace phasechain::plot {

enum class PlotKind { energy_hist, phase_2d, pca_3d, conservation_hist, entropy_hist };

const std::vector<std::string>& kind_names();
std::string_view to_string(PlotKind kind);
/// Throws ValidationError listing the valid kinds.
PlotKind parse_kind(std::string_view name);

/// Self-contained SVG for one plot kind, rendered from a report.json tree.
/// Valid chains are drawn green, invalid red, unlabelled grey.
std::string render(const nlohmann::ordered_json& report, PlotKind kind);

/// Renders each kind to <out_dir>/<kind>.svg and returns the paths.
std::vector<std::filesystem::path> write_plots(const nlohmann::ordered_json& report,
                                               const std::vector<PlotKind>& kinds,
                                               const std::filesystem::path& out_dir);

}  // namespace phasechain::plot

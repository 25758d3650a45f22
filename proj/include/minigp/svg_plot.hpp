#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace minigp {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    std::vector<PlotSeries> series;
};

/// Renders a line chart as a standalone SVG file.
void write_svg_plot(const std::filesystem::path& path, const PlotSpec& spec);

/// Emits the three standard panels (normalized R_t/t vs t, q_t vs t, R_t/t
/// vs wall-clock) from per-combination summary JSON files, one series per
/// file. Returns the paths written.
std::vector<std::filesystem::path> plot_summaries(
    const std::vector<std::filesystem::path>& summary_paths,
    const std::filesystem::path& out_dir);

} // namespace minigp

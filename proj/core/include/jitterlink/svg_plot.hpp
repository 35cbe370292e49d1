#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "jitterlink/stats_analysis.hpp"

namespace jitterlink {

struct Curve {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotLabels {
    std::string title;
    std::string x_label = "normalized gain";
    std::string y_label = "probability density";
};

/// Self-contained SVG: histogram bars (optional) with overlaid polylines and a legend.
/// Presentation only; nothing reads these files back.
void write_plot_svg(const std::filesystem::path& path, const GainHistogram* hist,
                    const std::vector<Curve>& curves, const PlotLabels& labels);

}  // namespace jitterlink

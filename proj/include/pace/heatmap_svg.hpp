#pragma once

#include <iosfwd>
#include <string>

#include "pace/polygrid.hpp"

namespace pace {

struct HeatmapStyle {
    std::string title;
    bool diverging = false;  // blue negative / red positive; sequential otherwise
    double px_per_ft = 4.0;
};

/// Deterministic SVG: one rect per defined cell, rink outline, scale
/// labels. Diverging maps are symmetric about zero.
void write_heatmap_svg(const SpeedGrid& grid, const HeatmapStyle& style, std::ostream& out);

} // namespace pace

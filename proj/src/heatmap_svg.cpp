#include "pace/heatmap_svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace pace {

namespace {

struct Rgb {
    int r, g, b;
};

Rgb lerp(Rgb a, Rgb b, double t) {
    auto mix = [t](int x, int y) { return static_cast<int>(std::lround(x + (y - x) * t)); };
    return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

// Blue -> white -> red.
Rgb diverging_color(double t) {
    const Rgb blue{33, 102, 172}, white{247, 247, 247}, red{178, 24, 43};
    if (t < 0.5) return lerp(blue, white, t * 2.0);
    return lerp(white, red, (t - 0.5) * 2.0);
}

// White -> dark red.
Rgb sequential_color(double t) {
    const Rgb lo{255, 245, 240}, hi{103, 0, 13};
    return lerp(lo, hi, t);
}

std::string hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

} // namespace

void write_heatmap_svg(const SpeedGrid& grid, const HeatmapStyle& style, std::ostream& out) {
    const double cell = grid.spec.cell_size_ft;
    const double s = style.px_per_ft;
    const double grid_w = grid.n_cols * cell * s;
    const double grid_h = grid.n_rows * cell * s;
    const double margin = 24.0;
    const double w = grid_w + 2 * margin;
    const double h = grid_h + 2 * margin + 28.0;

    double lo = 0, hi = 0;
    bool any = false;
    for (std::size_t i = 0; i < grid.value.size(); ++i) {
        if (!grid.defined[i]) continue;
        if (!any) {
            lo = hi = grid.value[i];
            any = true;
        } else {
            lo = std::min(lo, grid.value[i]);
            hi = std::max(hi, grid.value[i]);
        }
    }
    if (style.diverging) {
        const double m = std::max(std::fabs(lo), std::fabs(hi));
        lo = -m;
        hi = m;
    }
    const double span = hi > lo ? hi - lo : 1.0;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\""
        << fmt(h) << "\" viewBox=\"0 0 " << fmt(w) << ' ' << fmt(h) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!style.title.empty())
        out << "<text x=\"" << fmt(margin) << "\" y=\"16\" font-family=\"sans-serif\" "
               "font-size=\"13\">"
            << style.title << "</text>\n";

    // y grows upward on the rink, downward in SVG.
    const double ox = margin;
    const double oy = margin + 4.0 + grid_h;
    for (int row = 0; row < grid.n_rows; ++row) {
        for (int col = 0; col < grid.n_cols; ++col) {
            const int c = grid.cell(col, row);
            if (!grid.defined[c]) continue;
            const double t = std::clamp((grid.value[c] - lo) / span, 0.0, 1.0);
            const Rgb color = style.diverging ? diverging_color(t) : sequential_color(t);
            out << "<rect x=\"" << fmt(ox + col * cell * s) << "\" y=\""
                << fmt(oy - (row + 1) * cell * s) << "\" width=\"" << fmt(cell * s)
                << "\" height=\"" << fmt(cell * s) << "\" fill=\"" << hex(color) << "\"/>\n";
        }
    }

    // Rounded-rectangle rink outline, aligned with the grid frame.
    const double hx = grid.spec.half_length() * s, hy = grid.spec.half_width() * s;
    const double cx = ox + 0.5 * grid_w, cy = oy - 0.5 * grid_h;
    const double r = grid.spec.corner_radius_ft * s;
    out << "<rect x=\"" << fmt(cx - hx) << "\" y=\"" << fmt(cy - hy) << "\" width=\""
        << fmt(2 * hx) << "\" height=\"" << fmt(2 * hy) << "\" rx=\"" << fmt(r)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";

    // Blue lines.
    const double blue = grid.spec.blue_line_offset_ft * s;
    for (double bx : {cx - blue, cx + blue})
        out << "<line x1=\"" << fmt(bx) << "\" y1=\"" << fmt(cy - hy) << "\" x2=\"" << fmt(bx)
            << "\" y2=\"" << fmt(cy + hy) << "\" stroke=\"#1f4e9c\" stroke-width=\"1\"/>\n";

    out << "<text x=\"" << fmt(margin) << "\" y=\"" << fmt(h - 8.0)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(lo) << " to " << fmt(hi)
        << " ft/s</text>\n";
    out << "</svg>\n";
}

} // namespace pace

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace pace {

/// Rink thirds, in the attacking frame of the team in possession.
enum class Zone { DZ, NZ, OZ };

const char* to_string(Zone z);
std::optional<Zone> zone_from_string(std::string_view s);

/// Point in the attacking frame: origin at center ice, +x_north toward the
/// attacking goal, +y_east across the rink width.
struct NormalizedPoint {
    double x_north = 0.0;
    double y_east = 0.0;
    bool operator==(const NormalizedPoint&) const = default;
};

/// Parametric rink: a rectangle with four rounded corners. All distances
/// in feet. Blue lines sit at +/- blue_line_offset_ft from center ice;
/// goal lines at goal_line_offset_ft from each end board.
struct RinkSpec {
    double length_ft = 200.0;
    double width_ft = 85.0;
    double corner_radius_ft = 28.0;
    double blue_line_offset_ft = 25.0;
    double goal_line_offset_ft = 11.0;
    double cell_size_ft = 5.0;

    double half_length() const { return length_ft * 0.5; }
    double half_width() const { return width_ft * 0.5; }

    /// Inside the rounded-corner boundary (closed).
    bool contains(double x, double y) const;

    /// Throws std::invalid_argument when the dimensions are inconsistent.
    void check() const;

    bool operator==(const RinkSpec&) const = default;
};

RinkSpec nhl_rink();
RinkSpec ahl_rink();
RinkSpec shl_rink();

/// "nhl" | "ahl" | "shl"; throws std::invalid_argument otherwise.
RinkSpec rink_preset(const std::string& name);

/// key=value file, '#' comments. Unset keys keep NHL defaults.
RinkSpec load_rink_file(const std::string& path);

/// Preset name or a path to a key=value file.
RinkSpec resolve_rink(const std::string& name_or_path);

/// Maps center-origin rink coordinates into the attacking frame of the
/// team attacking in direction attack_sign (+1 keeps the axes, -1 flips
/// both). Throws std::runtime_error when the point is outside the rink.
NormalizedPoint normalize(double raw_x, double raw_y, int attack_sign, const RinkSpec& spec);

/// DZ for x_north < -blue line, OZ for x_north > +blue line, NZ otherwise
/// (blue-line events belong to the NZ).
Zone zone_of(const NormalizedPoint& p, const RinkSpec& spec);

} // namespace pace

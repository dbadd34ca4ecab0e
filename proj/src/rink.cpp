#include "pace/rink.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "pace/csv.hpp"

namespace pace {

const char* to_string(Zone z) {
    switch (z) {
        case Zone::DZ: return "DZ";
        case Zone::NZ: return "NZ";
        case Zone::OZ: return "OZ";
    }
    return "?";
}

std::optional<Zone> zone_from_string(std::string_view s) {
    if (s == "DZ") return Zone::DZ;
    if (s == "NZ") return Zone::NZ;
    if (s == "OZ") return Zone::OZ;
    return std::nullopt;
}

bool RinkSpec::contains(double x, double y) const {
    const double hx = half_length(), hy = half_width();
    const double ax = std::fabs(x), ay = std::fabs(y);
    if (ax > hx || ay > hy) return false;
    const double cx = ax - (hx - corner_radius_ft);
    const double cy = ay - (hy - corner_radius_ft);
    if (cx > 0.0 && cy > 0.0)
        return cx * cx + cy * cy <= corner_radius_ft * corner_radius_ft;
    return true;
}

void RinkSpec::check() const {
    if (length_ft <= 0 || width_ft <= 0) throw std::invalid_argument("rink dimensions must be positive");
    if (corner_radius_ft < 0) throw std::invalid_argument("corner radius must be non-negative");
    if (corner_radius_ft > std::fmin(length_ft, width_ft) * 0.5)
        throw std::invalid_argument("corner radius exceeds half the rink dimensions");
    if (blue_line_offset_ft <= 0 || 2.0 * blue_line_offset_ft >= length_ft)
        throw std::invalid_argument("blue lines must lie strictly inside the rink");
    if (goal_line_offset_ft <= 0 || goal_line_offset_ft >= length_ft * 0.5)
        throw std::invalid_argument("goal line offset out of range");
    if (cell_size_ft <= 0) throw std::invalid_argument("cell size must be positive");
}

RinkSpec nhl_rink() { return RinkSpec{}; }

RinkSpec ahl_rink() { return RinkSpec{}; }

RinkSpec shl_rink() {
    RinkSpec r;
    r.width_ft = 98.5;
    r.blue_line_offset_ft = 29.0;
    // Blue-line-to-goal-line distance is 6 ft shorter than the NHL's 64 ft.
    r.goal_line_offset_ft = 13.0;
    return r;
}

RinkSpec rink_preset(const std::string& name) {
    if (name == "nhl") return nhl_rink();
    if (name == "ahl") return ahl_rink();
    if (name == "shl") return shl_rink();
    throw std::invalid_argument("unknown rink preset '" + name + "'");
}

RinkSpec load_rink_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open rink file '" + path + "'");
    RinkSpec r;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        auto eq = s.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value");
        auto key = trim(s.substr(0, eq));
        auto val = s.substr(eq + 1);
        if (key == "length_ft") r.length_ft = parse_double(val, line_no);
        else if (key == "width_ft") r.width_ft = parse_double(val, line_no);
        else if (key == "corner_radius_ft") r.corner_radius_ft = parse_double(val, line_no);
        else if (key == "blue_line_offset_ft") r.blue_line_offset_ft = parse_double(val, line_no);
        else if (key == "goal_line_offset_ft") r.goal_line_offset_ft = parse_double(val, line_no);
        else if (key == "cell_size_ft") r.cell_size_ft = parse_double(val, line_no);
        else throw ParseError(line_no, "unknown rink key '" + std::string(key) + "'");
    }
    r.check();
    return r;
}

RinkSpec resolve_rink(const std::string& name_or_path) {
    if (name_or_path == "nhl" || name_or_path == "ahl" || name_or_path == "shl")
        return rink_preset(name_or_path);
    return load_rink_file(name_or_path);
}

NormalizedPoint normalize(double raw_x, double raw_y, int attack_sign, const RinkSpec& spec) {
    if (attack_sign != 1 && attack_sign != -1)
        throw std::invalid_argument("attack sign must be +1 or -1");
    if (!spec.contains(raw_x, raw_y)) {
        std::ostringstream msg;
        msg << "point (" << raw_x << ", " << raw_y << ") outside rink boundary";
        throw std::runtime_error(msg.str());
    }
    return NormalizedPoint{attack_sign * raw_x, attack_sign * raw_y};
}

Zone zone_of(const NormalizedPoint& p, const RinkSpec& spec) {
    if (p.x_north < -spec.blue_line_offset_ft) return Zone::DZ;
    if (p.x_north > spec.blue_line_offset_ft) return Zone::OZ;
    return Zone::NZ;
}

} // namespace pace

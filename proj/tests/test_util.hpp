#pragma once

// Shared helpers and independent oracles for the test suites. The
// oracles re-derive expected values by brute force and share no logic
// with the implementation paths they check.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "pace/events.hpp"
#include "pace/polygrid.hpp"
#include "pace/rink.hpp"

namespace test_util {

/// Compact event-log builder for hand-written scenarios.
class LogBuilder {
public:
    explicit LogBuilder(std::string game = "G1") : game_(std::move(game)) {}

    pace::Event& add(pace::EventType type, const std::string& team, double t, double x, double y) {
        pace::Event e;
        e.event_id = game_ + "-E" + std::to_string(++counter_);
        e.game_id = game_;
        e.league = "TST";
        e.season = "2026-27";
        e.period = period_;
        e.t_s = t;
        e.team_id = team;
        e.type = type;
        e.point = {x, y};
        e.possession_team = team;
        e.manpower = manpower_;
        events_.push_back(std::move(e));
        return events_.back();
    }

    pace::Event& possession(pace::EventType type, const std::string& team, double t, double x,
                            double y, const std::string& player = {}) {
        pace::Event& e = add(type, team, t, x, y);
        if (!player.empty()) e.player_id = player;
        return e;
    }

    void set_period(int p) { period_ = p; }
    void set_manpower(pace::Manpower m) { manpower_ = m; }

    pace::EventLog build() {
        pace::EventLog log;
        log.events = events_;
        log.rebuild_index();
        return log;
    }

private:
    std::string game_;
    int counter_ = 0;
    int period_ = 1;
    pace::Manpower manpower_{5, 5};
    std::vector<pace::Event> events_;
};

namespace oracle {

/// Cell validity by dense point sampling of each cell against the
/// point-in-rink predicate (grid_pts x grid_pts per cell).
inline std::vector<std::uint8_t> cell_validity_by_supersampling(const pace::Polygrid& grid,
                                                                int grid_pts = 64) {
    std::vector<std::uint8_t> valid(grid.n_cols * grid.n_rows, 0);
    const double cell = grid.spec.cell_size_ft;
    for (int row = 0; row < grid.n_rows; ++row) {
        for (int col = 0; col < grid.n_cols; ++col) {
            bool any = false;
            for (int i = 0; i <= grid_pts && !any; ++i) {
                for (int j = 0; j <= grid_pts && !any; ++j) {
                    const double x = grid.origin_x + (col + double(i) / grid_pts) * cell;
                    const double y = grid.origin_y + (row + double(j) / grid_pts) * cell;
                    if (grid.spec.contains(x, y)) any = true;
                }
            }
            valid[grid.cell(col, row)] = any ? 1 : 0;
        }
    }
    return valid;
}

/// In-rink area computed from the contains() predicate alone: the
/// half-width at each y is located by bisection and integrated with
/// composite Simpson panels, the corner panel under the substitution
/// y = (hy - r) + r sin(theta) that removes the arc's endpoint
/// singularity. Accurate to ~1e-13 relative.
inline double rink_area_from_predicate(const pace::RinkSpec& spec) {
    const double hx = spec.half_length(), hy = spec.half_width();
    const double r = spec.corner_radius_ft;
    auto half_width = [&](double y) {
        double lo = 0.0, hi = hx + 1.0;
        for (int i = 0; i < 80; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (spec.contains(mid, y)) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    auto simpson = [](auto f, double a, double b, int n) {
        double sum = f(a) + f(b);
        const double h = (b - a) / n;
        for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
        return sum * h / 3.0;
    };
    // Straight side: width is constant in y.
    const double straight = simpson(half_width, 0.0, hy - r, 512);
    // Corner arc, smooth after substitution.
    const double pi = 3.14159265358979323846;
    const double arc = simpson(
        [&](double theta) { return half_width(hy - r + r * std::sin(theta)) * r * std::cos(theta); },
        0.0, pi / 2.0, 4096);
    return 4.0 * (straight + arc);
}

/// Independent zonal re-segmentation: transitions of a parent event
/// sequence keyed by the destination event's zone, with the parent's
/// final transition dropped. Returns (from, to) index pairs per zone.
inline std::map<pace::Zone, std::vector<std::pair<int, int>>> zonal_transitions(
    const std::vector<pace::NormalizedPoint>& points, const pace::RinkSpec& spec) {
    std::map<pace::Zone, std::vector<std::pair<int, int>>> out;
    if (points.size() < 2) return out;
    auto zone = [&](const pace::NormalizedPoint& p) {
        if (p.x_north < -spec.blue_line_offset_ft) return pace::Zone::DZ;
        if (p.x_north > spec.blue_line_offset_ft) return pace::Zone::OZ;
        return pace::Zone::NZ;
    };
    for (std::size_t k = 0; k + 2 < points.size(); ++k)
        out[zone(points[k + 1])].push_back({int(k), int(k + 1)});
    return out;
}

} // namespace oracle
} // namespace test_util

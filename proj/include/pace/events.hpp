#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pace/rink.hpp"

namespace pace {

enum class EventType {
    pass,
    reception,
    failed_reception,
    puck_recovery,
    carry,
    shot,
    block,
    save,
    faceoff,
    stoppage,
    zone_entry,
    zone_exit,
    penalty,
};

const char* to_string(EventType t);
std::optional<EventType> event_type_from_string(std::string_view s);

enum class PassType { d2d, stretch, slot, outlet, ew, rim, other };

const char* to_string(PassType t);
std::optional<PassType> pass_type_from_string(std::string_view s);

/// Skater counts from the acting team's perspective.
struct Manpower {
    int own = 5;
    int opp = 5;
    auto operator<=>(const Manpower&) const = default;
};

/// "5v5" etc.
std::string to_string(Manpower m);
std::optional<Manpower> manpower_from_string(std::string_view s);

struct ShotAttrs {
    bool deflected = false;
    bool on_goal = false;
    bool goal = false;
    std::optional<double> distance_ft;
    bool operator==(const ShotAttrs&) const = default;
};

struct EntryAttrs {
    bool controlled = false;
    int attackers = 0;
    int defenders = 0;
    bool operator==(const EntryAttrs&) const = default;
};

struct ExitAttrs {
    bool controlled = false;
    bool operator==(const ExitAttrs&) const = default;
};

struct PassAttrs {
    PassType pass_type = PassType::other;
    std::optional<std::string> linked_reception_id;
    bool operator==(const PassAttrs&) const = default;
};

/// One timestamped, located, possession-labeled on-puck action. The point
/// is stored post-normalization (attacking frame of `team_id`).
struct Event {
    std::string event_id;
    std::string game_id;
    std::string league;
    std::string season;
    int period = 1;
    double t_s = 0.0;
    std::string team_id;
    std::optional<std::string> player_id;
    EventType type = EventType::stoppage;
    NormalizedPoint point;
    std::optional<std::string> possession_team;
    Manpower manpower;
    std::optional<ShotAttrs> shot;
    std::optional<EntryAttrs> entry;
    std::optional<ExitAttrs> exit;
    std::optional<PassAttrs> pass;

    bool operator==(const Event&) const = default;
};

enum class Position { F, D, G };

const char* to_string(Position p);
std::optional<Position> position_from_string(std::string_view s);

struct Shift {
    std::string game_id;
    std::string player_id;
    std::string team_id;
    Position position = Position::F;
    int period = 1;
    double start_s = 0.0;
    double end_s = 0.0;
    bool operator==(const Shift&) const = default;
};

/// Skater strength over [start_s, end_s) of one period; intervals tile
/// each period.
struct ManpowerInterval {
    std::string game_id;
    int period = 1;
    double start_s = 0.0;
    double end_s = 0.0;
    std::string home_team;
    std::string away_team;
    int home_skaters = 5;
    int away_skaters = 5;
    bool operator==(const ManpowerInterval&) const = default;
};

/// Immutable after rebuild_index(): events in input order, per-game index
/// sorted by (period, t_s, input order), game ids sorted for canonical
/// shard-merge order.
struct EventLog {
    std::vector<Event> events;
    std::vector<std::string> games;
    std::unordered_map<std::string, std::vector<std::uint32_t>> by_game;
    std::unordered_map<std::string, std::pair<std::string, std::string>> teams_by_game;

    void rebuild_index();

    const std::vector<std::uint32_t>& game_events(const std::string& game_id) const;

    /// The two teams seen in a game's events (lexicographic order).
    const std::pair<std::string, std::string>& game_teams(const std::string& game_id) const;

    /// Opponent of `team` in `game_id`; empty when unknown.
    std::string opponent_of(const std::string& game_id, const std::string& team) const;

    std::size_t size() const { return events.size(); }
};

} // namespace pace

#include "pace/events.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace pace {

const char* to_string(EventType t) {
    switch (t) {
        case EventType::pass: return "pass";
        case EventType::reception: return "reception";
        case EventType::failed_reception: return "failed_reception";
        case EventType::puck_recovery: return "puck_recovery";
        case EventType::carry: return "carry";
        case EventType::shot: return "shot";
        case EventType::block: return "block";
        case EventType::save: return "save";
        case EventType::faceoff: return "faceoff";
        case EventType::stoppage: return "stoppage";
        case EventType::zone_entry: return "zone_entry";
        case EventType::zone_exit: return "zone_exit";
        case EventType::penalty: return "penalty";
    }
    return "?";
}

std::optional<EventType> event_type_from_string(std::string_view s) {
    static const std::pair<std::string_view, EventType> table[] = {
        {"pass", EventType::pass},
        {"reception", EventType::reception},
        {"failed_reception", EventType::failed_reception},
        {"puck_recovery", EventType::puck_recovery},
        {"carry", EventType::carry},
        {"shot", EventType::shot},
        {"block", EventType::block},
        {"save", EventType::save},
        {"faceoff", EventType::faceoff},
        {"stoppage", EventType::stoppage},
        {"zone_entry", EventType::zone_entry},
        {"zone_exit", EventType::zone_exit},
        {"penalty", EventType::penalty},
    };
    for (const auto& [name, t] : table)
        if (name == s) return t;
    return std::nullopt;
}

const char* to_string(PassType t) {
    switch (t) {
        case PassType::d2d: return "d2d";
        case PassType::stretch: return "stretch";
        case PassType::slot: return "slot";
        case PassType::outlet: return "outlet";
        case PassType::ew: return "ew";
        case PassType::rim: return "rim";
        case PassType::other: return "other";
    }
    return "?";
}

std::optional<PassType> pass_type_from_string(std::string_view s) {
    static const std::pair<std::string_view, PassType> table[] = {
        {"d2d", PassType::d2d},   {"stretch", PassType::stretch}, {"slot", PassType::slot},
        {"outlet", PassType::outlet}, {"ew", PassType::ew},       {"rim", PassType::rim},
        {"other", PassType::other},
    };
    for (const auto& [name, t] : table)
        if (name == s) return t;
    return std::nullopt;
}

std::string to_string(Manpower m) {
    return std::to_string(m.own) + "v" + std::to_string(m.opp);
}

std::optional<Manpower> manpower_from_string(std::string_view s) {
    auto v = s.find('v');
    if (v == std::string_view::npos || v == 0 || v + 1 >= s.size()) return std::nullopt;
    Manpower m;
    m.own = 0;
    m.opp = 0;
    for (char c : s.substr(0, v)) {
        if (c < '0' || c > '9') return std::nullopt;
        m.own = m.own * 10 + (c - '0');
    }
    for (char c : s.substr(v + 1)) {
        if (c < '0' || c > '9') return std::nullopt;
        m.opp = m.opp * 10 + (c - '0');
    }
    return m;
}

const char* to_string(Position p) {
    switch (p) {
        case Position::F: return "F";
        case Position::D: return "D";
        case Position::G: return "G";
    }
    return "?";
}

std::optional<Position> position_from_string(std::string_view s) {
    if (s == "F") return Position::F;
    if (s == "D") return Position::D;
    if (s == "G") return Position::G;
    return std::nullopt;
}

void EventLog::rebuild_index() {
    games.clear();
    by_game.clear();
    teams_by_game.clear();
    for (std::uint32_t i = 0; i < events.size(); ++i)
        by_game[events[i].game_id].push_back(i);
    games.reserve(by_game.size());
    for (const auto& [g, _] : by_game) games.push_back(g);
    std::sort(games.begin(), games.end());
    for (auto& [g, idx] : by_game) {
        std::stable_sort(idx.begin(), idx.end(), [this](std::uint32_t a, std::uint32_t b) {
            const Event& ea = events[a];
            const Event& eb = events[b];
            if (ea.period != eb.period) return ea.period < eb.period;
            return ea.t_s < eb.t_s;
        });
        std::set<std::string> teams;
        for (auto i : idx) {
            teams.insert(events[i].team_id);
            if (events[i].possession_team) teams.insert(*events[i].possession_team);
        }
        std::pair<std::string, std::string> pair;
        auto it = teams.begin();
        if (it != teams.end()) pair.first = *it++;
        if (it != teams.end()) pair.second = *it;
        teams_by_game[g] = std::move(pair);
    }
}

const std::vector<std::uint32_t>& EventLog::game_events(const std::string& game_id) const {
    auto it = by_game.find(game_id);
    if (it == by_game.end()) throw std::runtime_error("unknown game '" + game_id + "'");
    return it->second;
}

const std::pair<std::string, std::string>& EventLog::game_teams(const std::string& game_id) const {
    auto it = teams_by_game.find(game_id);
    if (it == teams_by_game.end()) throw std::runtime_error("unknown game '" + game_id + "'");
    return it->second;
}

std::string EventLog::opponent_of(const std::string& game_id, const std::string& team) const {
    const auto& [a, b] = game_teams(game_id);
    if (team == a) return b;
    if (team == b) return a;
    return {};
}

} // namespace pace

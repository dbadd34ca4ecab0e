#include "pace/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "pace/csv.hpp"

namespace pace {

namespace {

using json = nlohmann::json;

constexpr int kMinSkaters = 3;
constexpr int kMaxSkaters = 6;

std::optional<bool> parse_opt_bool(std::string_view s, std::size_t line) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s == "1" || s == "true") return true;
    if (s == "0" || s == "false") return false;
    throw ParseError(line, "bad boolean '" + std::string(s) + "'");
}

std::string bool_field(std::optional<bool> b) {
    if (!b) return {};
    return *b ? "1" : "0";
}

} // namespace

int AttackTable::sign_for(const std::string& game, const std::string& team, int period) const {
    auto it = sign.find({game, team, period});
    if (it == sign.end())
        throw std::runtime_error("no attack direction for game " + game + " team " + team +
                                 " period " + std::to_string(period));
    return it->second;
}

void AttackTable::set(const std::string& game, const std::string& team, int period, int s) {
    sign[{game, team, period}] = s;
}

AttackTable parse_attack_csv(std::istream& in) {
    AttackTable table;
    std::string line;
    std::size_t line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        auto f = csv::parse_line(line, line_no);
        if (f.size() != 4) throw ParseError(line_no, "expected 4 fields in attack table");
        int s = parse_int(f[3], line_no);
        if (s != 1 && s != -1) throw ParseError(line_no, "attack_sign must be 1 or -1");
        table.set(f[0], f[1], parse_int(f[2], line_no), s);
    }
    return table;
}

void write_attack_csv(const AttackTable& table, std::ostream& out) {
    out << "game_id,team_id,period,attack_sign\n";
    csv::Writer w(out);
    for (const auto& [key, s] : table.sign) {
        w.field(std::get<0>(key)).field(std::get<1>(key)).field(std::get<2>(key)).field(s);
        w.end_row();
    }
}

const char* const kEventCsvHeader =
    "event_id,game_id,league,season,period,t_s,team_id,player_id,event_type,x,y,"
    "possession_team,own_skaters,opp_skaters,shot_deflected,shot_on_goal,shot_goal,"
    "shot_distance_ft,entry_controlled,entry_attackers,entry_defenders,exit_controlled,"
    "pass_type,linked_reception_id";

namespace {

constexpr std::size_t kEventColumns = 24;

Event event_from_fields(const std::vector<std::string>& f, std::size_t line_no,
                        const RinkSpec& rink, const AttackTable& attack) {
    if (f.size() != kEventColumns)
        throw ParseError(line_no, "expected " + std::to_string(kEventColumns) + " fields, got " +
                                      std::to_string(f.size()));
    Event e;
    e.event_id = f[0];
    e.game_id = f[1];
    e.league = f[2];
    e.season = f[3];
    e.period = parse_int(f[4], line_no);
    if (e.period < 1) throw ParseError(line_no, "period must be >= 1");
    e.t_s = parse_double(f[5], line_no);
    e.team_id = f[6];
    if (!f[7].empty()) e.player_id = f[7];
    auto type = event_type_from_string(f[8]);
    if (!type) throw ParseError(line_no, "unknown event_type '" + f[8] + "'");
    e.type = *type;

    double raw_x = parse_double(f[9], line_no);
    double raw_y = parse_double(f[10], line_no);
    int sign = attack.sign_for(e.game_id, e.team_id, e.period);
    try {
        e.point = normalize(raw_x, raw_y, sign, rink);
    } catch (const std::runtime_error& err) {
        throw ParseError(line_no, std::string(err.what()) + " (event " + e.event_id + ")");
    }

    if (!f[11].empty()) e.possession_team = f[11];
    e.manpower.own = parse_int(f[12], line_no);
    e.manpower.opp = parse_int(f[13], line_no);
    if (e.manpower.own < kMinSkaters || e.manpower.own > kMaxSkaters)
        throw ParseError(line_no, "own_skaters out of bounds [3,6]: " + f[12]);
    if (e.manpower.opp < kMinSkaters || e.manpower.opp > kMaxSkaters)
        throw ParseError(line_no, "opp_skaters out of bounds [3,6]: " + f[13]);

    auto deflected = parse_opt_bool(f[14], line_no);
    auto on_goal = parse_opt_bool(f[15], line_no);
    auto goal = parse_opt_bool(f[16], line_no);
    if (deflected || on_goal || goal || !f[17].empty()) {
        if (e.type != EventType::shot) throw ParseError(line_no, "shot attrs on non-shot event");
        ShotAttrs s;
        s.deflected = deflected.value_or(false);
        s.on_goal = on_goal.value_or(false);
        s.goal = goal.value_or(false);
        if (!f[17].empty()) s.distance_ft = parse_double(f[17], line_no);
        e.shot = s;
    }

    auto entry_controlled = parse_opt_bool(f[18], line_no);
    if (entry_controlled || !f[19].empty() || !f[20].empty()) {
        if (e.type != EventType::zone_entry)
            throw ParseError(line_no, "entry attrs on non-entry event");
        EntryAttrs a;
        a.controlled = entry_controlled.value_or(false);
        a.attackers = f[19].empty() ? 0 : parse_int(f[19], line_no);
        a.defenders = f[20].empty() ? 0 : parse_int(f[20], line_no);
        if (a.attackers < 0 || a.attackers > 5) throw ParseError(line_no, "entry_attackers out of bounds [0,5]");
        if (a.defenders < 0 || a.defenders > 5) throw ParseError(line_no, "entry_defenders out of bounds [0,5]");
        e.entry = a;
    }

    auto exit_controlled = parse_opt_bool(f[21], line_no);
    if (exit_controlled) {
        if (e.type != EventType::zone_exit) throw ParseError(line_no, "exit attrs on non-exit event");
        e.exit = ExitAttrs{*exit_controlled};
    }

    if (!f[22].empty() || !f[23].empty()) {
        if (e.type != EventType::pass) throw ParseError(line_no, "pass attrs on non-pass event");
        PassAttrs p;
        if (!f[22].empty()) {
            auto pt = pass_type_from_string(f[22]);
            if (!pt) throw ParseError(line_no, "unknown pass_type '" + f[22] + "'");
            p.pass_type = *pt;
        }
        if (!f[23].empty()) p.linked_reception_id = f[23];
        e.pass = p;
    }
    return e;
}

} // namespace

EventLog parse_events_csv(std::istream& in, const RinkSpec& rink, const AttackTable& attack) {
    EventLog log;
    std::string line;
    std::size_t line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        log.events.push_back(event_from_fields(csv::parse_line(line, line_no), line_no, rink, attack));
    }
    log.rebuild_index();
    return log;
}

namespace {

Event event_from_json(const json& j, std::size_t line_no, const RinkSpec& rink,
                      const AttackTable& attack) {
    auto str = [&](const char* k) -> std::string {
        auto it = j.find(k);
        if (it == j.end() || it->is_null()) return {};
        return it->get<std::string>();
    };
    std::vector<std::string> f(kEventColumns);
    f[0] = str("event_id");
    f[1] = str("game_id");
    f[2] = str("league");
    f[3] = str("season");
    f[4] = j.contains("period") ? std::to_string(j["period"].get<int>()) : "";
    f[5] = j.contains("t_s") ? format_double(j["t_s"].get<double>()) : "";
    f[6] = str("team_id");
    f[7] = str("player_id");
    f[8] = str("event_type");
    f[9] = j.contains("x") ? format_double(j["x"].get<double>()) : "";
    f[10] = j.contains("y") ? format_double(j["y"].get<double>()) : "";
    f[11] = str("possession_team");
    f[12] = j.contains("own_skaters") ? std::to_string(j["own_skaters"].get<int>()) : "";
    f[13] = j.contains("opp_skaters") ? std::to_string(j["opp_skaters"].get<int>()) : "";
    auto flag = [&](const char* k) -> std::string {
        if (!j.contains(k) || j[k].is_null()) return {};
        return j[k].get<bool>() ? "1" : "0";
    };
    f[14] = flag("shot_deflected");
    f[15] = flag("shot_on_goal");
    f[16] = flag("shot_goal");
    f[17] = j.contains("shot_distance_ft") && !j["shot_distance_ft"].is_null()
                ? format_double(j["shot_distance_ft"].get<double>())
                : "";
    f[18] = flag("entry_controlled");
    f[19] = j.contains("entry_attackers") ? std::to_string(j["entry_attackers"].get<int>()) : "";
    f[20] = j.contains("entry_defenders") ? std::to_string(j["entry_defenders"].get<int>()) : "";
    f[21] = flag("exit_controlled");
    f[22] = str("pass_type");
    f[23] = str("linked_reception_id");
    return event_from_fields(f, line_no, rink, attack);
}

} // namespace

EventLog parse_events_jsonl(std::istream& in, const RinkSpec& rink, const AttackTable& attack) {
    EventLog log;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) throw ParseError(line_no, "malformed JSON record");
        log.events.push_back(event_from_json(j, line_no, rink, attack));
    }
    log.rebuild_index();
    return log;
}

EventLog parse_events_file(const std::string& path, const RinkSpec& rink, const AttackTable& attack) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open events file '" + path + "'");
    if (path.size() >= 6 && path.substr(path.size() - 6) == ".jsonl")
        return parse_events_jsonl(in, rink, attack);
    return parse_events_csv(in, rink, attack);
}

void serialize_events_csv(const EventLog& log, std::ostream& out) {
    out << kEventCsvHeader << '\n';
    csv::Writer w(out);
    for (const Event& e : log.events) {
        w.field(e.event_id).field(e.game_id).field(e.league).field(e.season);
        w.field(e.period).field(e.t_s).field(e.team_id).field(e.player_id.value_or(""));
        w.field(to_string(e.type)).field(e.point.x_north).field(e.point.y_east);
        w.field(e.possession_team.value_or(""));
        w.field(e.manpower.own).field(e.manpower.opp);
        if (e.shot) {
            w.field(bool_field(e.shot->deflected)).field(bool_field(e.shot->on_goal));
            w.field(bool_field(e.shot->goal)).field(e.shot->distance_ft);
        } else {
            w.field("").field("").field("").field("");
        }
        if (e.entry) {
            w.field(bool_field(e.entry->controlled)).field(e.entry->attackers).field(e.entry->defenders);
        } else {
            w.field("").field("").field("");
        }
        w.field(e.exit ? bool_field(e.exit->controlled) : "");
        if (e.pass) {
            w.field(to_string(e.pass->pass_type)).field(e.pass->linked_reception_id.value_or(""));
        } else {
            w.field("").field("");
        }
        w.end_row();
    }
}

void serialize_events_jsonl(const EventLog& log, std::ostream& out) {
    for (const Event& e : log.events) {
        json j;
        j["event_id"] = e.event_id;
        j["game_id"] = e.game_id;
        j["league"] = e.league;
        j["season"] = e.season;
        j["period"] = e.period;
        j["t_s"] = e.t_s;
        j["team_id"] = e.team_id;
        if (e.player_id) j["player_id"] = *e.player_id;
        j["event_type"] = to_string(e.type);
        j["x"] = e.point.x_north;
        j["y"] = e.point.y_east;
        if (e.possession_team) j["possession_team"] = *e.possession_team;
        j["own_skaters"] = e.manpower.own;
        j["opp_skaters"] = e.manpower.opp;
        if (e.shot) {
            j["shot_deflected"] = e.shot->deflected;
            j["shot_on_goal"] = e.shot->on_goal;
            j["shot_goal"] = e.shot->goal;
            if (e.shot->distance_ft) j["shot_distance_ft"] = *e.shot->distance_ft;
        }
        if (e.entry) {
            j["entry_controlled"] = e.entry->controlled;
            j["entry_attackers"] = e.entry->attackers;
            j["entry_defenders"] = e.entry->defenders;
        }
        if (e.exit) j["exit_controlled"] = e.exit->controlled;
        if (e.pass) {
            j["pass_type"] = to_string(e.pass->pass_type);
            if (e.pass->linked_reception_id) j["linked_reception_id"] = *e.pass->linked_reception_id;
        }
        out << j.dump() << '\n';
    }
}

std::vector<Shift> parse_shifts_csv(std::istream& in) {
    std::vector<Shift> shifts;
    std::string line;
    std::size_t line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        auto f = csv::parse_line(line, line_no);
        if (f.size() != 7) throw ParseError(line_no, "expected 7 fields in shifts file");
        Shift s;
        s.game_id = f[0];
        s.player_id = f[1];
        s.team_id = f[2];
        auto pos = position_from_string(f[3]);
        if (!pos) throw ParseError(line_no, "unknown position '" + f[3] + "'");
        s.position = *pos;
        s.period = parse_int(f[4], line_no);
        s.start_s = parse_double(f[5], line_no);
        s.end_s = parse_double(f[6], line_no);
        if (!(s.start_s < s.end_s)) throw ParseError(line_no, "shift start must precede end");
        shifts.push_back(std::move(s));
    }
    return shifts;
}

void write_shifts_csv(const std::vector<Shift>& shifts, std::ostream& out) {
    out << "game_id,player_id,team_id,position,period,start_s,end_s\n";
    csv::Writer w(out);
    for (const Shift& s : shifts) {
        w.field(s.game_id).field(s.player_id).field(s.team_id).field(to_string(s.position));
        w.field(s.period).field(s.start_s).field(s.end_s);
        w.end_row();
    }
}

std::vector<Shift> parse_shifts_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open shifts file '" + path + "'");
    return parse_shifts_csv(in);
}

std::vector<ManpowerInterval> parse_manpower_csv(std::istream& in) {
    std::vector<ManpowerInterval> intervals;
    std::string line;
    std::size_t line_no = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        auto f = csv::parse_line(line, line_no);
        if (f.size() != 8) throw ParseError(line_no, "expected 8 fields in manpower file");
        ManpowerInterval m;
        m.game_id = f[0];
        m.period = parse_int(f[1], line_no);
        m.start_s = parse_double(f[2], line_no);
        m.end_s = parse_double(f[3], line_no);
        m.home_team = f[4];
        m.away_team = f[5];
        m.home_skaters = parse_int(f[6], line_no);
        m.away_skaters = parse_int(f[7], line_no);
        if (!(m.start_s < m.end_s)) throw ParseError(line_no, "interval start must precede end");
        for (int v : {m.home_skaters, m.away_skaters})
            if (v < kMinSkaters || v > kMaxSkaters)
                throw ParseError(line_no, "skater count out of bounds [3,6]");
        intervals.push_back(std::move(m));
    }
    return intervals;
}

void write_manpower_csv(const std::vector<ManpowerInterval>& intervals, std::ostream& out) {
    out << "game_id,period,start_s,end_s,home_team,away_team,home_skaters,away_skaters\n";
    csv::Writer w(out);
    for (const ManpowerInterval& m : intervals) {
        w.field(m.game_id).field(m.period).field(m.start_s).field(m.end_s);
        w.field(m.home_team).field(m.away_team).field(m.home_skaters).field(m.away_skaters);
        w.end_row();
    }
}

std::vector<ManpowerInterval> parse_manpower_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manpower file '" + path + "'");
    return parse_manpower_csv(in);
}

const char* to_string(FindingKind k) {
    switch (k) {
        case FindingKind::timestamp_order: return "timestamp_order";
        case FindingKind::manpower_mismatch: return "manpower_mismatch";
        case FindingKind::dangling_pass_link: return "dangling_pass_link";
        case FindingKind::missing_attrs: return "missing_attrs";
        case FindingKind::shift_overlap: return "shift_overlap";
        case FindingKind::interval_gap: return "interval_gap";
    }
    return "?";
}

std::string ValidationReport::summary() const {
    if (findings.empty()) return "clean";
    std::map<FindingKind, std::size_t> counts;
    for (const auto& f : findings) ++counts[f.kind];
    std::ostringstream out;
    out << findings.size() << " finding(s):";
    for (const auto& [k, n] : counts) out << ' ' << to_string(k) << '=' << n;
    return out.str();
}

ValidationReport validate(const EventLog& log, const std::vector<Shift>& shifts,
                          const std::vector<ManpowerInterval>& intervals) {
    ValidationReport report;
    auto add = [&](FindingKind kind, const std::string& game, const std::string& event,
                   std::string detail) {
        report.findings.push_back({kind, game, event, std::move(detail)});
    };

    // Timestamp monotonicity in file order, per (game, period).
    std::map<std::pair<std::string, int>, double> last_t;
    for (const Event& e : log.events) {
        auto key = std::make_pair(e.game_id, e.period);
        auto it = last_t.find(key);
        if (it != last_t.end() && e.t_s < it->second)
            add(FindingKind::timestamp_order, e.game_id, e.event_id,
                "t_s " + format_double(e.t_s) + " after " + format_double(it->second));
        last_t[key] = std::max(it == last_t.end() ? e.t_s : it->second, e.t_s);
    }

    // Manpower agreement with the covering interval.
    if (!intervals.empty()) {
        std::map<std::pair<std::string, int>, std::vector<const ManpowerInterval*>> by_period;
        for (const ManpowerInterval& m : intervals) by_period[{m.game_id, m.period}].push_back(&m);
        for (auto& [_, v] : by_period)
            std::sort(v.begin(), v.end(),
                      [](auto* a, auto* b) { return a->start_s < b->start_s; });
        for (const Event& e : log.events) {
            auto it = by_period.find({e.game_id, e.period});
            if (it == by_period.end()) continue;
            const ManpowerInterval* cover = nullptr;
            for (const auto* m : it->second) {
                bool is_last = m == it->second.back();
                if (e.t_s >= m->start_s && (e.t_s < m->end_s || (is_last && e.t_s <= m->end_s))) {
                    cover = m;
                    break;
                }
            }
            if (!cover) {
                add(FindingKind::manpower_mismatch, e.game_id, e.event_id, "no covering interval");
                continue;
            }
            Manpower expect;
            if (e.team_id == cover->home_team) {
                expect = {cover->home_skaters, cover->away_skaters};
            } else if (e.team_id == cover->away_team) {
                expect = {cover->away_skaters, cover->home_skaters};
            } else {
                add(FindingKind::manpower_mismatch, e.game_id, e.event_id,
                    "team " + e.team_id + " not in interval's game");
                continue;
            }
            if (e.manpower != expect)
                add(FindingKind::manpower_mismatch, e.game_id, e.event_id,
                    "event " + to_string(e.manpower) + " vs interval " + to_string(expect));
        }
    }

    // Dangling pass links and missing attrs.
    std::unordered_map<std::string, const Event*> by_id;
    by_id.reserve(log.events.size());
    for (const Event& e : log.events) by_id.emplace(e.event_id, &e);
    for (const Event& e : log.events) {
        if (e.type == EventType::shot && !e.shot)
            add(FindingKind::missing_attrs, e.game_id, e.event_id, "shot without attrs");
        if (e.type == EventType::zone_entry && !e.entry)
            add(FindingKind::missing_attrs, e.game_id, e.event_id, "zone_entry without attrs");
        if (e.type == EventType::zone_exit && !e.exit)
            add(FindingKind::missing_attrs, e.game_id, e.event_id, "zone_exit without attrs");
        if (e.type == EventType::pass && !e.pass)
            add(FindingKind::missing_attrs, e.game_id, e.event_id, "pass without attrs");
        if (e.pass && e.pass->linked_reception_id) {
            auto it = by_id.find(*e.pass->linked_reception_id);
            if (it == by_id.end()) {
                add(FindingKind::dangling_pass_link, e.game_id, e.event_id,
                    "linked reception '" + *e.pass->linked_reception_id + "' not found");
            } else if (it->second->type != EventType::reception &&
                       it->second->type != EventType::failed_reception) {
                add(FindingKind::dangling_pass_link, e.game_id, e.event_id,
                    "linked event is a " + std::string(to_string(it->second->type)));
            }
        }
    }

    // Per-player shift overlap.
    {
        std::map<std::tuple<std::string, std::string, int>, std::vector<std::pair<double, double>>> by_player;
        for (const Shift& s : shifts)
            by_player[{s.game_id, s.player_id, s.period}].emplace_back(s.start_s, s.end_s);
        for (auto& [key, spans] : by_player) {
            std::sort(spans.begin(), spans.end());
            for (std::size_t i = 1; i < spans.size(); ++i) {
                if (spans[i].first < spans[i - 1].second)
                    add(FindingKind::shift_overlap, std::get<0>(key), std::get<1>(key),
                        "overlap in period " + std::to_string(std::get<2>(key)));
            }
        }
    }

    // Interval tiling per (game, period).
    {
        std::map<std::pair<std::string, int>, std::vector<std::pair<double, double>>> by_period;
        for (const ManpowerInterval& m : intervals)
            by_period[{m.game_id, m.period}].emplace_back(m.start_s, m.end_s);
        for (auto& [key, spans] : by_period) {
            std::sort(spans.begin(), spans.end());
            std::string period = std::to_string(key.second);
            if (spans.front().first != 0.0)
                add(FindingKind::interval_gap, key.first, "",
                    "period " + period + " does not start at 0");
            for (std::size_t i = 1; i < spans.size(); ++i) {
                if (spans[i].first != spans[i - 1].second)
                    add(FindingKind::interval_gap, key.first, "",
                        "period " + period + " gap/overlap at " + format_double(spans[i].first));
            }
        }
    }

    return report;
}

} // namespace pace

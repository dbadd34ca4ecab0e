#include "pace/outcome_analytics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "pace/csv.hpp"

namespace pace {

std::string danger_class_for(const std::string& entry_type) {
    static const std::map<std::string, std::string> table = {
        {"1-on-0", "high"},   {"3-on-1", "high"},   {"2-on-1", "high"},
        {"3-on-2", "medium"}, {"1-on-1", "medium"}, {"2-on-2", "medium"},
        {"3-on-3", "low"},    {"1-on-2", "low"},    {"2-on-3", "low"},
        {"dump-in", "very_low"},
    };
    auto it = table.find(entry_type);
    return it == table.end() ? std::string{} : it->second;
}

std::string entry_type_key(const EntryAttrs& attrs) {
    if (!attrs.controlled) return "dump-in";
    if (attrs.attackers == 0 && attrs.defenders == 0) return "other";
    return std::to_string(attrs.attackers) + "-on-" + std::to_string(attrs.defenders);
}

namespace {

// (game, team, period) -> sequence index ordered by first-event time.
struct SequenceLookup {
    struct Span {
        double t_first, t_last;
        std::uint32_t seq;
    };
    std::map<std::tuple<std::string, std::string, int>, std::vector<Span>> spans;

    SequenceLookup(const EventLog& log, const std::vector<PossessionSequence>& seqs) {
        for (std::uint32_t i = 0; i < seqs.size(); ++i) {
            const PossessionSequence& s = seqs[i];
            const Event& first = log.events[s.event_idx.front()];
            const Event& last = log.events[s.event_idx.back()];
            spans[{first.game_id, s.team_id, s.period}].push_back({first.t_s, last.t_s, i});
        }
        for (auto& [_, v] : spans)
            std::sort(v.begin(), v.end(),
                      [](const Span& a, const Span& b) { return a.t_first < b.t_first; });
    }

    std::optional<std::uint32_t> containing(const std::string& game, const std::string& team,
                                            int period, double t) const {
        auto it = spans.find({game, team, period});
        if (it == spans.end()) return std::nullopt;
        for (const Span& s : it->second) {
            if (s.t_first > t) break;
            if (t <= s.t_last) return s.seq;
        }
        return std::nullopt;
    }
};

std::optional<double> pace_before(const PossessionSequence& seq, const EventLog& log, double t_end,
                                  double window_s) {
    double d = 0, dt = 0;
    for (const PaceSample& s : pace_samples(seq, log)) {
        const double t_to = log.events[s.to_idx].t_s;
        if (t_to >= t_end - window_s && t_to <= t_end) {
            d += s.d_total;
            dt += s.dt;
        }
    }
    if (dt <= 0) return std::nullopt;
    return d / dt;
}

} // namespace

EntryTableResult entry_table(const EventLog& log, const std::vector<PossessionSequence>& seqs,
                             double window_s, std::optional<Manpower> manpower) {
    const SequenceLookup lookup(log, seqs);

    // On-goal shots per (game, team, period), time-ordered.
    std::map<std::tuple<std::string, std::string, int>, std::vector<std::pair<double, bool>>> shots;
    for (const Event& e : log.events) {
        if (e.type != EventType::shot || !e.shot || !e.shot->on_goal) continue;
        shots[{e.game_id, e.team_id, e.period}].emplace_back(e.t_s, e.shot->goal);
    }
    for (auto& [_, v] : shots) std::sort(v.begin(), v.end());

    struct Accum {
        std::uint64_t n = 0;
        std::uint64_t with_shot = 0;
        std::uint64_t window_shots = 0;
        std::uint64_t window_goals = 0;
        double phi_sum = 0;
        std::uint64_t phi_n = 0;
    };
    std::map<std::string, Accum> by_type;

    for (const Event& e : log.events) {
        if (e.type != EventType::zone_entry || !e.entry) continue;
        if (manpower && e.manpower != *manpower) continue;
        const std::string key = entry_type_key(*e.entry);
        Accum& acc = by_type[key];
        ++acc.n;

        auto sit = shots.find({e.game_id, e.team_id, e.period});
        if (sit != shots.end()) {
            std::uint64_t in_window = 0, goals = 0;
            for (const auto& [t, goal] : sit->second) {
                if (t <= e.t_s) continue;
                if (t > e.t_s + window_s) break;
                ++in_window;
                if (goal) ++goals;
            }
            if (in_window > 0) ++acc.with_shot;
            acc.window_shots += in_window;
            acc.window_goals += goals;
        }

        if (auto seq_idx = lookup.containing(e.game_id, e.team_id, e.period, e.t_s)) {
            if (auto phi = pace_before(seqs[*seq_idx], log, e.t_s, 1e18)) {
                acc.phi_sum += *phi;
                ++acc.phi_n;
            }
        }
    }

    EntryTableResult result;
    std::map<std::string, Accum> by_class;
    for (const auto& [type, acc] : by_type) {
        EntryTypeRow row;
        row.entry_type = type;
        row.danger_class = danger_class_for(type);
        row.n = acc.n;
        row.shot_after_pct = acc.n ? 100.0 * double(acc.with_shot) / double(acc.n) : 0.0;
        row.shooting_pct =
            acc.window_shots ? 100.0 * double(acc.window_goals) / double(acc.window_shots) : 0.0;
        if (acc.phi_n) row.preceding_phi_t = acc.phi_sum / double(acc.phi_n);
        result.by_type.push_back(row);
        if (!row.danger_class.empty()) {
            Accum& c = by_class[row.danger_class];
            c.n += acc.n;
            c.phi_sum += acc.phi_sum;
            c.phi_n += acc.phi_n;
        }
    }
    for (const auto& [cls, acc] : by_class) {
        EntryClassRow row;
        row.danger_class = cls;
        row.n = acc.n;
        if (acc.phi_n) row.preceding_phi_t = acc.phi_sum / double(acc.phi_n);
        result.by_class.push_back(row);
    }
    return result;
}

void write_entry_table_csv(const EntryTableResult& r, std::ostream& out) {
    csv::Writer w(out);
    for (const char* col :
         {"entry_type", "danger_class", "n", "shot_after_pct", "shooting_pct", "phi_t"})
        w.field(col);
    w.end_row();
    for (const auto& row : r.by_type) {
        w.field(row.entry_type).field(row.danger_class).field(row.n);
        w.field(row.shot_after_pct).field(row.shooting_pct).field(row.preceding_phi_t);
        w.end_row();
    }
    out << '\n';
    csv::Writer w2(out);
    w2.field("danger_class").field("n").field("phi_t");
    w2.end_row();
    for (const auto& row : r.by_class) {
        w2.field(row.danger_class).field(row.n).field(row.preceding_phi_t);
        w2.end_row();
    }
}

void write_entry_table_json(const EntryTableResult& r, std::ostream& out) {
    nlohmann::json j;
    auto& types = j["by_type"] = nlohmann::json::array();
    for (const auto& row : r.by_type) {
        nlohmann::json t;
        t["entry_type"] = row.entry_type;
        t["danger_class"] = row.danger_class;
        t["n"] = row.n;
        t["shot_after_pct"] = row.shot_after_pct;
        t["shooting_pct"] = row.shooting_pct;
        t["phi_t"] = row.preceding_phi_t ? nlohmann::json(*row.preceding_phi_t) : nullptr;
        types.push_back(std::move(t));
    }
    auto& classes = j["by_class"] = nlohmann::json::array();
    for (const auto& row : r.by_class) {
        nlohmann::json t;
        t["danger_class"] = row.danger_class;
        t["n"] = row.n;
        t["phi_t"] = row.preceding_phi_t ? nlohmann::json(*row.preceding_phi_t) : nullptr;
        classes.push_back(std::move(t));
    }
    out << j.dump(2) << '\n';
}

std::vector<QuintileRow> preshot_quintiles(const EventLog& log,
                                           const std::vector<PossessionSequence>& seqs,
                                           const RinkSpec& rink, double window_s,
                                           std::optional<Manpower> manpower) {
    // Sequence containing each possession event.
    std::unordered_map<std::uint32_t, std::uint32_t> seq_of_event;
    for (std::uint32_t i = 0; i < seqs.size(); ++i)
        for (std::uint32_t idx : seqs[i].event_idx) seq_of_event[idx] = i;

    struct Eligible {
        double phi;
        std::string event_id;
        bool goal;
        double distance;
    };
    std::vector<Eligible> shots;
    for (std::uint32_t idx = 0; idx < log.events.size(); ++idx) {
        const Event& e = log.events[idx];
        if (e.type != EventType::shot || !e.shot || e.shot->deflected) continue;
        if (manpower && e.manpower != *manpower) continue;
        auto sit = seq_of_event.find(idx);
        if (sit == seq_of_event.end()) continue;
        auto phi = pace_before(seqs[sit->second], log, e.t_s, window_s);
        if (!phi) continue;
        double distance;
        if (e.shot->distance_ft) {
            distance = *e.shot->distance_ft;
        } else {
            const double gx = rink.half_length() - rink.goal_line_offset_ft;
            distance = std::hypot(gx - e.point.x_north, e.point.y_east);
        }
        shots.push_back({*phi, e.event_id, e.shot->goal, distance});
    }

    if (shots.size() < 5)
        throw std::runtime_error("cannot form quintiles: only " + std::to_string(shots.size()) +
                                 " eligible shots");

    std::sort(shots.begin(), shots.end(), [](const Eligible& a, const Eligible& b) {
        if (a.phi != b.phi) return a.phi < b.phi;
        return a.event_id < b.event_id;
    });

    std::vector<QuintileRow> rows;
    const std::size_t n = shots.size();
    const std::size_t base = n / 5;
    const std::size_t extra = n % 5;  // first groups take one more
    std::size_t start = 0;
    for (int q = 0; q < 5; ++q) {
        const std::size_t size = base + (static_cast<std::size_t>(q) < extra ? 1 : 0);
        QuintileRow row;
        row.quintile = q + 1;
        row.n = size;
        double phi_sum = 0, dist_sum = 0;
        for (std::size_t i = start; i < start + size; ++i) {
            phi_sum += shots[i].phi;
            dist_sum += shots[i].distance;
            if (shots[i].goal) ++row.goals;
        }
        if (size > 0) {
            row.mean_preshot_phi_t = phi_sum / double(size);
            row.mean_shot_distance_ft = dist_sum / double(size);
            row.true_shooting_pct = 100.0 * double(row.goals) / double(size);
        }
        rows.push_back(row);
        start += size;
    }
    return rows;
}

void write_quintiles_csv(const std::vector<QuintileRow>& rows, std::ostream& out) {
    csv::Writer w(out);
    for (const char* col :
         {"quintile", "n", "goals", "mean_preshot_phi_t", "true_shooting_pct", "mean_shot_distance_ft"})
        w.field(col);
    w.end_row();
    for (const auto& r : rows) {
        w.field(r.quintile).field(r.n).field(r.goals);
        w.field(r.mean_preshot_phi_t).field(r.true_shooting_pct).field(r.mean_shot_distance_ft);
        w.end_row();
    }
}

PassSpeedResult pass_reception_speeds(const EventLog& log, std::optional<Manpower> manpower) {
    std::unordered_map<std::string, const Event*> by_id;
    by_id.reserve(log.events.size());
    for (const Event& e : log.events) by_id.emplace(e.event_id, &e);

    struct Accum {
        std::uint64_t n = 0;
        double speed_sum = 0;
    };
    std::map<std::pair<PassType, bool>, Accum> groups;
    PassSpeedResult result;

    for (const Event& e : log.events) {
        if (e.type != EventType::pass || !e.pass) continue;
        if (manpower && e.manpower != *manpower) continue;
        if (!e.pass->linked_reception_id) {
            ++result.unlinked;
            continue;
        }
        auto it = by_id.find(*e.pass->linked_reception_id);
        if (it == by_id.end()) {
            ++result.unlinked;
            continue;
        }
        const Event& rec = *it->second;
        if (rec.type != EventType::reception && rec.type != EventType::failed_reception) {
            ++result.unlinked;
            continue;
        }
        const double dt = rec.t_s - e.t_s;
        if (dt <= 0) {
            ++result.dropped_nonpositive_dt;
            continue;
        }
        const double d = std::hypot(rec.point.x_north - e.point.x_north,
                                    rec.point.y_east - e.point.y_east);
        Accum& acc = groups[{e.pass->pass_type, rec.type == EventType::reception}];
        ++acc.n;
        acc.speed_sum += d / dt;
    }

    for (const auto& [key, acc] : groups) {
        PassSpeedRow row;
        row.pass_type = key.first;
        row.success = key.second;
        row.n = acc.n;
        row.mean_speed = acc.n ? acc.speed_sum / double(acc.n) : 0.0;
        result.rows.push_back(row);
    }
    return result;
}

void write_pass_speeds_csv(const PassSpeedResult& r, std::ostream& out) {
    csv::Writer w(out);
    for (const char* col : {"pass_type", "outcome", "n", "mean_speed_ft_s"}) w.field(col);
    w.end_row();
    for (const auto& row : r.rows) {
        w.field(to_string(row.pass_type)).field(row.success ? "success" : "fail");
        w.field(row.n).field(row.mean_speed);
        w.end_row();
    }
    out << "# dropped_nonpositive_dt=" << r.dropped_nonpositive_dt << " unlinked=" << r.unlinked
        << '\n';
}

std::vector<TendencyRow> tendency_counters(const EventLog& log,
                                           const std::vector<PossessionSequence>& zonal_seqs,
                                           const std::vector<ManpowerInterval>& intervals,
                                           TendencyGroupBy group_by, const RinkSpec& rink) {
    const Manpower even{5, 5};
    std::unordered_map<std::string, const Event*> by_id;
    by_id.reserve(log.events.size());
    for (const Event& e : log.events) by_id.emplace(e.event_id, &e);

    auto group_of_event = [&](const Event& e) -> std::string {
        switch (group_by) {
            case TendencyGroupBy::league: return e.league;
            case TendencyGroupBy::season: return e.season;
            case TendencyGroupBy::period: return std::to_string(e.period);
        }
        return {};
    };

    struct Accum {
        std::set<std::string> games;
        double counts[9] = {};  // dz/nz/oz passes, exits, d2d, stretch, odd-man, ew10, ew15
        double zone_time_s[3] = {};
        double even_strength_s = 0;
    };
    std::map<std::string, Accum> groups;

    for (const Event& e : log.events) {
        const std::string group = group_of_event(e);
        Accum& acc = groups[group];
        acc.games.insert(e.game_id);
        if (e.manpower != even) continue;
        const Zone z = zone_of(e.point, rink);
        if (e.type == EventType::pass) {
            acc.counts[z == Zone::DZ ? 0 : z == Zone::NZ ? 1 : 2] += 1;
            if (e.pass) {
                if (z == Zone::DZ && e.pass->pass_type == PassType::d2d) acc.counts[4] += 1;
                if (z == Zone::DZ && e.pass->pass_type == PassType::stretch) acc.counts[5] += 1;
                if (z == Zone::NZ && e.pass->linked_reception_id) {
                    auto it = by_id.find(*e.pass->linked_reception_id);
                    if (it != by_id.end() && it->second->type == EventType::reception &&
                        zone_of(it->second->point, rink) == Zone::NZ) {
                        const double ew =
                            std::fabs(it->second->point.y_east - e.point.y_east);
                        if (ew > 10.0) acc.counts[7] += 1;
                        if (ew > 15.0) acc.counts[8] += 1;
                    }
                }
            }
        } else if (e.type == EventType::zone_exit && e.exit && e.exit->controlled &&
                   z == Zone::DZ) {
            acc.counts[3] += 1;
        } else if (e.type == EventType::zone_entry && e.entry && e.entry->controlled) {
            const int a = e.entry->attackers, d = e.entry->defenders;
            if ((a == 1 && d == 0) || (a == 2 && d == 1) || (a == 3 && d == 1) ||
                (a == 3 && d == 2))
                acc.counts[6] += 1;
        }
    }

    // Zone possession time from zonal 5v5 samples.
    for (const PossessionSequence& seq : zonal_seqs) {
        if (seq.manpower != even || !seq.zone) continue;
        const Event& first = log.events[seq.event_idx.front()];
        const std::string group = group_of_event(first);
        double dt = 0;
        for (const PaceSample& s : pace_samples(seq, log)) dt += s.dt;
        groups[group].zone_time_s[static_cast<int>(*seq.zone)] += dt;
    }

    // 5v5 seconds per group, for the per-60 rates.
    std::unordered_map<std::string, std::pair<std::string, int>> game_meta;  // league, first period
    for (const Event& e : log.events)
        game_meta.emplace(e.game_id, std::make_pair(e.league, 0));
    std::unordered_map<std::string, std::string> game_season;
    for (const Event& e : log.events) game_season.emplace(e.game_id, e.season);
    for (const ManpowerInterval& m : intervals) {
        if (m.home_skaters != 5 || m.away_skaters != 5) continue;
        std::string group;
        switch (group_by) {
            case TendencyGroupBy::league: {
                auto it = game_meta.find(m.game_id);
                if (it == game_meta.end()) continue;
                group = it->second.first;
                break;
            }
            case TendencyGroupBy::season: {
                auto it = game_season.find(m.game_id);
                if (it == game_season.end()) continue;
                group = it->second;
                break;
            }
            case TendencyGroupBy::period: group = std::to_string(m.period); break;
        }
        auto git = groups.find(group);
        if (git != groups.end()) git->second.even_strength_s += m.end_s - m.start_s;
    }

    std::vector<TendencyRow> rows;
    for (const auto& [group, acc] : groups) {
        TendencyRow row;
        row.group = group;
        row.games = acc.games.size();
        const double g = row.games ? double(row.games) : 1.0;
        row.dz_passes_pg = acc.counts[0] / g;
        row.nz_passes_pg = acc.counts[1] / g;
        row.oz_passes_pg = acc.counts[2] / g;
        row.dz_controlled_exits_pg = acc.counts[3] / g;
        row.dz_d2d_pg = acc.counts[4] / g;
        row.dz_stretch_pg = acc.counts[5] / g;
        row.odd_man_rushes_pg = acc.counts[6] / g;
        row.dz_time_min_pg = acc.zone_time_s[0] / 60.0 / g;
        row.nz_time_min_pg = acc.zone_time_s[1] / 60.0 / g;
        row.oz_time_min_pg = acc.zone_time_s[2] / 60.0 / g;
        const double hours = acc.even_strength_s / 3600.0;
        row.ew_gt10_per60 = hours > 0 ? acc.counts[7] / hours : 0.0;
        row.ew_gt15_per60 = hours > 0 ? acc.counts[8] / hours : 0.0;
        rows.push_back(row);
    }
    return rows;
}

void write_tendencies_csv(const std::vector<TendencyRow>& rows, std::ostream& out) {
    csv::Writer w(out);
    for (const char* col :
         {"group", "games", "dz_passes_pg", "dz_time_min_pg", "nz_passes_pg", "nz_time_min_pg",
          "oz_passes_pg", "oz_time_min_pg", "ew_gt10_per60", "ew_gt15_per60",
          "dz_controlled_exits_pg", "dz_d2d_pg", "dz_stretch_pg", "odd_man_rushes_pg"})
        w.field(col);
    w.end_row();
    for (const auto& r : rows) {
        w.field(r.group).field(r.games);
        w.field(r.dz_passes_pg).field(r.dz_time_min_pg);
        w.field(r.nz_passes_pg).field(r.nz_time_min_pg);
        w.field(r.oz_passes_pg).field(r.oz_time_min_pg);
        w.field(r.ew_gt10_per60).field(r.ew_gt15_per60);
        w.field(r.dz_controlled_exits_pg).field(r.dz_d2d_pg).field(r.dz_stretch_pg);
        w.field(r.odd_man_rushes_pg);
        w.end_row();
    }
}

} // namespace pace

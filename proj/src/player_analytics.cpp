#include "pace/player_analytics.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include <json.hpp>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include "pace/csv.hpp"

namespace pace {

ShiftIndex::ShiftIndex(const std::vector<Shift>& shifts) {
    std::map<std::pair<std::string, std::string>, std::set<std::string>> roster_sets;
    for (const Shift& s : shifts) {
        spans_[{s.game_id, s.player_id}][s.period].emplace_back(s.start_s, s.end_s);
        roster_sets[{s.game_id, s.team_id}].insert(s.player_id);
        positions_.emplace(s.player_id, s.position);
    }
    for (auto& [_, by_period] : spans_)
        for (auto& [_, v] : by_period) std::sort(v.begin(), v.end());
    for (auto& [key, names] : roster_sets)
        rosters_[key] = std::vector<std::string>(names.begin(), names.end());
}

bool ShiftIndex::on_ice(const std::string& game, const std::string& player, int period,
                        double t) const {
    auto it = spans_.find({game, player});
    if (it == spans_.end()) return false;
    auto pit = it->second.find(period);
    if (pit == it->second.end()) return false;
    const auto& v = pit->second;
    auto up = std::upper_bound(v.begin(), v.end(), std::make_pair(t, 1e300));
    if (up == v.begin()) return false;
    --up;
    return t >= up->first && t < up->second;
}

bool ShiftIndex::in_lineup(const std::string& game, const std::string& player) const {
    return spans_.count({game, player}) > 0;
}

const std::vector<std::string>& ShiftIndex::roster(const std::string& game,
                                                   const std::string& team) const {
    auto it = rosters_.find({game, team});
    return it == rosters_.end() ? empty_ : it->second;
}

std::optional<Position> ShiftIndex::position(const std::string& player) const {
    auto it = positions_.find(player);
    if (it == positions_.end()) return std::nullopt;
    return it->second;
}

std::map<std::pair<std::string, std::string>, double> toi_5v5_minutes(
    const std::vector<Shift>& shifts, const std::vector<ManpowerInterval>& intervals) {
    std::map<std::tuple<std::string, int>, std::vector<std::pair<double, double>>> five_on_five;
    for (const ManpowerInterval& m : intervals)
        if (m.home_skaters == 5 && m.away_skaters == 5)
            five_on_five[{m.game_id, m.period}].emplace_back(m.start_s, m.end_s);

    std::map<std::pair<std::string, std::string>, double> toi;
    for (const Shift& s : shifts) {
        auto it = five_on_five.find({s.game_id, s.period});
        if (it == five_on_five.end()) continue;
        double seconds = 0;
        for (const auto& [a, b] : it->second)
            seconds += std::max(0.0, std::min(b, s.end_s) - std::max(a, s.start_s));
        if (seconds > 0) toi[{s.team_id, s.player_id}] += seconds / 60.0;
    }
    return toi;
}

namespace {

struct SeqSpeed {
    std::array<double, 4> d{};  // total, ew, ns, n
    double dt = 0;
};

SeqSpeed sequence_speed(const PossessionSequence& seq, const EventLog& log) {
    SeqSpeed s;
    for (const PaceSample& ps : pace_samples(seq, log)) {
        s.d[0] += ps.d_total;
        s.d[1] += ps.d_ew;
        s.d[2] += ps.d_ns;
        s.d[3] += ps.d_n;
        s.dt += ps.dt;
    }
    return s;
}

template <typename Partial>
std::vector<Partial> run_sharded(const EventLog& log, const std::vector<PossessionSequence>& seqs,
                                 int workers,
                                 const std::function<void(Partial&, std::uint32_t)>& body) {
    const int n_games = static_cast<int>(log.games.size());
    std::vector<std::vector<std::uint32_t>> seq_by_game(n_games);
    for (std::uint32_t i = 0; i < seqs.size(); ++i)
        seq_by_game[seqs[i].game_index].push_back(i);
    std::vector<Partial> partial(n_games);
#if defined(_OPENMP)
    if (workers < 1) workers = omp_get_max_threads();
#else
    workers = 1;
#endif
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (int g = 0; g < n_games; ++g)
        for (std::uint32_t i : seq_by_game[g]) body(partial[g], i);
    return partial;
}

} // namespace

IndividualPaceResult individual_pace(const EventLog& log,
                                     const std::vector<PossessionSequence>& zonal_seqs,
                                     const PaceFilter& filter, const ShiftIndex& shifts,
                                     int workers) {
    struct Partial {
        std::map<PlayerZoneKey, SpeedVector> attributed;
        double un_d = 0, un_dt = 0;
    };
    auto partials = run_sharded<Partial>(
        log, zonal_seqs, workers, [&](Partial& p, std::uint32_t i) {
            const PossessionSequence& seq = zonal_seqs[i];
            if (!filter.accepts(seq, log) || !seq.zone) return;
            for (const PaceSample& s : pace_samples(seq, log)) {
                const auto& from = log.events[s.from_idx].player_id;
                const auto& to = log.events[s.to_idx].player_id;
                auto credit = [&](const std::string& player, double share) {
                    PaceSample half = s;
                    half.d_total *= share;
                    half.d_ew *= share;
                    half.d_ns *= share;
                    half.d_n *= share;
                    half.dt *= share;
                    p.attributed[{seq.team_id, player, *seq.zone}].add(half);
                };
                if (from && to && *from == *to) {
                    credit(*from, 1.0);
                } else {
                    if (from) credit(*from, 0.5);
                    else {
                        p.un_d += s.d_total * 0.5;
                        p.un_dt += s.dt * 0.5;
                    }
                    if (to) credit(*to, 0.5);
                    else {
                        p.un_d += s.d_total * 0.5;
                        p.un_dt += s.dt * 0.5;
                    }
                }
            }
        });

    IndividualPaceResult result;
    for (const auto& p : partials) {
        for (const auto& [key, sv] : p.attributed) result.attributed[key].merge(sv);
        result.unattributed_d += p.un_d;
        result.unattributed_dt += p.un_dt;
    }
    for (const auto& [key, sv] : result.attributed) {
        const auto& [team, player, zone] = key;
        auto pos = shifts.position(player);
        if (!pos || *pos == Position::G) continue;
        result.baseline[{team, *pos, zone}].merge(sv);
    }
    return result;
}

std::optional<double> WowySplit::mean(int comp, WowyWeighting w) const {
    if (w == WowyWeighting::per_sequence) {
        if (n_defined == 0) return std::nullopt;
        return sum_phi[comp] / double(n_defined);
    }
    if (pooled.sum_dt <= 0) return std::nullopt;
    switch (comp) {
        case 0: return pooled.sum_d_total / pooled.sum_dt;
        case 1: return pooled.sum_d_ew / pooled.sum_dt;
        case 2: return pooled.sum_d_ns / pooled.sum_dt;
        default: return pooled.sum_d_n / pooled.sum_dt;
    }
}

std::optional<double> WowyCell::pct(int comp, WowyWeighting w) const {
    auto with = with_player.mean(comp, w);
    auto without = without_player.mean(comp, w);
    if (!with || !without || *without == 0.0) return std::nullopt;
    return 100.0 * (*with - *without) / *without;
}

WowyResult wowy_all(const EventLog& log, const std::vector<PossessionSequence>& zonal_seqs,
                    const PaceFilter& filter, const ShiftIndex& shifts, int workers) {
    using CellMap = std::map<PlayerZoneKey, WowyCell>;
    auto partials = run_sharded<CellMap>(
        log, zonal_seqs, workers, [&](CellMap& cells, std::uint32_t i) {
            const PossessionSequence& seq = zonal_seqs[i];
            if (!filter.accepts(seq, log) || !seq.zone) return;
            const std::string& game = log.events[seq.event_idx.front()].game_id;
            const auto& roster = shifts.roster(game, seq.team_id);
            if (roster.empty()) return;

            const SeqSpeed speed = sequence_speed(seq, log);
            const bool defined = speed.dt > 0;

            for (const std::string& player : roster) {
                bool at_all = false, at_every = true;
                for (std::uint32_t idx : seq.event_idx) {
                    const Event& e = log.events[idx];
                    if (shifts.on_ice(game, player, e.period, e.t_s)) at_all = true;
                    else at_every = false;
                }
                WowyCell& cell = cells[{seq.team_id, player, *seq.zone}];
                WowySplit* split = nullptr;
                if (at_every) split = &cell.with_player;
                else if (!at_all) split = &cell.without_player;
                else {
                    ++cell.excluded;
                    continue;
                }
                ++split->count;
                if (defined) {
                    for (int c = 0; c < 4; ++c) split->sum_phi[c] += speed.d[c] / speed.dt;
                    ++split->n_defined;
                    PaceSample pooled;
                    pooled.d_total = speed.d[0];
                    pooled.d_ew = speed.d[1];
                    pooled.d_ns = speed.d[2];
                    pooled.d_n = speed.d[3];
                    pooled.dt = speed.dt;
                    split->pooled.add(pooled);
                }
            }
        });

    WowyResult result;
    for (const auto& p : partials) {
        for (const auto& [key, cell] : p) {
            WowyCell& into = result.cells[key];
            for (int c = 0; c < 4; ++c) {
                into.with_player.sum_phi[c] += cell.with_player.sum_phi[c];
                into.without_player.sum_phi[c] += cell.without_player.sum_phi[c];
            }
            into.with_player.n_defined += cell.with_player.n_defined;
            into.with_player.count += cell.with_player.count;
            into.with_player.pooled.merge(cell.with_player.pooled);
            into.without_player.n_defined += cell.without_player.n_defined;
            into.without_player.count += cell.without_player.count;
            into.without_player.pooled.merge(cell.without_player.pooled);
            into.excluded += cell.excluded;
        }
    }
    return result;
}

PlayerTables build_player_tables(const EventLog& log,
                                 const std::vector<PossessionSequence>& zonal_seqs,
                                 const PaceFilter& filter, const std::vector<Shift>& shifts,
                                 const std::vector<ManpowerInterval>& intervals, double min_toi_min,
                                 WowyWeighting weighting, AggMode mode, int workers) {
    const ShiftIndex index(shifts);
    const auto toi = toi_5v5_minutes(shifts, intervals);
    const IndividualPaceResult indiv = individual_pace(log, zonal_seqs, filter, index, workers);
    const WowyResult wowy = wowy_all(log, zonal_seqs, filter, index, workers);

    PlayerTables tables;
    std::set<std::pair<std::string, std::string>> players;
    for (const auto& [key, _] : indiv.attributed)
        players.insert({std::get<0>(key), std::get<1>(key)});
    for (const auto& [key, _] : wowy.cells)
        players.insert({std::get<0>(key), std::get<1>(key)});

    for (Zone zone : {Zone::DZ, Zone::NZ, Zone::OZ}) {
        auto& rows = tables.by_zone[zone];
        for (const auto& [team, player] : players) {
            auto pos = index.position(player);
            if (!pos || *pos == Position::G) continue;
            auto toi_it = toi.find({team, player});
            const double minutes = toi_it == toi.end() ? 0.0 : toi_it->second;
            if (minutes < min_toi_min) continue;

            PlayerTableRow row;
            row.team = team;
            row.player = player;
            row.position = *pos;
            row.toi_min = minutes;

            auto att_it = indiv.attributed.find({team, player, zone});
            auto base_it = indiv.baseline.find({team, *pos, zone});
            if (att_it != indiv.attributed.end() && base_it != indiv.baseline.end()) {
                const RelativeSpeed rel = relative_to(att_it->second, base_it->second, mode);
                row.adjusted_pct = {rel.pct_t, rel.pct_ew, rel.pct_ns, rel.pct_n};
            }
            auto wowy_it = wowy.cells.find({team, player, zone});
            if (wowy_it != wowy.cells.end())
                for (int c = 0; c < 4; ++c) row.wowy_pct[c] = wowy_it->second.pct(c, weighting);
            rows.push_back(std::move(row));
        }
        std::sort(rows.begin(), rows.end(), [](const PlayerTableRow& a, const PlayerTableRow& b) {
            const double av = a.wowy_pct[0].value_or(-1e300);
            const double bv = b.wowy_pct[0].value_or(-1e300);
            if (av != bv) return av > bv;
            return std::tie(a.team, a.player) < std::tie(b.team, b.player);
        });
    }
    return tables;
}

void write_player_table_csv(const std::vector<PlayerTableRow>& rows, std::ostream& out) {
    csv::Writer w(out);
    for (const char* col :
         {"team", "player", "position", "toi_min", "adj_pct_t", "adj_pct_ew", "adj_pct_ns",
          "adj_pct_n", "wowy_pct_t", "wowy_pct_ew", "wowy_pct_ns", "wowy_pct_n"})
        w.field(col);
    w.end_row();
    for (const auto& r : rows) {
        w.field(r.team).field(r.player).field(to_string(r.position)).field(r.toi_min);
        for (const auto& v : r.adjusted_pct) w.field(v);
        for (const auto& v : r.wowy_pct) w.field(v);
        w.end_row();
    }
}

void write_player_table_json(const std::vector<PlayerTableRow>& rows, std::ostream& out) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json j;
        j["team"] = r.team;
        j["player"] = r.player;
        j["position"] = to_string(r.position);
        j["toi_min"] = r.toi_min;
        const char* adj_names[] = {"adj_pct_t", "adj_pct_ew", "adj_pct_ns", "adj_pct_n"};
        const char* wowy_names[] = {"wowy_pct_t", "wowy_pct_ew", "wowy_pct_ns", "wowy_pct_n"};
        for (int c = 0; c < 4; ++c) {
            j[adj_names[c]] = r.adjusted_pct[c] ? nlohmann::json(*r.adjusted_pct[c]) : nullptr;
            j[wowy_names[c]] = r.wowy_pct[c] ? nlohmann::json(*r.wowy_pct[c]) : nullptr;
        }
        arr.push_back(std::move(j));
    }
    out << arr.dump(2) << '\n';
}

std::vector<WowyPlayerRow> wowy_player(const EventLog& log,
                                       const std::vector<PossessionSequence>& zonal_seqs,
                                       const PaceFilter& filter, const ShiftIndex& shifts,
                                       const std::string& team, const std::string& player,
                                       WowyWeighting weighting, int workers) {
    const WowyResult all = wowy_all(log, zonal_seqs, filter, shifts, workers);
    std::vector<WowyPlayerRow> rows;
    for (Zone zone : {Zone::DZ, Zone::NZ, Zone::OZ}) {
        auto it = all.cells.find({team, player, zone});
        if (it == all.cells.end()) continue;
        const WowyCell& cell = it->second;
        WowyPlayerRow row;
        row.zone = zone;
        for (int c = 0; c < 4; ++c) {
            row.with_phi[c] = cell.with_player.mean(c, weighting);
            row.without_phi[c] = cell.without_player.mean(c, weighting);
            row.pct[c] = cell.pct(c, weighting);
        }
        row.n_with = cell.with_player.count;
        row.n_without = cell.without_player.count;
        row.n_excluded = cell.excluded;
        rows.push_back(row);
    }
    return rows;
}

void write_wowy_csv(const std::vector<WowyPlayerRow>& rows, std::ostream& out) {
    csv::Writer w(out);
    for (const char* col : {"zone", "with_phi_t", "with_phi_ew", "with_phi_ns", "with_phi_n",
                            "without_phi_t", "without_phi_ew", "without_phi_ns", "without_phi_n",
                            "pct_t", "pct_ew", "pct_ns", "pct_n", "n_with", "n_without",
                            "n_excluded"})
        w.field(col);
    w.end_row();
    for (const auto& r : rows) {
        w.field(to_string(r.zone));
        for (const auto& v : r.with_phi) w.field(v);
        for (const auto& v : r.without_phi) w.field(v);
        for (const auto& v : r.pct) w.field(v);
        w.field(r.n_with).field(r.n_without).field(r.n_excluded);
        w.end_row();
    }
}

} // namespace pace

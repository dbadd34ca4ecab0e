#include "pace/team_analytics.hpp"

#include <algorithm>
#include <ostream>
#include <set>

#include <json.hpp>

#include "pace/csv.hpp"

namespace pace {

const char* to_string(Side s) {
    return s == Side::attacking ? "attacking" : "defending";
}

TeamZonalResult team_zonal(const EventLog& log, const std::vector<PossessionSequence>& zonal_seqs,
                           const PaceFilter& filter, AggMode mode, bool leave_one_out,
                           int workers) {
    KeyDims dims;
    dims.team = true;
    dims.zone = true;
    const GroupedSpeed attacking = aggregate_sequences(log, zonal_seqs, dims, filter, workers);

    KeyDims opp_dims;
    opp_dims.opponent = true;
    opp_dims.zone = true;
    const GroupedSpeed defending = aggregate_sequences(log, zonal_seqs, opp_dims, filter, workers);

    TeamZonalResult result;
    std::set<std::string> teams;
    for (const auto& [key, sv] : attacking) {
        result.league[key.zone].merge(sv);
        if (key.team) teams.insert(*key.team);
    }

    auto baseline_for = [&](const std::string& team,
                            const std::optional<Zone>& zone) -> SpeedVector {
        SpeedVector base = result.league.count(zone) ? result.league.at(zone) : SpeedVector{};
        if (leave_one_out) {
            GroupKey k;
            k.team = team;
            k.zone = zone;
            auto it = attacking.find(k);
            if (it != attacking.end()) {
                SpeedVector own = it->second;
                base.sum_d_total -= own.sum_d_total;
                base.sum_d_ew -= own.sum_d_ew;
                base.sum_d_ns -= own.sum_d_ns;
                base.sum_d_n -= own.sum_d_n;
                base.sum_dt -= own.sum_dt;
                base.sum_v_total -= own.sum_v_total;
                base.sum_v_ew -= own.sum_v_ew;
                base.sum_v_ns -= own.sum_v_ns;
                base.sum_v_n -= own.sum_v_n;
                base.n -= own.n;
            }
        }
        return base;
    };

    for (const std::string& team : teams) {
        for (Zone zone : {Zone::DZ, Zone::NZ, Zone::OZ}) {
            const SpeedVector base = baseline_for(team, zone);
            {
                GroupKey k;
                k.team = team;
                k.zone = zone;
                auto it = attacking.find(k);
                TeamZonalRow row;
                row.team = team;
                row.zone = zone;
                row.side = Side::attacking;
                if (it != attacking.end()) row.sv = it->second;
                row.vs_league = relative_to(row.sv, base, mode);
                result.rows.push_back(row);
            }
            {
                GroupKey k;
                k.opponent = team;
                k.zone = zone;
                auto it = defending.find(k);
                TeamZonalRow row;
                row.team = team;
                row.zone = zone;
                row.side = Side::defending;
                if (it != defending.end()) row.sv = it->second;
                row.vs_league = relative_to(row.sv, base, mode);
                result.rows.push_back(row);
            }
        }
    }
    return result;
}

void write_team_zonal_csv(const TeamZonalResult& r, AggMode mode, std::ostream& out) {
    csv::Writer w(out);
    for (const char* col : {"team", "zone", "side", "phi_t", "phi_ew", "phi_ns", "phi_n", "pct_t",
                            "pct_ew", "pct_ns", "pct_n", "sum_dt", "n_samples"})
        w.field(col);
    w.end_row();
    for (const auto& row : r.rows) {
        w.field(row.team).field(to_string(row.zone)).field(to_string(row.side));
        w.field(row.sv.phi_t(mode)).field(row.sv.phi_ew(mode)).field(row.sv.phi_ns(mode));
        w.field(row.sv.phi_n(mode));
        w.field(row.vs_league.pct_t).field(row.vs_league.pct_ew).field(row.vs_league.pct_ns);
        w.field(row.vs_league.pct_n);
        w.field(row.sv.sum_dt).field(row.sv.n);
        w.end_row();
    }
}

void write_team_zonal_json(const TeamZonalResult& r, AggMode mode, std::ostream& out) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        nlohmann::json j;
        j["team"] = row.team;
        j["zone"] = to_string(row.zone);
        j["side"] = to_string(row.side);
        auto put = [&](const char* name, std::optional<double> v) {
            if (v) j[name] = *v;
            else j[name] = nullptr;
        };
        put("phi_t", row.sv.phi_t(mode));
        put("phi_ew", row.sv.phi_ew(mode));
        put("phi_ns", row.sv.phi_ns(mode));
        put("phi_n", row.sv.phi_n(mode));
        put("pct_t", row.vs_league.pct_t);
        put("pct_ew", row.vs_league.pct_ew);
        put("pct_ns", row.vs_league.pct_ns);
        put("pct_n", row.vs_league.pct_n);
        j["n_samples"] = row.sv.n;
        rows.push_back(std::move(j));
    }
    out << rows.dump(2) << '\n';
}

TeamGridResult team_polygrid(const EventLog& log, const std::vector<PossessionSequence>& seqs,
                             const RinkSpec& spec, const std::string& team, Side side,
                             const PaceFilter& filter, double tau_s, double sigma, AllocMode alloc,
                             int workers) {
    TeamGridResult result;
    const bool mirror = side == Side::defending;

    PaceFilter team_filter = filter;
    if (side == Side::attacking) {
        team_filter.team = team;
        team_filter.opponent.reset();
    } else {
        team_filter.team.reset();
        team_filter.opponent = team;
    }
    result.team_grid = accumulate_sequences(log, seqs, spec, team_filter, mirror, alloc, workers);

    PaceFilter league_filter = filter;
    league_filter.team.reset();
    league_filter.opponent.reset();
    result.league_grid =
        accumulate_sequences(log, seqs, spec, league_filter, mirror, alloc, workers);

    result.team_speed = speed_grid(result.team_grid, tau_s);
    const SpeedGrid league_speed = speed_grid(result.league_grid, tau_s);
    result.differential = diff(result.team_speed, league_speed, /*pre_smooth=*/true, sigma);
    return result;
}

SeasonPairResult team_season_pairs(const EventLog& log,
                                   const std::vector<PossessionSequence>& zonal_seqs,
                                   const std::string& season_a, const std::string& season_b,
                                   Zone zone, Side side, const PaceFilter& filter, AggMode mode,
                                   int workers) {
    SeasonPairResult result;
    result.season_a = season_a;
    result.season_b = season_b;
    result.zone = zone;
    result.side = side;

    auto rows_for = [&](const std::string& season) {
        PaceFilter f = filter;
        f.season = season;
        return team_zonal(log, zonal_seqs, f, mode, false, workers);
    };
    const TeamZonalResult a = rows_for(season_a);
    const TeamZonalResult b = rows_for(season_b);

    auto pct_of = [&](const TeamZonalResult& r, const std::string& team) -> std::optional<double> {
        for (const auto& row : r.rows)
            if (row.team == team && row.zone == zone && row.side == side) return row.vs_league.pct_t;
        return std::nullopt;
    };

    std::set<std::string> teams;
    for (const auto& row : a.rows) teams.insert(row.team);
    for (const auto& row : b.rows) teams.insert(row.team);

    std::vector<double> xs, ys;
    for (const std::string& team : teams) {
        SeasonPairRow row;
        row.team = team;
        row.pct_a = pct_of(a, team);
        row.pct_b = pct_of(b, team);
        if (row.pct_a && row.pct_b) {
            xs.push_back(*row.pct_a);
            ys.push_back(*row.pct_b);
        }
        result.rows.push_back(std::move(row));
    }
    result.pearson_r = pearson(xs, ys);
    return result;
}

void write_season_pairs_csv(const SeasonPairResult& r, std::ostream& out) {
    out << "# zone=" << to_string(r.zone) << " side=" << to_string(r.side)
        << " pearson_r=" << format_double(r.pearson_r) << '\n';
    csv::Writer w(out);
    w.field("team").field("pct_t_" + r.season_a).field("pct_t_" + r.season_b);
    w.end_row();
    for (const auto& row : r.rows) {
        w.field(row.team).field(row.pct_a).field(row.pct_b);
        w.end_row();
    }
}

} // namespace pace

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pace/heatmap_svg.hpp"
#include "pace/metrics.hpp"
#include "pace/polygrid.hpp"

namespace pace {

enum class Side { attacking, defending };

const char* to_string(Side s);

struct TeamZonalRow {
    std::string team;
    Zone zone = Zone::NZ;
    Side side = Side::attacking;
    SpeedVector sv;
    RelativeSpeed vs_league;
};

struct TeamZonalResult {
    std::vector<TeamZonalRow> rows;                 // sorted by (team, zone, side)
    std::map<std::optional<Zone>, SpeedVector> league;  // pooled attacking baseline per zone
};

/// Attacking rows pool a team's own sequences; defending rows pool the
/// opponents' sequences in that team's games. Percentages benchmark
/// against the league attacking pool (optionally excluding the team).
TeamZonalResult team_zonal(const EventLog& log, const std::vector<PossessionSequence>& zonal_seqs,
                           const PaceFilter& filter, AggMode mode = AggMode::time_weighted,
                           bool leave_one_out = false, int workers = 1);

void write_team_zonal_csv(const TeamZonalResult& r, AggMode mode, std::ostream& out);
void write_team_zonal_json(const TeamZonalResult& r, AggMode mode, std::ostream& out);

struct TeamGridResult {
    Polygrid team_grid;
    Polygrid league_grid;
    SpeedGrid team_speed;     // exposure-masked
    SpeedGrid differential;   // smooth(team) - smooth(league)
};

/// Polygrids in the attacking frame (standard termination sequences).
/// Defending grids accumulate the opponents' samples rotated 180
/// degrees so the subject team's DZ stays on the left; the league
/// baseline is rotated the same way.
TeamGridResult team_polygrid(const EventLog& log, const std::vector<PossessionSequence>& seqs,
                             const RinkSpec& spec, const std::string& team, Side side,
                             const PaceFilter& filter, double tau_s = 60.0, double sigma = 0.5,
                             AllocMode alloc = AllocMode::equal_split, int workers = 1);

struct SeasonPairRow {
    std::string team;
    std::optional<double> pct_a;  // vs-league percent in season A
    std::optional<double> pct_b;
};

struct SeasonPairResult {
    std::string season_a, season_b;
    Zone zone = Zone::NZ;
    Side side = Side::attacking;
    std::vector<SeasonPairRow> rows;
    double pearson_r = 0;  // over teams with both seasons defined
};

/// Season-over-season repeatability of vs-league total speed.
SeasonPairResult team_season_pairs(const EventLog& log,
                                   const std::vector<PossessionSequence>& zonal_seqs,
                                   const std::string& season_a, const std::string& season_b,
                                   Zone zone, Side side, const PaceFilter& filter,
                                   AggMode mode = AggMode::time_weighted, int workers = 1);

void write_season_pairs_csv(const SeasonPairResult& r, std::ostream& out);

} // namespace pace

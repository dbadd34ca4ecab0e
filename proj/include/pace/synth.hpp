#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pace/events.hpp"
#include "pace/ingest.hpp"
#include "pace/metrics.hpp"
#include "pace/polygrid.hpp"
#include "pace/rink.hpp"

namespace pace {

struct TeamGenConfig {
    std::string id;
    double mult_dz = 1.0;
    double mult_nz = 1.0;
    double mult_oz = 1.0;

    double mult(Zone z) const {
        switch (z) {
            case Zone::DZ: return mult_dz;
            case Zone::NZ: return mult_nz;
            case Zone::OZ: return mult_oz;
        }
        return 1.0;
    }
};

struct GenConfig {
    std::uint64_t seed = 1;
    int n_games = 10;
    std::vector<TeamGenConfig> teams;  // empty -> four neutral teams
    std::string league = "SYN";
    std::string season = "2026-27";
    RinkSpec rink = nhl_rink();

    // Transition speed: zone baseline x team multiplier x lognormal jitter.
    double base_dz = 18.0;
    double base_nz = 22.0;
    double base_oz = 16.0;
    double speed_sigma = 0.15;

    // Possession flow.
    double mean_run_events = 8.0;
    double shot_rate = 0.45;
    double midrun_shot_rate = 0.08;  // blocked shot, attacking team recovers
    double stoppage_rate = 0.5;
    double failed_reception_rate = 0.06;
    double failed_reception_offset = 0.20;
    double deflected_rate = 0.05;
    double on_goal_rate = 0.65;
    double goal_base = 0.05;
    double goal_pace_coupling = 0.12;
    double dump_in_rate = 0.25;
    std::vector<double> entry_mix;  // weights over the nine controlled entry types

    // Clock and personnel.
    int periods = 3;
    double period_s = 1200.0;
    double inter_run_gap_s = 4.0;
    int pp_per_period = 1;
    double pp_length_s = 120.0;
    double shift_len_f = 45.0;
    double shift_len_d = 60.0;

    // Ledger options.
    bool ledger_cells = false;
    int cell_oracle_points = 10000;

    double base(Zone z) const {
        switch (z) {
            case Zone::DZ: return base_dz;
            case Zone::NZ: return base_nz;
            case Zone::OZ: return base_oz;
        }
        return base_nz;
    }

    void validate() const;  // throws std::invalid_argument when infeasible
};

/// Independently computed expectation for one pipeline pace sample.
struct LedgerSample {
    std::string game_id;
    std::string seq_id;
    std::string from_event;
    std::string to_event;
    std::string team;
    std::optional<std::string> from_player;
    std::optional<std::string> to_player;
    Manpower manpower;
    int period = 1;
    Zone zone = Zone::NZ;  // zonal attribution: zone of the destination event
    double d_total = 0, d_ew = 0, d_ns = 0, d_n = 0, dt = 0;
    double t_to = 0;
    std::vector<CellShare> cells;  // supersampled traversal, when enabled
};

struct TruthLedger {
    std::string rng_name = "mt19937_64";
    std::uint64_t seed = 0;
    std::string league;
    std::string season;
    // Grouped by game in sorted-game order, chronological within a game,
    // matching the pipeline's canonical merge order.
    std::vector<LedgerSample> samples;
    std::map<GroupKey, SpeedVector> expected_team_zone_5v5;
    std::map<GroupKey, SpeedVector> expected_zone_5v5;

    /// Replays the samples with per-game partials merged in game order
    /// (the pipeline's arithmetic path).
    GroupedSpeed expected_groups(const KeyDims& dims, std::optional<Manpower> manpower) const;
};

struct SynthResult {
    EventLog log;  // already normalized
    std::vector<Shift> shifts;
    std::vector<ManpowerInterval> intervals;
    AttackTable attack;
    TruthLedger ledger;
    GenConfig cfg;
};

/// Deterministic for a given seed; single-threaded by design.
SynthResult generate(const GenConfig& cfg);

/// Writes events.csv (raw arena coordinates), attack.csv, shifts.csv,
/// manpower.csv and ledger.jsonl into dir.
void write_dataset(const SynthResult& result, const std::string& dir);

/// Dense supersampling traversal oracle: samples points along the
/// segment, skipping points within tol of a cell boundary. Independent
/// of the production traversal.
std::vector<std::int32_t> supersample_traverse(NormalizedPoint a, NormalizedPoint b,
                                               const Polygrid& grid, int n_points = 10000,
                                               double tol = 1e-9);

} // namespace pace

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pace/events.hpp"
#include "pace/metrics.hpp"
#include "pace/sequencer.hpp"

namespace pace {

/// Fixed danger-class mapping over the ten entry types; empty for
/// anything else (unclassified controlled combinations, "other").
std::string danger_class_for(const std::string& entry_type);

/// "a-on-d" for controlled entries, "dump-in" otherwise; a controlled
/// entry with no skaters recorded on either side is "other".
std::string entry_type_key(const EntryAttrs& attrs);

struct EntryTypeRow {
    std::string entry_type;
    std::string danger_class;
    std::uint64_t n = 0;
    double shot_after_pct = 0;   // entries with an on-goal shot inside the window
    double shooting_pct = 0;     // goals / on-goal shots inside the windows
    std::optional<double> preceding_phi_t;  // entry-weighted mean
};

struct EntryClassRow {
    std::string danger_class;
    std::uint64_t n = 0;
    std::optional<double> preceding_phi_t;
};

struct EntryTableResult {
    std::vector<EntryTypeRow> by_type;
    std::vector<EntryClassRow> by_class;
};

EntryTableResult entry_table(const EventLog& log, const std::vector<PossessionSequence>& seqs,
                             double window_s = 5.0,
                             std::optional<Manpower> manpower = Manpower{5, 5});

void write_entry_table_csv(const EntryTableResult& r, std::ostream& out);
void write_entry_table_json(const EntryTableResult& r, std::ostream& out);

struct QuintileRow {
    int quintile = 0;
    std::uint64_t n = 0;
    std::uint64_t goals = 0;
    double mean_preshot_phi_t = 0;
    double true_shooting_pct = 0;      // goals / attempts
    double mean_shot_distance_ft = 0;  // attr when present, else distance to the goal point
};

/// Throws std::runtime_error with fewer than five eligible shots.
std::vector<QuintileRow> preshot_quintiles(const EventLog& log,
                                           const std::vector<PossessionSequence>& seqs,
                                           const RinkSpec& rink, double window_s = 5.0,
                                           std::optional<Manpower> manpower = Manpower{5, 5});

void write_quintiles_csv(const std::vector<QuintileRow>& rows, std::ostream& out);

struct PassSpeedRow {
    PassType pass_type = PassType::other;
    bool success = true;
    std::uint64_t n = 0;
    double mean_speed = 0;  // ft/s, straight-line flight speed
};

struct PassSpeedResult {
    std::vector<PassSpeedRow> rows;
    std::uint64_t dropped_nonpositive_dt = 0;
    std::uint64_t unlinked = 0;
};

PassSpeedResult pass_reception_speeds(const EventLog& log,
                                      std::optional<Manpower> manpower = Manpower{5, 5});

void write_pass_speeds_csv(const PassSpeedResult& r, std::ostream& out);

enum class TendencyGroupBy { league, season, period };

struct TendencyRow {
    std::string group;
    std::uint64_t games = 0;
    double dz_passes_pg = 0, nz_passes_pg = 0, oz_passes_pg = 0;
    double dz_time_min_pg = 0, nz_time_min_pg = 0, oz_time_min_pg = 0;
    double ew_gt10_per60 = 0, ew_gt15_per60 = 0;  // NZ-to-NZ successful passes, per 60 min 5v5
    double dz_controlled_exits_pg = 0, dz_d2d_pg = 0, dz_stretch_pg = 0;
    double odd_man_rushes_pg = 0;
};

std::vector<TendencyRow> tendency_counters(const EventLog& log,
                                           const std::vector<PossessionSequence>& zonal_seqs,
                                           const std::vector<ManpowerInterval>& intervals,
                                           TendencyGroupBy group_by, const RinkSpec& rink);

void write_tendencies_csv(const std::vector<TendencyRow>& rows, std::ostream& out);

} // namespace pace

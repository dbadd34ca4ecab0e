#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "pace/events.hpp"
#include "pace/metrics.hpp"
#include "pace/sequencer.hpp"

namespace pace {

/// Shift lookup: on-ice tests, lineups, positions, rosters.
class ShiftIndex {
public:
    explicit ShiftIndex(const std::vector<Shift>& shifts);

    bool on_ice(const std::string& game, const std::string& player, int period, double t) const;
    bool in_lineup(const std::string& game, const std::string& player) const;
    const std::vector<std::string>& roster(const std::string& game, const std::string& team) const;
    std::optional<Position> position(const std::string& player) const;

private:
    // (game, player) -> per-period sorted [start, end) spans
    std::map<std::pair<std::string, std::string>, std::map<int, std::vector<std::pair<double, double>>>>
        spans_;
    std::map<std::pair<std::string, std::string>, std::vector<std::string>> rosters_;
    std::map<std::string, Position> positions_;
    std::vector<std::string> empty_;
};

/// 5v5 time on ice in minutes per (team, player).
std::map<std::pair<std::string, std::string>, double> toi_5v5_minutes(
    const std::vector<Shift>& shifts, const std::vector<ManpowerInterval>& intervals);

using PlayerZoneKey = std::tuple<std::string, std::string, Zone>;  // (team, player, zone)

struct IndividualPaceResult {
    std::map<PlayerZoneKey, SpeedVector> attributed;
    // (team, position, zone) pool, the adjustment baseline
    std::map<std::tuple<std::string, Position, Zone>, SpeedVector> baseline;
    double unattributed_d = 0;
    double unattributed_dt = 0;
};

/// Splits each transition's distance and time equally between the two
/// endpoint players (fully to one player when both endpoints are theirs).
/// Endpoints without a player contribute only the attributable half.
IndividualPaceResult individual_pace(const EventLog& log,
                                     const std::vector<PossessionSequence>& zonal_seqs,
                                     const PaceFilter& filter, const ShiftIndex& shifts,
                                     int workers = 1);

enum class WowyWeighting { per_sequence, time_weighted };

struct WowySplit {
    // Unweighted means of per-sequence speeds (phi_t, phi_ew, phi_ns, phi_n).
    std::array<double, 4> sum_phi{};
    std::uint64_t n_defined = 0;
    std::uint64_t count = 0;  // all classified sequences, defined speed or not
    SpeedVector pooled;       // time-weighted alternative

    std::optional<double> mean(int comp, WowyWeighting w) const;
};

struct WowyCell {
    WowySplit with_player;
    WowySplit without_player;
    std::uint64_t excluded = 0;  // partial shift overlap

    std::optional<double> pct(int comp, WowyWeighting w = WowyWeighting::per_sequence) const;
};

struct WowyResult {
    std::map<PlayerZoneKey, WowyCell> cells;
};

/// A sequence counts "with" when the player is on ice at every event,
/// "without" when on ice at none (only in games they dressed for);
/// partial overlaps are excluded from both.
WowyResult wowy_all(const EventLog& log, const std::vector<PossessionSequence>& zonal_seqs,
                    const PaceFilter& filter, const ShiftIndex& shifts, int workers = 1);

struct PlayerTableRow {
    std::string team, player;
    Position position = Position::F;
    double toi_min = 0;
    std::array<std::optional<double>, 4> adjusted_pct;  // vs team+position+zone baseline
    std::array<std::optional<double>, 4> wowy_pct;
};

struct PlayerTables {
    std::map<Zone, std::vector<PlayerTableRow>> by_zone;  // sorted by wowy phi_t % desc
};

PlayerTables build_player_tables(const EventLog& log,
                                 const std::vector<PossessionSequence>& zonal_seqs,
                                 const PaceFilter& filter, const std::vector<Shift>& shifts,
                                 const std::vector<ManpowerInterval>& intervals,
                                 double min_toi_min = 200.0,
                                 WowyWeighting weighting = WowyWeighting::per_sequence,
                                 AggMode mode = AggMode::time_weighted, int workers = 1);

void write_player_table_csv(const std::vector<PlayerTableRow>& rows, std::ostream& out);
void write_player_table_json(const std::vector<PlayerTableRow>& rows, std::ostream& out);

struct WowyPlayerRow {
    Zone zone = Zone::NZ;
    std::array<std::optional<double>, 4> with_phi, without_phi, pct;
    std::uint64_t n_with = 0, n_without = 0, n_excluded = 0;
};

std::vector<WowyPlayerRow> wowy_player(const EventLog& log,
                                       const std::vector<PossessionSequence>& zonal_seqs,
                                       const PaceFilter& filter, const ShiftIndex& shifts,
                                       const std::string& team, const std::string& player,
                                       WowyWeighting weighting = WowyWeighting::per_sequence,
                                       int workers = 1);

void write_wowy_csv(const std::vector<WowyPlayerRow>& rows, std::ostream& out);

} // namespace pace

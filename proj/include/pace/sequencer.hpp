#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "pace/events.hpp"
#include "pace/rink.hpp"

namespace pace {

enum class TerminationReason {
    possession_change,
    manpower_change,
    stoppage,
    zone_transition,
    end_of_data,
};

const char* to_string(TerminationReason r);

/// Maximal run of same-team possession events under one termination rule.
/// Events are indices into the source log, in chronological order. In
/// zonal mode (zone set, reason possibly zone_transition) the first event
/// may be shared with the preceding sequence of the same parent.
struct PossessionSequence {
    std::string team_id;
    std::optional<Zone> zone;
    TerminationReason reason = TerminationReason::end_of_data;
    Manpower manpower;
    int period = 1;
    std::uint32_t game_index = 0;                 // into EventLog::games
    std::uint32_t parent = UINT32_MAX;            // zonal mode: index of the standard parent
    std::vector<std::uint32_t> event_idx;
};

/// Distance components and elapsed time of one transition between
/// successive possession events.
struct PaceSample {
    double d_total = 0;
    double d_ew = 0;
    double d_ns = 0;
    double d_n = 0;
    double dt = 0;
    std::uint32_t from_idx = 0;
    std::uint32_t to_idx = 0;
    NormalizedPoint from_pt;
    NormalizedPoint to_pt;
};

PaceSample make_pace_sample(const Event& from, const Event& to,
                            std::uint32_t from_idx, std::uint32_t to_idx);

struct SampleDiagnostics {
    std::uint64_t dropped_nonpositive_dt = 0;
};

struct SequencerConfig {
    std::set<EventType> possession_types = {EventType::pass, EventType::reception,
                                            EventType::puck_recovery, EventType::shot};
};

/// Stoppage-class events cut sequences: stoppage, faceoff, penalty.
bool is_stoppage_type(EventType t);

/// Builds standard-rule sequences. Games are processed independently
/// (in parallel when workers > 1) and concatenated in sorted game order,
/// so the result does not depend on scheduling.
std::vector<PossessionSequence> build_sequences(const EventLog& log,
                                                const SequencerConfig& cfg = {},
                                                int workers = 1);

/// Transitions of one sequence. Under standard termination the final
/// event contributes no transition; a zonal sequence closed by a zone
/// transition keeps all of its transitions (the crossing transition was
/// reassigned forward to it by split_by_zone). Transitions with dt <= 0
/// are dropped and tallied.
std::vector<PaceSample> pace_samples(const PossessionSequence& seq, const EventLog& log,
                                     SampleDiagnostics* diag = nullptr);

/// Re-segments standard sequences at zone changes. The boundary event
/// closes the old zone's sequence and seeds the new one, assigning the
/// crossing transition to the destination zone.
std::vector<PossessionSequence> split_by_zone(const std::vector<PossessionSequence>& seqs,
                                              const EventLog& log, const RinkSpec& spec);

/// Debug export: one JSON object per sequence.
void write_sequences_jsonl(const std::vector<PossessionSequence>& seqs, const EventLog& log,
                           std::ostream& out);

} // namespace pace

#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "pace/events.hpp"
#include "pace/rink.hpp"

namespace pace {

/// Attack direction per (game, team, period): +1 when the team attacks
/// toward +x in raw rink coordinates.
struct AttackTable {
    std::map<std::tuple<std::string, std::string, int>, int> sign;

    int sign_for(const std::string& game, const std::string& team, int period) const;
    void set(const std::string& game, const std::string& team, int period, int s);
};

AttackTable parse_attack_csv(std::istream& in);
void write_attack_csv(const AttackTable& table, std::ostream& out);

/// Column order of the events CSV; same names are used as JSON-lines keys.
extern const char* const kEventCsvHeader;

EventLog parse_events_csv(std::istream& in, const RinkSpec& rink, const AttackTable& attack);
EventLog parse_events_jsonl(std::istream& in, const RinkSpec& rink, const AttackTable& attack);

/// Reads .csv or .jsonl based on the file extension.
EventLog parse_events_file(const std::string& path, const RinkSpec& rink, const AttackTable& attack);

/// Writes the normalized log; re-parsing with an all-+1 attack table
/// reproduces it exactly.
void serialize_events_csv(const EventLog& log, std::ostream& out);
void serialize_events_jsonl(const EventLog& log, std::ostream& out);

std::vector<Shift> parse_shifts_csv(std::istream& in);
void write_shifts_csv(const std::vector<Shift>& shifts, std::ostream& out);
std::vector<Shift> parse_shifts_file(const std::string& path);

std::vector<ManpowerInterval> parse_manpower_csv(std::istream& in);
void write_manpower_csv(const std::vector<ManpowerInterval>& intervals, std::ostream& out);
std::vector<ManpowerInterval> parse_manpower_file(const std::string& path);

enum class FindingKind {
    timestamp_order,
    manpower_mismatch,
    dangling_pass_link,
    missing_attrs,
    shift_overlap,
    interval_gap,
};

const char* to_string(FindingKind k);

struct Finding {
    FindingKind kind;
    std::string game_id;
    std::string event_id;
    std::string detail;
};

struct ValidationReport {
    std::vector<Finding> findings;
    bool empty() const { return findings.empty(); }
    std::string summary() const;
};

ValidationReport validate(const EventLog& log, const std::vector<Shift>& shifts,
                          const std::vector<ManpowerInterval>& intervals);

} // namespace pace

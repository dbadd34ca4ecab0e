#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pace/events.hpp"
#include "pace/sequencer.hpp"

namespace pace {

enum class AggMode { time_weighted, mean_of_speeds };

/// Mergeable speed accumulator. Time-weighted speeds divide pooled
/// distance by pooled time; the mean-of-speeds alternative averages
/// per-transition speeds.
struct SpeedVector {
    double sum_d_total = 0, sum_d_ew = 0, sum_d_ns = 0, sum_d_n = 0;
    double sum_dt = 0;
    double sum_v_total = 0, sum_v_ew = 0, sum_v_ns = 0, sum_v_n = 0;
    std::uint64_t n = 0;

    void add(const PaceSample& s);
    void merge(const SpeedVector& o);

    bool defined(AggMode mode = AggMode::time_weighted) const;
    std::optional<double> phi_t(AggMode mode = AggMode::time_weighted) const;
    std::optional<double> phi_ew(AggMode mode = AggMode::time_weighted) const;
    std::optional<double> phi_ns(AggMode mode = AggMode::time_weighted) const;
    std::optional<double> phi_n(AggMode mode = AggMode::time_weighted) const;

    bool operator==(const SpeedVector&) const = default;
};

/// Percent differences vs a baseline, per component; a component is
/// absent when the baseline speed is zero or undefined.
struct RelativeSpeed {
    std::optional<double> pct_t, pct_ew, pct_ns, pct_n;
};

RelativeSpeed relative_to(const SpeedVector& a, const SpeedVector& baseline,
                          AggMode mode = AggMode::time_weighted);

/// Grouping key: any subset of the analysis dimensions.
struct GroupKey {
    std::optional<std::string> league, season, team, opponent, player, position;
    std::optional<Zone> zone;
    std::optional<int> period;
    std::optional<Manpower> manpower;

    auto operator<=>(const GroupKey&) const = default;
    std::string label() const;
};

using GroupedSpeed = std::map<GroupKey, SpeedVector>;

void merge_grouped(GroupedSpeed& into, const GroupedSpeed& from);

/// Dimensions to key samples by.
struct KeyDims {
    bool league = false, season = false, team = false, opponent = false;
    bool zone = false, period = false, manpower = false;
};

/// Sequence-level filter; manpower is compared on the attacking team's
/// perspective pair.
struct PaceFilter {
    std::optional<Manpower> manpower;
    std::optional<std::string> league, season, team, opponent;
    std::optional<int> period;

    bool accepts(const PossessionSequence& seq, const EventLog& log) const;
};

/// Groups every pace sample of the accepted sequences. Games are
/// processed in parallel shards and merged in sorted-game order, so the
/// result is identical for any worker count.
GroupedSpeed aggregate_sequences(const EventLog& log, const std::vector<PossessionSequence>& seqs,
                                 const KeyDims& dims, const PaceFilter& filter, int workers = 1,
                                 SampleDiagnostics* diag = nullptr);

void write_grouped_csv(const GroupedSpeed& grouped, const KeyDims& dims, AggMode mode,
                       std::ostream& out);
void write_grouped_json(const GroupedSpeed& grouped, const KeyDims& dims, AggMode mode,
                        std::ostream& out);

double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace pace

#include "pace/sequencer.hpp"

#include <cmath>
#include <ostream>

#include <json.hpp>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace pace {

const char* to_string(TerminationReason r) {
    switch (r) {
        case TerminationReason::possession_change: return "possession_change";
        case TerminationReason::manpower_change: return "manpower_change";
        case TerminationReason::stoppage: return "stoppage";
        case TerminationReason::zone_transition: return "zone_transition";
        case TerminationReason::end_of_data: return "end_of_data";
    }
    return "?";
}

bool is_stoppage_type(EventType t) {
    return t == EventType::stoppage || t == EventType::faceoff || t == EventType::penalty;
}

PaceSample make_pace_sample(const Event& from, const Event& to,
                            std::uint32_t from_idx, std::uint32_t to_idx) {
    PaceSample s;
    const double dx = to.point.x_north - from.point.x_north;
    const double dy = to.point.y_east - from.point.y_east;
    s.d_ew = std::fabs(dy);
    s.d_ns = std::fabs(dx);
    s.d_n = std::fmax(dx, 0.0);
    // sqrt may round a hair below the longer leg; the clamp keeps
    // d_ns <= d_total and d_ew <= d_total exact.
    s.d_total = std::fmax(std::sqrt(dx * dx + dy * dy), std::fmax(s.d_ew, s.d_ns));
    s.dt = to.t_s - from.t_s;
    s.from_idx = from_idx;
    s.to_idx = to_idx;
    s.from_pt = from.point;
    s.to_pt = to.point;
    return s;
}

namespace {

bool is_possession_event(const Event& e, const SequencerConfig& cfg) {
    return cfg.possession_types.count(e.type) > 0 && e.possession_team &&
           *e.possession_team == e.team_id;
}

std::vector<PossessionSequence> sequence_game(const EventLog& log, std::uint32_t game_index,
                                              const SequencerConfig& cfg) {
    std::vector<PossessionSequence> out;
    const auto& order = log.game_events(log.games[game_index]);

    PossessionSequence cur;
    bool open = false;

    auto close = [&](TerminationReason reason) {
        if (!open) return;
        cur.reason = reason;
        out.push_back(std::move(cur));
        cur = PossessionSequence{};
        open = false;
    };
    auto start = [&](const Event& e, std::uint32_t idx) {
        cur.team_id = e.team_id;
        cur.manpower = e.manpower;
        cur.period = e.period;
        cur.game_index = game_index;
        cur.event_idx = {idx};
        open = true;
    };

    for (std::uint32_t idx : order) {
        const Event& e = log.events[idx];
        if (open && e.period != cur.period) close(TerminationReason::stoppage);
        if (is_stoppage_type(e.type)) {
            close(TerminationReason::stoppage);
            continue;
        }
        if (!is_possession_event(e, cfg)) continue;
        if (!open) {
            start(e, idx);
        } else if (e.team_id != cur.team_id) {
            close(TerminationReason::possession_change);
            start(e, idx);
        } else if (e.manpower != cur.manpower) {
            close(TerminationReason::manpower_change);
            start(e, idx);
        } else {
            cur.event_idx.push_back(idx);
        }
    }
    close(TerminationReason::end_of_data);
    return out;
}

} // namespace

std::vector<PossessionSequence> build_sequences(const EventLog& log, const SequencerConfig& cfg,
                                                int workers) {
    const int n_games = static_cast<int>(log.games.size());
    std::vector<std::vector<PossessionSequence>> per_game(n_games);
#if defined(_OPENMP)
    if (workers < 1) workers = omp_get_max_threads();
#else
    workers = 1;
#endif
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (int g = 0; g < n_games; ++g)
        per_game[g] = sequence_game(log, static_cast<std::uint32_t>(g), cfg);

    std::vector<PossessionSequence> out;
    for (auto& v : per_game)
        for (auto& s : v) out.push_back(std::move(s));
    return out;
}

std::vector<PaceSample> pace_samples(const PossessionSequence& seq, const EventLog& log,
                                     SampleDiagnostics* diag) {
    std::vector<PaceSample> samples;
    const auto n = seq.event_idx.size();
    if (n < 2) return samples;
    // The transition into the final event is excluded unless that event
    // seeds the next zonal sequence (reason zone_transition), in which
    // case the exclusion happens at the parent's true end instead.
    const std::size_t count = seq.reason == TerminationReason::zone_transition ? n - 1 : n - 2;
    samples.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto a = seq.event_idx[i];
        const auto b = seq.event_idx[i + 1];
        PaceSample s = make_pace_sample(log.events[a], log.events[b], a, b);
        if (s.dt <= 0.0) {
            if (diag) ++diag->dropped_nonpositive_dt;
            continue;
        }
        samples.push_back(s);
    }
    return samples;
}

std::vector<PossessionSequence> split_by_zone(const std::vector<PossessionSequence>& seqs,
                                              const EventLog& log, const RinkSpec& spec) {
    std::vector<PossessionSequence> out;
    for (std::uint32_t p = 0; p < seqs.size(); ++p) {
        const PossessionSequence& parent = seqs[p];
        const auto& ev = parent.event_idx;
        std::size_t start = 0;
        auto emit = [&](std::size_t first, std::size_t last, TerminationReason reason) {
            PossessionSequence z;
            z.team_id = parent.team_id;
            z.reason = reason;
            z.manpower = parent.manpower;
            z.period = parent.period;
            z.game_index = parent.game_index;
            z.parent = p;
            z.event_idx.assign(ev.begin() + first, ev.begin() + last + 1);
            // The last event always lies in the sequence's own zone; a
            // seeded first event may still belong to the previous zone.
            z.zone = zone_of(log.events[z.event_idx.back()].point, spec);
            out.push_back(std::move(z));
        };
        for (std::size_t k = 0; k + 1 < ev.size(); ++k) {
            Zone z1 = zone_of(log.events[ev[k]].point, spec);
            Zone z2 = zone_of(log.events[ev[k + 1]].point, spec);
            if (z1 != z2) {
                emit(start, k, TerminationReason::zone_transition);
                start = k;  // boundary event seeds the next sequence
            }
        }
        emit(start, ev.size() - 1, parent.reason);
    }
    return out;
}

void write_sequences_jsonl(const std::vector<PossessionSequence>& seqs, const EventLog& log,
                           std::ostream& out) {
    for (std::size_t i = 0; i < seqs.size(); ++i) {
        const auto& s = seqs[i];
        nlohmann::json j;
        j["sequence_id"] = log.games[s.game_index] + "-" + std::to_string(i);
        j["game_id"] = log.games[s.game_index];
        j["team_id"] = s.team_id;
        if (s.zone) j["zone"] = to_string(*s.zone);
        j["reason"] = to_string(s.reason);
        j["manpower"] = to_string(s.manpower);
        auto& ids = j["event_ids"] = nlohmann::json::array();
        for (auto idx : s.event_idx) ids.push_back(log.events[idx].event_id);
        out << j.dump() << '\n';
    }
}

} // namespace pace

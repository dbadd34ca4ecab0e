#include "pace/reference.hpp"

#include <cmath>

namespace pace::reference {

std::vector<PossessionSequence> build_sequences(const EventLog& log, const SequencerConfig& cfg) {
    return pace::build_sequences(log, cfg, 1);
}

GroupedSpeed aggregate_sequences(const EventLog& log, const std::vector<PossessionSequence>& seqs,
                                 const KeyDims& dims, const PaceFilter& filter) {
    GroupedSpeed out;
    for (const PossessionSequence& seq : seqs) {
        if (!filter.accepts(seq, log)) continue;
        GroupKey k;
        const Event& first = log.events[seq.event_idx.front()];
        if (dims.league) k.league = first.league;
        if (dims.season) k.season = first.season;
        if (dims.team) k.team = seq.team_id;
        if (dims.opponent) k.opponent = log.opponent_of(first.game_id, seq.team_id);
        if (dims.zone) k.zone = seq.zone;
        if (dims.period) k.period = seq.period;
        if (dims.manpower) k.manpower = seq.manpower;
        SpeedVector& sv = out[k];
        for (const PaceSample& s : pace_samples(seq, log)) sv.add(s);
    }
    return out;
}

Polygrid accumulate_sequences(const EventLog& log, const std::vector<PossessionSequence>& seqs,
                              const RinkSpec& spec, const PaceFilter& filter, bool mirror,
                              AllocMode mode) {
    Polygrid grid = build_grid(spec);
    for (const PossessionSequence& seq : seqs) {
        if (!filter.accepts(seq, log)) continue;
        for (PaceSample s : pace_samples(seq, log)) {
            if (mirror) {
                s.from_pt = {-s.from_pt.x_north, -s.from_pt.y_east};
                s.to_pt = {-s.to_pt.x_north, -s.to_pt.y_east};
            }
            accumulate(grid, s, mode);
        }
    }
    return grid;
}

SpeedGrid smooth(const SpeedGrid& g, double sigma_cells) {
    SpeedGrid out = g;
    for (int row = 0; row < g.n_rows; ++row) {
        for (int col = 0; col < g.n_cols; ++col) {
            const int c = g.cell(col, row);
            if (!g.defined[c]) continue;
            double num = 0, den = 0;
            for (int nr = row - 1; nr <= row + 1; ++nr) {
                for (int nc = col - 1; nc <= col + 1; ++nc) {
                    if (nc < 0 || nc >= g.n_cols || nr < 0 || nr >= g.n_rows) continue;
                    if (!g.defined[g.cell(nc, nr)]) continue;
                    const double dd = (nc - col) * (nc - col) + (nr - row) * (nr - row);
                    const double w = std::exp(-dd / (2.0 * sigma_cells * sigma_cells));
                    num += w * g.value[g.cell(nc, nr)];
                    den += w;
                }
            }
            out.value[c] = num / den;
        }
    }
    return out;
}

} // namespace pace::reference

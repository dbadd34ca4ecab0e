#include "pace/metrics.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include <json.hpp>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include "pace/csv.hpp"

namespace pace {

void SpeedVector::add(const PaceSample& s) {
    sum_d_total += s.d_total;
    sum_d_ew += s.d_ew;
    sum_d_ns += s.d_ns;
    sum_d_n += s.d_n;
    sum_dt += s.dt;
    sum_v_total += s.d_total / s.dt;
    sum_v_ew += s.d_ew / s.dt;
    sum_v_ns += s.d_ns / s.dt;
    sum_v_n += s.d_n / s.dt;
    ++n;
}

void SpeedVector::merge(const SpeedVector& o) {
    sum_d_total += o.sum_d_total;
    sum_d_ew += o.sum_d_ew;
    sum_d_ns += o.sum_d_ns;
    sum_d_n += o.sum_d_n;
    sum_dt += o.sum_dt;
    sum_v_total += o.sum_v_total;
    sum_v_ew += o.sum_v_ew;
    sum_v_ns += o.sum_v_ns;
    sum_v_n += o.sum_v_n;
    n += o.n;
}

bool SpeedVector::defined(AggMode mode) const {
    return mode == AggMode::time_weighted ? sum_dt > 0.0 : n > 0;
}

namespace {

std::optional<double> ratio(double num, double den, bool ok) {
    if (!ok) return std::nullopt;
    return num / den;
}

} // namespace

std::optional<double> SpeedVector::phi_t(AggMode mode) const {
    return mode == AggMode::time_weighted ? ratio(sum_d_total, sum_dt, sum_dt > 0)
                                          : ratio(sum_v_total, double(n), n > 0);
}
std::optional<double> SpeedVector::phi_ew(AggMode mode) const {
    return mode == AggMode::time_weighted ? ratio(sum_d_ew, sum_dt, sum_dt > 0)
                                          : ratio(sum_v_ew, double(n), n > 0);
}
std::optional<double> SpeedVector::phi_ns(AggMode mode) const {
    return mode == AggMode::time_weighted ? ratio(sum_d_ns, sum_dt, sum_dt > 0)
                                          : ratio(sum_v_ns, double(n), n > 0);
}
std::optional<double> SpeedVector::phi_n(AggMode mode) const {
    return mode == AggMode::time_weighted ? ratio(sum_d_n, sum_dt, sum_dt > 0)
                                          : ratio(sum_v_n, double(n), n > 0);
}

RelativeSpeed relative_to(const SpeedVector& a, const SpeedVector& baseline, AggMode mode) {
    auto pct = [&](std::optional<double> x, std::optional<double> base) -> std::optional<double> {
        if (!x || !base || *base == 0.0) return std::nullopt;
        return 100.0 * (*x - *base) / *base;
    };
    RelativeSpeed r;
    r.pct_t = pct(a.phi_t(mode), baseline.phi_t(mode));
    r.pct_ew = pct(a.phi_ew(mode), baseline.phi_ew(mode));
    r.pct_ns = pct(a.phi_ns(mode), baseline.phi_ns(mode));
    r.pct_n = pct(a.phi_n(mode), baseline.phi_n(mode));
    return r;
}

std::string GroupKey::label() const {
    std::ostringstream out;
    auto put = [&](const char* name, const std::string& v) {
        if (out.tellp() > 0) out << ' ';
        out << name << '=' << v;
    };
    if (league) put("league", *league);
    if (season) put("season", *season);
    if (team) put("team", *team);
    if (opponent) put("opponent", *opponent);
    if (player) put("player", *player);
    if (position) put("position", *position);
    if (zone) put("zone", to_string(*zone));
    if (period) put("period", std::to_string(*period));
    if (manpower) put("manpower", to_string(*manpower));
    if (out.tellp() == 0) return "all";
    return out.str();
}

void merge_grouped(GroupedSpeed& into, const GroupedSpeed& from) {
    for (const auto& [key, sv] : from) into[key].merge(sv);
}

bool PaceFilter::accepts(const PossessionSequence& seq, const EventLog& log) const {
    if (manpower && seq.manpower != *manpower) return false;
    if (period && seq.period != *period) return false;
    if (team && seq.team_id != *team) return false;
    if (opponent || league || season) {
        const Event& e = log.events[seq.event_idx.front()];
        if (opponent && log.opponent_of(e.game_id, seq.team_id) != *opponent) return false;
        if (league && e.league != *league) return false;
        if (season && e.season != *season) return false;
    }
    return true;
}

namespace {

GroupKey key_for(const PossessionSequence& seq, const EventLog& log, const KeyDims& dims) {
    GroupKey k;
    const Event& first = log.events[seq.event_idx.front()];
    if (dims.league) k.league = first.league;
    if (dims.season) k.season = first.season;
    if (dims.team) k.team = seq.team_id;
    if (dims.opponent) k.opponent = log.opponent_of(first.game_id, seq.team_id);
    if (dims.zone) k.zone = seq.zone;
    if (dims.period) k.period = seq.period;
    if (dims.manpower) k.manpower = seq.manpower;
    return k;
}

} // namespace

GroupedSpeed aggregate_sequences(const EventLog& log, const std::vector<PossessionSequence>& seqs,
                                 const KeyDims& dims, const PaceFilter& filter, int workers,
                                 SampleDiagnostics* diag) {
    // Sequences arrive grouped by game (build order); shard on game index.
    const int n_games = static_cast<int>(log.games.size());
    std::vector<std::vector<std::uint32_t>> seq_by_game(n_games);
    for (std::uint32_t i = 0; i < seqs.size(); ++i)
        seq_by_game[seqs[i].game_index].push_back(i);

    std::vector<GroupedSpeed> partial(n_games);
    std::vector<SampleDiagnostics> diags(n_games);
#if defined(_OPENMP)
    if (workers < 1) workers = omp_get_max_threads();
#else
    workers = 1;
#endif
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (int g = 0; g < n_games; ++g) {
        for (std::uint32_t i : seq_by_game[g]) {
            const PossessionSequence& seq = seqs[i];
            if (!filter.accepts(seq, log)) continue;
            GroupKey key = key_for(seq, log, dims);
            SpeedVector& sv = partial[g][key];
            for (const PaceSample& s : pace_samples(seq, log, &diags[g])) sv.add(s);
        }
    }

    GroupedSpeed out;
    for (int g = 0; g < n_games; ++g) {
        merge_grouped(out, partial[g]);
        if (diag) diag->dropped_nonpositive_dt += diags[g].dropped_nonpositive_dt;
    }
    return out;
}

namespace {

std::vector<std::string> key_columns(const KeyDims& dims) {
    std::vector<std::string> cols;
    if (dims.league) cols.push_back("league");
    if (dims.season) cols.push_back("season");
    if (dims.team) cols.push_back("team");
    if (dims.opponent) cols.push_back("opponent");
    if (dims.zone) cols.push_back("zone");
    if (dims.period) cols.push_back("period");
    if (dims.manpower) cols.push_back("manpower");
    return cols;
}

std::vector<std::string> key_values(const GroupKey& k, const KeyDims& dims) {
    std::vector<std::string> vals;
    if (dims.league) vals.push_back(k.league.value_or(""));
    if (dims.season) vals.push_back(k.season.value_or(""));
    if (dims.team) vals.push_back(k.team.value_or(""));
    if (dims.opponent) vals.push_back(k.opponent.value_or(""));
    if (dims.zone) vals.push_back(k.zone ? to_string(*k.zone) : "");
    if (dims.period) vals.push_back(k.period ? std::to_string(*k.period) : "");
    if (dims.manpower) vals.push_back(k.manpower ? to_string(*k.manpower) : "");
    return vals;
}

} // namespace

void write_grouped_csv(const GroupedSpeed& grouped, const KeyDims& dims, AggMode mode,
                       std::ostream& out) {
    csv::Writer w(out);
    for (const auto& col : key_columns(dims)) w.field(col);
    for (const char* col : {"phi_t", "phi_ew", "phi_ns", "phi_n", "sum_d_total", "sum_d_ew",
                            "sum_d_ns", "sum_d_n", "sum_dt", "n_samples"})
        w.field(col);
    w.end_row();
    for (const auto& [key, sv] : grouped) {
        for (const auto& v : key_values(key, dims)) w.field(v);
        w.field(sv.phi_t(mode)).field(sv.phi_ew(mode)).field(sv.phi_ns(mode)).field(sv.phi_n(mode));
        w.field(sv.sum_d_total).field(sv.sum_d_ew).field(sv.sum_d_ns).field(sv.sum_d_n);
        w.field(sv.sum_dt).field(sv.n);
        w.end_row();
    }
}

void write_grouped_json(const GroupedSpeed& grouped, const KeyDims& dims, AggMode mode,
                        std::ostream& out) {
    nlohmann::json rows = nlohmann::json::array();
    auto cols = key_columns(dims);
    for (const auto& [key, sv] : grouped) {
        nlohmann::json row;
        auto vals = key_values(key, dims);
        for (std::size_t i = 0; i < cols.size(); ++i) row[cols[i]] = vals[i];
        auto put = [&](const char* name, std::optional<double> v) {
            if (v) row[name] = *v;
            else row[name] = nullptr;
        };
        put("phi_t", sv.phi_t(mode));
        put("phi_ew", sv.phi_ew(mode));
        put("phi_ns", sv.phi_ns(mode));
        put("phi_n", sv.phi_n(mode));
        row["sum_d_total"] = sv.sum_d_total;
        row["sum_dt"] = sv.sum_dt;
        row["n_samples"] = sv.n;
        rows.push_back(std::move(row));
    }
    out << rows.dump(2) << '\n';
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = xs.size();
    if (n != ys.size() || n < 2) return std::nan("");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0 || syy == 0) return std::nan("");
    return sxy / std::sqrt(sxx * syy);
}

} // namespace pace

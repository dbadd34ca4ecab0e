#include "pace/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "pace/csv.hpp"

namespace pace {

namespace {

// All randomness flows through explicit derivations from mt19937_64 so a
// seed pins the byte stream; <random> distribution objects are avoided
// because their outputs differ across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform01() { return double(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform01(); }
    int uniform_int(int n) { return static_cast<int>(eng_() % std::uint64_t(n)); }
    bool bernoulli(double p) { return uniform01() < p; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Failures before the first success; p = 1 gives 0.
    int geometric(double p) {
        int n = 0;
        while (n < 1000 && !bernoulli(p)) ++n;
        return n;
    }

    int weighted(const std::vector<double>& w) {
        double total = 0;
        for (double x : w) total += x;
        double u = uniform01() * total;
        for (std::size_t i = 0; i < w.size(); ++i) {
            u -= w[i];
            if (u < 0) return static_cast<int>(i);
        }
        return static_cast<int>(w.size()) - 1;
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0;
    bool have_spare_ = false;
};

struct ControlledEntryType {
    int attackers, defenders;
};

constexpr ControlledEntryType kControlledTypes[9] = {
    {1, 0}, {2, 1}, {3, 1}, {3, 2}, {1, 1}, {2, 2}, {3, 3}, {1, 2}, {2, 3},
};

const std::vector<double> kDefaultEntryMix = {0.05, 0.12, 0.05, 0.15, 0.20, 0.18, 0.10, 0.08, 0.07};

Zone zone_calc(double x, double blue) {
    if (x < -blue) return Zone::DZ;
    if (x > blue) return Zone::OZ;
    return Zone::NZ;
}

bool is_defenseman(const std::string& player) {
    return player.find("_D") != std::string::npos;
}

} // namespace

void GenConfig::validate() const {
    if (teams.size() == 1) throw std::invalid_argument("need zero (defaults) or >= 2 teams");
    if (n_games < 1) throw std::invalid_argument("n_games must be >= 1");
    if (base_dz <= 0 || base_nz <= 0 || base_oz <= 0)
        throw std::invalid_argument("zone baseline speeds must be positive");
    for (const auto& t : teams)
        if (t.mult_dz <= 0 || t.mult_nz <= 0 || t.mult_oz <= 0)
            throw std::invalid_argument("team multipliers must be positive");
    if (mean_run_events < 2.0) throw std::invalid_argument("mean_run_events must be >= 2");
    if (periods < 1 || period_s < 120) throw std::invalid_argument("period layout infeasible");
    if (pp_per_period > 0 && pp_length_s + 100.0 > period_s / pp_per_period)
        throw std::invalid_argument("power plays do not fit the period");
    if (!entry_mix.empty() && entry_mix.size() != 9)
        throw std::invalid_argument("entry_mix needs 9 weights");
    double total = 0;
    for (double w : entry_mix) {
        if (w < 0) throw std::invalid_argument("entry_mix weights must be non-negative");
        total += w;
    }
    if (!entry_mix.empty() && total <= 0)
        throw std::invalid_argument("entry_mix weights must not all be zero");
    rink.check();
}

std::vector<std::int32_t> supersample_traverse(NormalizedPoint a, NormalizedPoint b,
                                               const Polygrid& grid, int n_points, double tol) {
    std::vector<std::int32_t> cells;
    const double cell = grid.spec.cell_size_ft;
    auto near_boundary = [&](double g) {
        const double q = g / cell;
        return std::fabs(q - std::round(q)) * cell < tol;
    };
    for (int i = 0; i < n_points; ++i) {
        const double t = (i + 0.5) / n_points;
        const double x = a.x_north + t * (b.x_north - a.x_north);
        const double y = a.y_east + t * (b.y_east - a.y_east);
        const double gx = x - grid.origin_x, gy = y - grid.origin_y;
        if (near_boundary(gx) || near_boundary(gy)) continue;
        int col = std::clamp(static_cast<int>(std::floor(gx / cell)), 0, grid.n_cols - 1);
        int row = std::clamp(static_cast<int>(std::floor(gy / cell)), 0, grid.n_rows - 1);
        const std::int32_t c = grid.cell(col, row);
        if (cells.empty() || cells.back() != c) cells.push_back(c);
    }
    if (cells.empty()) cells.push_back(grid.cell_of_point(a.x_north, a.y_east));
    return cells;
}

namespace {

// Event under construction; the point is in the acting team's frame.
struct Pending {
    double t = 0;
    int period = 1;
    EventType type = EventType::stoppage;
    std::string team;
    std::optional<std::string> player;
    NormalizedPoint pt;
    Manpower mp;
    std::string possession;
    std::optional<ShotAttrs> shot;
    std::optional<EntryAttrs> entry;
    std::optional<ExitAttrs> exit;
    std::optional<PassAttrs> pass;
    int link_to = -1;  // pending index of this pass's reception
};

struct RunRec {
    int run_no = 0;
    std::string team;
    Manpower mp;
    int period = 1;
    std::vector<int> ev;  // pending indices of possession events, chronological
};

struct StrengthSpan {
    double start, end;
    int home_sk, away_sk;
};

struct Roster {
    std::vector<std::string> forwards;  // four lines of three
    std::vector<std::string> defense;   // three pairs
};

Roster make_roster(const std::string& team) {
    Roster r;
    for (int i = 1; i <= 12; ++i)
        r.forwards.push_back(team + "_F" + (i < 10 ? "0" : "") + std::to_string(i));
    for (int i = 1; i <= 6; ++i) r.defense.push_back(team + "_D0" + std::to_string(i));
    return r;
}

PassType classify_pass(NormalizedPoint from, NormalizedPoint to, const std::string& passer,
                       const std::string& receiver, const RinkSpec& rink) {
    const double dx = to.x_north - from.x_north;
    const double dy = to.y_east - from.y_east;
    const double blue = rink.blue_line_offset_ft;
    const double hy = rink.half_width();
    if (is_defenseman(passer) && is_defenseman(receiver) && from.x_north < -blue &&
        to.x_north < -blue)
        return PassType::d2d;
    if (dx > 35.0) return PassType::stretch;
    if (from.x_north < -blue && to.x_north >= -blue && dx > 15.0) return PassType::outlet;
    if (std::fabs(dy) > 20.0 && std::fabs(dx) < 8.0) return PassType::ew;
    if (to.x_north > rink.half_length() - rink.goal_line_offset_ft - 20.0 &&
        std::fabs(to.y_east) < 8.0)
        return PassType::slot;
    if (std::fabs(from.y_east) > hy - 6.0 && std::fabs(to.y_east) > hy - 6.0) return PassType::rim;
    return PassType::other;
}

class GameBuilder {
public:
    GameBuilder(const GenConfig& cfg, Rng& rng, std::string game_id, const TeamGenConfig& home,
                const TeamGenConfig& away)
        : cfg_(cfg),
          rng_(rng),
          game_id_(std::move(game_id)),
          home_(home),
          away_(away),
          home_roster_(make_roster(home.id)),
          away_roster_(make_roster(away.id)) {}

    void build();

    std::vector<Pending> pending;
    std::vector<RunRec> runs;
    std::vector<Shift> shifts;
    std::vector<ManpowerInterval> intervals;
    std::vector<std::pair<int, int>> attack_signs;  // (period, home sign)

private:
    const GenConfig& cfg_;
    Rng& rng_;
    std::string game_id_;
    const TeamGenConfig& home_;
    const TeamGenConfig& away_;
    Roster home_roster_;
    Roster away_roster_;
    std::vector<StrengthSpan> strength_;  // current period
    int period_ = 1;
    int run_counter_ = 0;

    const TeamGenConfig& team_cfg(const std::string& id) const {
        return id == home_.id ? home_ : away_;
    }
    const Roster& roster(const std::string& id) const {
        return id == home_.id ? home_roster_ : away_roster_;
    }
    std::string other(const std::string& id) const { return id == home_.id ? away_.id : home_.id; }

    Manpower manpower_for(const std::string& team, double t) const {
        for (const auto& s : strength_) {
            if (t >= s.start && t < s.end) {
                if (team == home_.id) return {s.home_sk, s.away_sk};
                return {s.away_sk, s.home_sk};
            }
        }
        return {5, 5};
    }

    double next_boundary(double t) const {
        double best = cfg_.period_s;
        for (const auto& s : strength_)
            if (s.end > t) best = std::min(best, s.end);
        return best;
    }

    std::vector<std::string> on_ice(const std::string& team, double t) const {
        const Roster& r = roster(team);
        const int line = static_cast<int>(t / cfg_.shift_len_f) % 4;
        const int pair = static_cast<int>(t / cfg_.shift_len_d) % 3;
        return {r.forwards[3 * line], r.forwards[3 * line + 1], r.forwards[3 * line + 2],
                r.defense[2 * pair], r.defense[2 * pair + 1]};
    }

    std::string pick_player(const std::string& team, double t, const std::string& not_this = {}) {
        auto players = on_ice(team, t);
        for (int tries = 0; tries < 8; ++tries) {
            const std::string& p = players[rng_.uniform_int(static_cast<int>(players.size()))];
            if (p != not_this) return p;
        }
        return players.front();
    }

    NormalizedPoint random_point() {
        const double hx = cfg_.rink.half_length() - 0.5;
        const double hy = cfg_.rink.half_width() - 0.5;
        while (true) {
            NormalizedPoint p{rng_.uniform(-hx, hx), rng_.uniform(-hy, hy)};
            if (cfg_.rink.contains(p.x_north, p.y_east)) return p;
        }
    }

    NormalizedPoint step_from(NormalizedPoint p, double mean_dx, double sd) {
        for (int tries = 0; tries < 60; ++tries) {
            NormalizedPoint q{p.x_north + mean_dx + sd * rng_.normal(),
                              p.y_east + sd * rng_.normal()};
            const double len = std::hypot(q.x_north - p.x_north, q.y_east - p.y_east);
            if (len >= 0.5 && cfg_.rink.contains(q.x_north, q.y_east)) return q;
        }
        NormalizedPoint q{p.x_north * 0.7, p.y_east * 0.7};
        if (std::hypot(q.x_north - p.x_north, q.y_east - p.y_east) < 0.5)
            q.x_north += q.x_north >= 0 ? -0.8 : 0.8;
        return q;
    }

    double speed_for(const std::string& team, NormalizedPoint dest) {
        const Zone z = zone_calc(dest.x_north, cfg_.rink.blue_line_offset_ft);
        return cfg_.base(z) * team_cfg(team).mult(z) * std::exp(cfg_.speed_sigma * rng_.normal());
    }

    int push(Pending ev) {
        pending.push_back(std::move(ev));
        return static_cast<int>(pending.size()) - 1;
    }

    Pending base_event(EventType type, const std::string& team, double t, NormalizedPoint pt,
                       const std::string& possession) {
        Pending e;
        e.t = t;
        e.period = period_;
        e.type = type;
        e.team = team;
        e.pt = pt;
        e.mp = manpower_for(team, t);
        e.possession = possession;
        return e;
    }

    void emit_crossings(const std::string& team, const std::string& carrier, NormalizedPoint a,
                        NormalizedPoint b, double ta, double tb, bool dump);
    void build_strength();
    void build_shifts();
    void build_period();

    struct RunOutcome {
        bool hit_boundary = false;
        bool terminal_shot = false;
        bool goal = false;
        bool failed_reception = false;
        double t_end = 0;
        NormalizedPoint last_pt;
    };
    RunOutcome gen_run(const std::string& team, double t0, double t_limit,
                       std::optional<NormalizedPoint> seed_pt);
};

void GameBuilder::build_strength() {
    strength_.clear();
    if (cfg_.pp_per_period <= 0) {
        strength_.push_back({0.0, cfg_.period_s, 5, 5});
    } else {
        const double slot = cfg_.period_s / cfg_.pp_per_period;
        double cursor = 0.0;
        for (int k = 0; k < cfg_.pp_per_period; ++k) {
            const double lo = k * slot + 40.0;
            const double hi = (k + 1) * slot - cfg_.pp_length_s - 40.0;
            const double start = rng_.uniform(lo, std::max(lo + 1.0, hi));
            const double end = start + cfg_.pp_length_s;
            const bool home_pp = rng_.bernoulli(0.5);
            if (start > cursor) strength_.push_back({cursor, start, 5, 5});
            strength_.push_back({start, end, home_pp ? 5 : 4, home_pp ? 4 : 5});
            cursor = end;
        }
        if (cursor < cfg_.period_s) strength_.push_back({cursor, cfg_.period_s, 5, 5});
    }
    for (const auto& s : strength_)
        intervals.push_back({game_id_, period_, s.start, s.end, home_.id, away_.id, s.home_sk,
                             s.away_sk});
}

void GameBuilder::build_shifts() {
    for (const std::string* team : {&home_.id, &away_.id}) {
        const Roster& r = roster(*team);
        for (int p = 1; p <= cfg_.periods; ++p) {
            for (int k = 0; k * cfg_.shift_len_f < cfg_.period_s; ++k) {
                const int line = k % 4;
                const double s = k * cfg_.shift_len_f;
                const double e = std::min((k + 1) * cfg_.shift_len_f, cfg_.period_s);
                for (int i = 0; i < 3; ++i)
                    shifts.push_back(
                        {game_id_, r.forwards[3 * line + i], *team, Position::F, p, s, e});
            }
            for (int k = 0; k * cfg_.shift_len_d < cfg_.period_s; ++k) {
                const int pair = k % 3;
                const double s = k * cfg_.shift_len_d;
                const double e = std::min((k + 1) * cfg_.shift_len_d, cfg_.period_s);
                for (int i = 0; i < 2; ++i)
                    shifts.push_back(
                        {game_id_, r.defense[2 * pair + i], *team, Position::D, p, s, e});
            }
        }
    }
}

void GameBuilder::emit_crossings(const std::string& team, const std::string& carrier,
                                 NormalizedPoint a, NormalizedPoint b, double ta, double tb,
                                 bool dump) {
    const double blue = cfg_.rink.blue_line_offset_ft;
    if (a.x_north < -blue && b.x_north >= -blue) {
        const double frac = std::clamp((-blue - a.x_north) / (b.x_north - a.x_north), 0.02, 0.98);
        Pending e = base_event(EventType::zone_exit, team, ta + frac * (tb - ta),
                               {-blue - 0.05, a.y_east + frac * (b.y_east - a.y_east)}, team);
        e.player = carrier;
        e.exit = ExitAttrs{true};
        push(e);
    }
    if (a.x_north <= blue && b.x_north > blue) {
        const double frac = std::clamp((blue - a.x_north) / (b.x_north - a.x_north), 0.02, 0.98);
        Pending e = base_event(EventType::zone_entry, team, ta + frac * (tb - ta),
                               {blue + 0.05, a.y_east + frac * (b.y_east - a.y_east)}, team);
        e.player = carrier;
        if (dump) {
            e.entry = EntryAttrs{false, 0, 0};
        } else {
            const auto& mix = cfg_.entry_mix.empty() ? kDefaultEntryMix : cfg_.entry_mix;
            const auto& t = kControlledTypes[rng_.weighted(mix)];
            e.entry = EntryAttrs{true, t.attackers, t.defenders};
        }
        push(e);
    }
}

GameBuilder::RunOutcome GameBuilder::gen_run(const std::string& team, double t0, double t_limit,
                                             std::optional<NormalizedPoint> seed_pt) {
    RunOutcome out;
    const int target = 2 + rng_.geometric(1.0 / (cfg_.mean_run_events - 1.0));
    const bool want_shot = rng_.bernoulli(cfg_.shot_rate);
    const bool want_failed = !want_shot && rng_.bernoulli(cfg_.failed_reception_rate);
    bool dump_pending = rng_.bernoulli(cfg_.dump_in_rate);

    RunRec run;
    run.run_no = run_counter_++;
    run.team = team;
    run.mp = manpower_for(team, t0);
    run.period = period_;

    NormalizedPoint p = seed_pt.value_or(random_point());
    if (dump_pending) {
        const double blue = cfg_.rink.blue_line_offset_ft;
        p = {rng_.uniform(-blue + 2.0, blue - 8.0),
             rng_.uniform(-cfg_.rink.half_width() + 8.0, cfg_.rink.half_width() - 8.0)};
    }
    double t = t0;

    Pending first = base_event(EventType::puck_recovery, team, t, p, team);
    first.player = pick_player(team, t);
    std::string carrier = *first.player;
    run.ev.push_back(push(first));

    // Transition bookkeeping for the generator's own pre-shot pace.
    std::vector<double> tr_d, tr_dt, tr_t_to;

    bool pass_in_flight = false;
    bool flight_is_dump = false;
    int last_pass_idx = -1;

    while (static_cast<int>(run.ev.size()) < target) {
        const bool is_last = static_cast<int>(run.ev.size()) + 1 == target;
        NormalizedPoint q;
        if (pass_in_flight && flight_is_dump) {
            const double hx = cfg_.rink.half_length();
            q = {rng_.uniform(cfg_.rink.blue_line_offset_ft + 15.0, hx - 8.0),
                 rng_.uniform(-cfg_.rink.half_width() + 8.0, cfg_.rink.half_width() - 8.0)};
            if (!cfg_.rink.contains(q.x_north, q.y_east)) q = {hx - 15.0, 0.0};
        } else if (pass_in_flight) {
            q = step_from(p, 6.0, 10.0);  // flight
        } else {
            q = step_from(p, 2.5, 5.0);  // carry
        }
        double v = speed_for(team, q);
        const bool failing_here = want_failed && is_last && pass_in_flight && !flight_is_dump;
        if (failing_here) v *= 1.0 + cfg_.failed_reception_offset;
        const double d = std::hypot(q.x_north - p.x_north, q.y_east - p.y_east);
        const double dt = d / v;
        if (t + dt > t_limit) {
            out.hit_boundary = true;
            break;
        }
        const double t_new = t + dt;
        emit_crossings(team, carrier, p, q, t, t_new, pass_in_flight && flight_is_dump);

        Pending e = base_event(EventType::stoppage, team, t_new, q, team);
        if (pass_in_flight) {
            const NormalizedPoint pass_pt = pending[last_pass_idx].pt;
            if (failing_here) {
                e.type = EventType::failed_reception;
                e.player = pick_player(team, t_new, carrier);
                pending[last_pass_idx].link_to = static_cast<int>(pending.size());
                pending[last_pass_idx].pass->pass_type =
                    classify_pass(pass_pt, q, carrier, *e.player, cfg_.rink);
                push(e);
                out.failed_reception = true;
                break;  // defender wins the loose puck; pass stays the final possession event
            }
            if (is_last && want_shot) {
                e.type = EventType::shot;  // one-timer, no reception event
                e.player = pick_player(team, t_new, carrier);
            } else if (flight_is_dump) {
                e.type = EventType::puck_recovery;  // chase recovery in deep OZ
                e.player = pick_player(team, t_new, carrier);
            } else {
                e.type = EventType::reception;
                e.player = pick_player(team, t_new, carrier);
                pending[last_pass_idx].link_to = static_cast<int>(pending.size());
                pending[last_pass_idx].pass->pass_type =
                    classify_pass(pass_pt, q, carrier, *e.player, cfg_.rink);
            }
            carrier = *e.player;
            pass_in_flight = false;
            flight_is_dump = false;
        } else if (is_last && want_shot) {
            e.type = EventType::shot;
            e.player = carrier;
        } else if (!is_last && rng_.bernoulli(cfg_.midrun_shot_rate)) {
            e.type = EventType::shot;
            e.player = carrier;
        } else {
            e.type = EventType::pass;
            e.player = carrier;
            e.pass = PassAttrs{};
            pass_in_flight = true;
            flight_is_dump = dump_pending;
            dump_pending = false;
            last_pass_idx = static_cast<int>(pending.size());
        }

        if (e.type == EventType::shot) {
            ShotAttrs sa;
            sa.deflected = rng_.bernoulli(cfg_.deflected_rate);
            const bool terminal = is_last && want_shot;
            sa.on_goal = terminal && rng_.bernoulli(cfg_.on_goal_rate);
            // Pipeline view of pre-shot pace: transitions surviving
            // final-event exclusion whose later endpoint is within 5 s.
            double pre_d = 0, pre_dt = 0;
            const std::size_t n_tr = tr_d.size();
            const std::size_t usable = terminal ? (n_tr >= 1 ? n_tr - 1 : 0) : n_tr;
            for (std::size_t i = 0; i < usable; ++i) {
                if (tr_t_to[i] >= t_new - 5.0 && tr_t_to[i] <= t_new) {
                    pre_d += tr_d[i];
                    pre_dt += tr_dt[i];
                }
            }
            double p_goal = cfg_.goal_base;
            if (pre_dt > 0)
                p_goal = std::clamp(cfg_.goal_base + cfg_.goal_pace_coupling *
                                                         (pre_d / pre_dt / cfg_.base_oz - 1.0),
                                    0.004, 0.8);
            sa.goal = sa.on_goal && rng_.bernoulli(p_goal);
            out.goal = out.goal || sa.goal;
            if (rng_.bernoulli(0.5)) {
                const double gx = cfg_.rink.half_length() - cfg_.rink.goal_line_offset_ft;
                sa.distance_ft = std::hypot(gx - q.x_north, q.y_east);
            }
            e.shot = sa;
        }

        run.ev.push_back(push(e));
        tr_d.push_back(d);
        tr_dt.push_back(dt);
        tr_t_to.push_back(t_new);
        p = q;
        t = t_new;

        if (e.type == EventType::shot && !is_last) {
            // Blocked in front; the attacking team recovers the loose puck
            // with the possession label intact, so the sequence continues.
            NormalizedPoint bp = cfg_.rink.contains(q.x_north + 1.0, q.y_east)
                                     ? NormalizedPoint{q.x_north + 1.0, q.y_east}
                                     : q;
            Pending blk = base_event(EventType::block, other(team), t + 0.15,
                                     {-bp.x_north, -bp.y_east}, team);
            blk.player = pick_player(other(team), t + 0.15);
            push(blk);
            const NormalizedPoint rq = step_from(q, -2.0, 6.0);
            const double rd = std::hypot(rq.x_north - q.x_north, rq.y_east - q.y_east);
            const double rdt = std::max(0.3, rd / speed_for(team, rq));
            if (t + rdt > t_limit) {
                out.hit_boundary = true;
                break;
            }
            Pending rec = base_event(EventType::puck_recovery, team, t + rdt, rq, team);
            rec.player = pick_player(team, t + rdt, carrier);
            carrier = *rec.player;
            emit_crossings(team, carrier, q, rq, t, t + rdt, false);
            run.ev.push_back(push(rec));
            tr_d.push_back(rd);
            tr_dt.push_back(rdt);
            tr_t_to.push_back(t + rdt);
            p = rq;
            t += rdt;
        }
    }

    out.terminal_shot =
        want_shot && !run.ev.empty() && pending[run.ev.back()].type == EventType::shot;
    out.t_end = t;
    out.last_pt = p;
    runs.push_back(std::move(run));
    return out;
}

void GameBuilder::build_period() {
    build_strength();

    std::string team = rng_.bernoulli(0.5) ? home_.id : away_.id;
    {
        Pending f = base_event(EventType::faceoff, team, 0.5, {0.0, 0.0}, "");
        f.player = pick_player(team, 0.5);
        push(f);
    }

    double t = 2.0;
    std::optional<NormalizedPoint> seed;
    while (t < cfg_.period_s - 12.0) {
        const double boundary = next_boundary(t);
        const double limit = std::min(boundary, cfg_.period_s) - 0.5;
        if (limit - t < 4.0) {
            t = boundary + cfg_.inter_run_gap_s * rng_.uniform(0.3, 1.0);
            seed.reset();
            continue;
        }
        RunOutcome run = gen_run(team, t, limit, seed);
        seed.reset();
        t = run.t_end + cfg_.inter_run_gap_s * rng_.uniform(0.5, 1.5);

        if (run.hit_boundary) {
            // Same team keeps the puck across the manpower flip.
            t = std::max(t, boundary + 0.5 + rng_.uniform(0.0, 1.0));
            continue;
        }
        if (run.failed_reception) {
            team = other(team);
            seed = NormalizedPoint{-run.last_pt.x_north, -run.last_pt.y_east};
            continue;
        }
        const bool stop = run.terminal_shot ? (run.goal || rng_.bernoulli(0.5))
                                            : rng_.bernoulli(cfg_.stoppage_rate);
        if (stop) {
            team = rng_.bernoulli(0.5) ? home_.id : away_.id;
            if (t < cfg_.period_s - 1.5) {
                Pending f = base_event(EventType::faceoff, team, t, {0.0, 0.0}, "");
                f.player = pick_player(team, t);
                push(f);
                t += 1.0;
            }
        } else {
            team = other(team);
            seed = NormalizedPoint{-run.last_pt.x_north, -run.last_pt.y_east};
        }
    }
}

void GameBuilder::build() {
    build_shifts();
    for (period_ = 1; period_ <= cfg_.periods; ++period_) {
        attack_signs.emplace_back(period_, period_ % 2 == 1 ? 1 : -1);
        build_period();
    }
}

std::string event_id_for(const std::string& game, int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s-E%06d", game.c_str(), index);
    return buf;
}

} // namespace

GroupedSpeed TruthLedger::expected_groups(const KeyDims& dims,
                                          std::optional<Manpower> manpower) const {
    // Per-game partials merged in sorted game order: the pipeline's
    // arithmetic path.
    std::map<std::string, GroupedSpeed> per_game;
    for (const LedgerSample& s : samples) {
        if (manpower && s.manpower != *manpower) continue;
        GroupKey k;
        if (dims.league) k.league = league;
        if (dims.season) k.season = season;
        if (dims.team) k.team = s.team;
        if (dims.zone) k.zone = s.zone;
        if (dims.period) k.period = s.period;
        if (dims.manpower) k.manpower = s.manpower;
        PaceSample ps;
        ps.d_total = s.d_total;
        ps.d_ew = s.d_ew;
        ps.d_ns = s.d_ns;
        ps.d_n = s.d_n;
        ps.dt = s.dt;
        per_game[s.game_id][k].add(ps);
    }
    GroupedSpeed out;
    for (const auto& [_, grouped] : per_game) merge_grouped(out, grouped);
    return out;
}

SynthResult generate(const GenConfig& cfg_in) {
    GenConfig cfg = cfg_in;
    cfg.validate();
    if (cfg.teams.empty())
        cfg.teams = {{"T01", 1, 1, 1}, {"T02", 1, 1, 1}, {"T03", 1, 1, 1}, {"T04", 1, 1, 1}};

    Rng rng(cfg.seed);
    SynthResult result;
    result.cfg = cfg;
    result.ledger.seed = cfg.seed;
    result.ledger.league = cfg.league;
    result.ledger.season = cfg.season;

    const Polygrid oracle_grid = cfg.ledger_cells ? build_grid(cfg.rink) : Polygrid{};
    const int n_teams = static_cast<int>(cfg.teams.size());

    for (int g = 0; g < cfg.n_games; ++g) {
        char gid[16];
        std::snprintf(gid, sizeof(gid), "G%04d", g + 1);
        const std::string game_id = gid;
        const int hi = g % n_teams;
        int ai = (hi + 1 + (g / n_teams)) % n_teams;
        if (ai == hi) ai = (hi + 1) % n_teams;

        GameBuilder gb(cfg, rng, game_id, cfg.teams[hi], cfg.teams[ai]);
        gb.build();

        for (const auto& [period, home_sign] : gb.attack_signs) {
            result.attack.set(game_id, cfg.teams[hi].id, period, home_sign);
            result.attack.set(game_id, cfg.teams[ai].id, period, -home_sign);
        }

        // Pendings are appended chronologically per period.
        std::vector<std::string> ids(gb.pending.size());
        for (std::size_t i = 0; i < gb.pending.size(); ++i)
            ids[i] = event_id_for(game_id, static_cast<int>(i) + 1);

        for (std::size_t i = 0; i < gb.pending.size(); ++i) {
            const Pending& pe = gb.pending[i];
            Event e;
            e.event_id = ids[i];
            e.game_id = game_id;
            e.league = cfg.league;
            e.season = cfg.season;
            e.period = pe.period;
            e.t_s = pe.t;
            e.team_id = pe.team;
            e.player_id = pe.player;
            e.type = pe.type;
            e.point = pe.pt;
            if (!pe.possession.empty()) e.possession_team = pe.possession;
            e.manpower = pe.mp;
            e.shot = pe.shot;
            e.entry = pe.entry;
            e.exit = pe.exit;
            e.pass = pe.pass;
            if (e.pass && pe.link_to >= 0) e.pass->linked_reception_id = ids[pe.link_to];
            result.log.events.push_back(std::move(e));
        }

        for (const RunRec& run : gb.runs) {
            const std::string seq_id = game_id + "-r" + std::to_string(run.run_no);
            if (run.ev.size() < 3) continue;  // 0 standard samples after final-event exclusion
            for (std::size_t k = 0; k + 2 < run.ev.size(); ++k) {
                const Pending& from = gb.pending[run.ev[k]];
                const Pending& to = gb.pending[run.ev[k + 1]];
                LedgerSample s;
                s.game_id = game_id;
                s.seq_id = seq_id;
                s.from_event = ids[run.ev[k]];
                s.to_event = ids[run.ev[k + 1]];
                s.team = run.team;
                s.from_player = from.player;
                s.to_player = to.player;
                s.manpower = run.mp;
                s.period = run.period;
                const double dx = to.pt.x_north - from.pt.x_north;
                const double dy = to.pt.y_east - from.pt.y_east;
                s.d_ew = std::fabs(dy);
                s.d_ns = std::fabs(dx);
                s.d_n = std::fmax(dx, 0.0);
                s.d_total = std::fmax(std::sqrt(dx * dx + dy * dy), std::fmax(s.d_ew, s.d_ns));
                s.dt = to.t - from.t;
                s.t_to = to.t;
                s.zone = zone_calc(to.pt.x_north, cfg.rink.blue_line_offset_ft);
                if (cfg.ledger_cells) {
                    auto cells =
                        supersample_traverse(from.pt, to.pt, oracle_grid, cfg.cell_oracle_points);
                    const double share = 1.0 / static_cast<double>(cells.size());
                    for (auto c : cells) s.cells.push_back({c, share});
                }
                result.ledger.samples.push_back(std::move(s));
            }
        }

        result.shifts.insert(result.shifts.end(), gb.shifts.begin(), gb.shifts.end());
        result.intervals.insert(result.intervals.end(), gb.intervals.begin(), gb.intervals.end());
    }

    result.log.rebuild_index();
    KeyDims tz;
    tz.team = true;
    tz.zone = true;
    result.ledger.expected_team_zone_5v5 =
        result.ledger.expected_groups(tz, Manpower{5, 5});
    KeyDims z;
    z.zone = true;
    result.ledger.expected_zone_5v5 = result.ledger.expected_groups(z, Manpower{5, 5});
    return result;
}

namespace {

void write_raw_events_csv(const SynthResult& r, std::ostream& out) {
    out << kEventCsvHeader << '\n';
    csv::Writer w(out);
    for (const Event& e : r.log.events) {
        const int sign = r.attack.sign_for(e.game_id, e.team_id, e.period);
        w.field(e.event_id).field(e.game_id).field(e.league).field(e.season);
        w.field(e.period).field(e.t_s).field(e.team_id).field(e.player_id.value_or(""));
        w.field(to_string(e.type));
        w.field(sign * e.point.x_north).field(sign * e.point.y_east);
        w.field(e.possession_team.value_or(""));
        w.field(e.manpower.own).field(e.manpower.opp);
        if (e.shot) {
            w.field(e.shot->deflected ? "1" : "0").field(e.shot->on_goal ? "1" : "0");
            w.field(e.shot->goal ? "1" : "0").field(e.shot->distance_ft);
        } else {
            w.field("").field("").field("").field("");
        }
        if (e.entry) {
            w.field(e.entry->controlled ? "1" : "0").field(e.entry->attackers).field(
                e.entry->defenders);
        } else {
            w.field("").field("").field("");
        }
        w.field(e.exit ? (e.exit->controlled ? "1" : "0") : "");
        if (e.pass) {
            w.field(to_string(e.pass->pass_type)).field(e.pass->linked_reception_id.value_or(""));
        } else {
            w.field("").field("");
        }
        w.end_row();
    }
}

} // namespace

void write_dataset(const SynthResult& result, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        std::ofstream out(fs::path(dir) / "events.csv");
        write_raw_events_csv(result, out);
    }
    {
        std::ofstream out(fs::path(dir) / "attack.csv");
        write_attack_csv(result.attack, out);
    }
    {
        std::ofstream out(fs::path(dir) / "shifts.csv");
        write_shifts_csv(result.shifts, out);
    }
    {
        std::ofstream out(fs::path(dir) / "manpower.csv");
        write_manpower_csv(result.intervals, out);
    }
    {
        std::ofstream out(fs::path(dir) / "ledger.jsonl");
        nlohmann::json header;
        header["type"] = "header";
        header["rng"] = result.ledger.rng_name;
        header["seed"] = result.ledger.seed;
        header["league"] = result.ledger.league;
        header["season"] = result.ledger.season;
        header["n_samples"] = result.ledger.samples.size();
        out << header.dump() << '\n';
        for (const LedgerSample& s : result.ledger.samples) {
            nlohmann::json j;
            j["type"] = "sample";
            j["game_id"] = s.game_id;
            j["seq_id"] = s.seq_id;
            j["from"] = s.from_event;
            j["to"] = s.to_event;
            j["team"] = s.team;
            if (s.from_player) j["from_player"] = *s.from_player;
            if (s.to_player) j["to_player"] = *s.to_player;
            j["manpower"] = to_string(s.manpower);
            j["period"] = s.period;
            j["zone"] = to_string(s.zone);
            j["d_total"] = s.d_total;
            j["d_ew"] = s.d_ew;
            j["d_ns"] = s.d_ns;
            j["d_n"] = s.d_n;
            j["dt"] = s.dt;
            j["t_to"] = s.t_to;
            if (!s.cells.empty()) {
                auto& arr = j["cells"] = nlohmann::json::array();
                for (const auto& c : s.cells) arr.push_back({c.cell, c.fraction});
            }
            out << j.dump() << '\n';
        }
        for (const auto& [key, sv] : result.ledger.expected_team_zone_5v5) {
            nlohmann::json j;
            j["type"] = "group";
            j["mode"] = "zonal";
            j["team"] = key.team.value_or("");
            j["zone"] = key.zone ? to_string(*key.zone) : "";
            j["sum_d_total"] = sv.sum_d_total;
            j["sum_d_ew"] = sv.sum_d_ew;
            j["sum_d_ns"] = sv.sum_d_ns;
            j["sum_d_n"] = sv.sum_d_n;
            j["sum_dt"] = sv.sum_dt;
            j["n"] = sv.n;
            out << j.dump() << '\n';
        }
    }
}

} // namespace pace

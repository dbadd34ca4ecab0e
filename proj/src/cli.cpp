#include "pace/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pace/csv.hpp"
#include "pace/heatmap_svg.hpp"
#include "pace/ingest.hpp"
#include "pace/metrics.hpp"
#include "pace/outcome_analytics.hpp"
#include "pace/player_analytics.hpp"
#include "pace/polygrid.hpp"
#include "pace/rink.hpp"
#include "pace/sequencer.hpp"
#include "pace/synth.hpp"
#include "pace/team_analytics.hpp"

namespace pace {

namespace {

namespace fs = std::filesystem;

struct CommonOpts {
    std::vector<std::string> event_files;
    std::string shifts_file;
    std::string intervals_file;
    std::string attack_file;
    std::string rink = "nhl";
    std::string output_dir = ".";
    std::string format = "csv";
    std::string manpower = "5v5";
    bool all_manpower = false;
    bool mean_of_speeds = false;
    int workers = 0;  // 0 -> all hardware threads
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_events = true) {
    auto* ev = cmd->add_option("--events", o.event_files, "event file(s), .csv or .jsonl");
    if (needs_events) ev->required();
    cmd->add_option("--attack", o.attack_file, "attack-direction table CSV");
    cmd->add_option("--shifts", o.shifts_file, "shifts CSV");
    cmd->add_option("--intervals", o.intervals_file, "manpower intervals CSV");
    cmd->add_option("--rink", o.rink, "rink preset nhl|ahl|shl or a key=value file");
    cmd->add_option("--output-dir", o.output_dir, "directory for output files");
    cmd->add_option("--format", o.format, "table format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--manpower", o.manpower, "sequence-level manpower filter, e.g. 5v5");
    cmd->add_flag("--all-manpower", o.all_manpower, "disable the manpower filter");
    cmd->add_flag("--mean-of-speeds", o.mean_of_speeds,
                  "average per-transition speeds instead of pooling distance over time");
    cmd->add_option("--workers", o.workers, "worker threads (0 = all)");
}

struct LoadedData {
    RinkSpec rink;
    EventLog log;
    std::vector<Shift> shifts;
    std::vector<ManpowerInterval> intervals;
};

LoadedData load(const CommonOpts& o) {
    LoadedData d;
    d.rink = resolve_rink(o.rink);
    if (o.attack_file.empty()) throw std::runtime_error("--attack table is required");
    std::ifstream att(o.attack_file);
    if (!att) throw std::runtime_error("cannot open attack file '" + o.attack_file + "'");
    const AttackTable attack = parse_attack_csv(att);
    for (const std::string& path : o.event_files) {
        EventLog part = parse_events_file(path, d.rink, attack);
        d.log.events.insert(d.log.events.end(), std::make_move_iterator(part.events.begin()),
                            std::make_move_iterator(part.events.end()));
    }
    d.log.rebuild_index();
    if (!o.shifts_file.empty()) d.shifts = parse_shifts_file(o.shifts_file);
    if (!o.intervals_file.empty()) d.intervals = parse_manpower_file(o.intervals_file);
    return d;
}

PaceFilter filter_of(const CommonOpts& o) {
    PaceFilter f;
    if (!o.all_manpower) {
        auto mp = manpower_from_string(o.manpower);
        if (!mp) throw std::runtime_error("bad --manpower '" + o.manpower + "'");
        f.manpower = *mp;
    }
    return f;
}

AggMode mode_of(const CommonOpts& o) {
    return o.mean_of_speeds ? AggMode::mean_of_speeds : AggMode::time_weighted;
}

std::ofstream open_out(const CommonOpts& o, const std::string& name) {
    fs::create_directories(o.output_dir);
    const fs::path path = fs::path(o.output_dir) / name;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

KeyDims parse_dims(const std::string& by) {
    KeyDims dims;
    for (auto part : split(by, ',')) {
        part = trim(part);
        if (part == "league") dims.league = true;
        else if (part == "season") dims.season = true;
        else if (part == "team") dims.team = true;
        else if (part == "opponent") dims.opponent = true;
        else if (part == "zone") dims.zone = true;
        else if (part == "period") dims.period = true;
        else if (part == "manpower") dims.manpower = true;
        else if (!part.empty())
            throw std::runtime_error("unknown --by dimension '" + std::string(part) + "'");
    }
    return dims;
}

int run_app(const std::vector<std::string>& args) {
    CLI::App app{"pace-of-play analytics over possession-labeled hockey event data"};
    app.require_subcommand(1);

    // validate
    auto v_opts = std::make_shared<CommonOpts>();
    auto* validate_cmd = app.add_subcommand("validate", "check an event log and its side tables");
    add_common(validate_cmd, *v_opts);
    validate_cmd->callback([v_opts] {
        LoadedData d = load(*v_opts);
        const ValidationReport report = validate(d.log, d.shifts, d.intervals);
        auto out = open_out(*v_opts, "validation.csv");
        csv::Writer w(out);
        w.field("kind").field("game_id").field("event_id").field("detail");
        w.end_row();
        for (const auto& f : report.findings) {
            w.field(to_string(f.kind)).field(f.game_id).field(f.event_id).field(f.detail);
            w.end_row();
        }
        std::cout << report.summary() << '\n';
    });

    // pace-zonal
    auto z_opts = std::make_shared<CommonOpts>();
    auto z_by = std::make_shared<std::string>("zone");
    auto* zonal_cmd = app.add_subcommand("pace-zonal", "speed vectors grouped by --by dimensions");
    add_common(zonal_cmd, *z_opts);
    zonal_cmd->add_option("--by", *z_by, "comma list: zone,period,manpower,league,season,team");
    zonal_cmd->callback([z_opts, z_by] {
        LoadedData d = load(*z_opts);
        const KeyDims dims = parse_dims(*z_by);
        auto seqs = build_sequences(d.log, {}, z_opts->workers);
        auto zonal = split_by_zone(seqs, d.log, d.rink);
        const auto grouped =
            aggregate_sequences(d.log, zonal, dims, filter_of(*z_opts), z_opts->workers);
        if (z_opts->format == "json") {
            auto out = open_out(*z_opts, "pace_zonal.json");
            write_grouped_json(grouped, dims, mode_of(*z_opts), out);
        } else {
            auto out = open_out(*z_opts, "pace_zonal.csv");
            write_grouped_csv(grouped, dims, mode_of(*z_opts), out);
        }
    });

    // pace-grid / export-heatmap share options
    struct GridOpts {
        CommonOpts common;
        std::string team;
        std::string side = "attacking";
        bool diff_vs_league = false;
        bool smooth_flag = true;
        double tau = 60.0;
        double sigma = 0.5;
        bool chord_alloc = false;
        std::string heat_format = "csv";
    };
    auto add_grid_opts = [](CLI::App* cmd, GridOpts& g) {
        add_common(cmd, g.common);
        cmd->add_option("--team", g.team, "subject team (omit for the league grid)");
        cmd->add_option("--side", g.side, "attacking|defending")
            ->check(CLI::IsMember({"attacking", "defending"}));
        cmd->add_flag("--diff-vs-league,!--no-diff-vs-league", g.diff_vs_league,
                      "emit the team-minus-league differential");
        cmd->add_flag("--smooth,!--no-smooth", g.smooth_flag,
                      "Gaussian pre-smoothing for differentials");
        cmd->add_option("--tau", g.tau, "exposure threshold, seconds per cell");
        cmd->add_option("--sigma", g.sigma, "Gaussian sigma in cells");
        cmd->add_flag("--chord-alloc", g.chord_alloc,
                      "allocate by per-cell chord length instead of equal shares");
    };

    auto grid_compute = [](const GridOpts& g) -> SpeedGrid {
        LoadedData d = load(g.common);
        auto seqs = build_sequences(d.log, {}, g.common.workers);  // standard termination
        const PaceFilter filter = filter_of(g.common);
        const AllocMode alloc = g.chord_alloc ? AllocMode::chord_length : AllocMode::equal_split;
        const Side side = g.side == "defending" ? Side::defending : Side::attacking;
        if (!g.team.empty() && g.diff_vs_league) {
            auto result = team_polygrid(d.log, seqs, d.rink, g.team, side, filter, g.tau, g.sigma,
                                        alloc, g.common.workers);
            if (!g.smooth_flag) {
                const SpeedGrid league = speed_grid(result.league_grid, g.tau);
                return diff(result.team_speed, league, false, g.sigma);
            }
            return result.differential;
        }
        PaceFilter f = filter;
        const bool mirror = side == Side::defending;
        if (!g.team.empty()) {
            if (side == Side::attacking) f.team = g.team;
            else f.opponent = g.team;
        }
        const Polygrid grid =
            accumulate_sequences(d.log, seqs, d.rink, f, mirror, alloc, g.common.workers);
        SpeedGrid speed = speed_grid(grid, g.tau);
        if (g.smooth_flag && g.diff_vs_league) speed = smooth(speed, g.sigma);
        return speed;
    };

    auto grid_name = [](const GridOpts& g, const char* ext) {
        std::string base = g.team.empty() ? std::string("league") : g.team;
        base += "_" + g.side;
        if (g.diff_vs_league) base += "_diff";
        return base + ext;
    };

    auto pg = std::make_shared<GridOpts>();
    auto* grid_cmd = app.add_subcommand("pace-grid", "polygrid speed matrix");
    add_grid_opts(grid_cmd, *pg);
    grid_cmd->callback([pg, grid_compute, grid_name] {
        const SpeedGrid g = grid_compute(*pg);
        auto out = open_out(pg->common, grid_name(*pg, ".csv"));
        write_speed_grid_csv(g, out);
    });

    auto hm = std::make_shared<GridOpts>();
    auto* heat_cmd = app.add_subcommand("export-heatmap", "polygrid render as CSV or SVG");
    add_grid_opts(heat_cmd, *hm);
    heat_cmd->add_option("--heat-format", hm->heat_format, "csv|svg")
        ->check(CLI::IsMember({"csv", "svg"}));
    heat_cmd->callback([hm, grid_compute, grid_name] {
        const SpeedGrid g = grid_compute(*hm);
        if (hm->heat_format == "svg") {
            HeatmapStyle style;
            style.title = grid_name(*hm, "");
            style.diverging = hm->diff_vs_league;
            auto out = open_out(hm->common, grid_name(*hm, ".svg"));
            write_heatmap_svg(g, style, out);
        } else {
            auto out = open_out(hm->common, grid_name(*hm, ".csv"));
            write_speed_grid_csv(g, out);
        }
    });

    // teams
    auto t_opts = std::make_shared<CommonOpts>();
    auto t_leave_one_out = std::make_shared<bool>(false);
    auto t_grids = std::make_shared<bool>(false);
    auto t_repeat = std::make_shared<bool>(false);
    auto t_tau = std::make_shared<double>(60.0);
    auto* teams_cmd = app.add_subcommand("teams", "team attacking/defending pace vs league");
    add_common(teams_cmd, *t_opts);
    teams_cmd->add_flag("--leave-one-out", *t_leave_one_out,
                        "exclude the subject team from the league baseline");
    teams_cmd->add_flag("--grids", *t_grids, "also render per-team differential SVG polygrids");
    teams_cmd->add_flag("--repeatability", *t_repeat,
                        "season-over-season pairing when two seasons are present");
    teams_cmd->add_option("--tau", *t_tau, "exposure threshold for --grids");
    teams_cmd->callback([t_opts, t_leave_one_out, t_grids, t_repeat, t_tau] {
        LoadedData d = load(*t_opts);
        auto seqs = build_sequences(d.log, {}, t_opts->workers);
        auto zonal = split_by_zone(seqs, d.log, d.rink);
        const PaceFilter filter = filter_of(*t_opts);
        const TeamZonalResult result = team_zonal(d.log, zonal, filter, mode_of(*t_opts),
                                                  *t_leave_one_out, t_opts->workers);
        if (t_opts->format == "json") {
            auto out = open_out(*t_opts, "teams_zonal.json");
            write_team_zonal_json(result, mode_of(*t_opts), out);
        } else {
            auto out = open_out(*t_opts, "teams_zonal.csv");
            write_team_zonal_csv(result, mode_of(*t_opts), out);
        }
        if (*t_grids) {
            std::set<std::string> teams;
            for (const auto& row : result.rows) teams.insert(row.team);
            for (const std::string& team : teams) {
                for (Side side : {Side::attacking, Side::defending}) {
                    auto grids = team_polygrid(d.log, seqs, d.rink, team, side, filter, *t_tau,
                                               0.5, AllocMode::equal_split, t_opts->workers);
                    HeatmapStyle style;
                    style.title = team + " " + to_string(side) + " vs league (ft/s)";
                    style.diverging = true;
                    auto out =
                        open_out(*t_opts, team + "_" + to_string(side) + ".svg");
                    write_heatmap_svg(grids.differential, style, out);
                }
            }
        }
        if (*t_repeat) {
            std::set<std::string> seasons;
            for (const Event& e : d.log.events) seasons.insert(e.season);
            if (seasons.size() >= 2) {
                auto it = seasons.begin();
                const std::string a = *it++;
                const std::string b = *it;
                for (Zone zone : {Zone::DZ, Zone::NZ, Zone::OZ}) {
                    const auto pairs = team_season_pairs(d.log, zonal, a, b, zone,
                                                         Side::attacking, filter,
                                                         mode_of(*t_opts), t_opts->workers);
                    auto out = open_out(*t_opts, std::string("repeatability_") +
                                                     to_string(zone) + ".csv");
                    write_season_pairs_csv(pairs, out);
                }
            } else {
                std::cout << "repeatability: need two seasons in the log\n";
            }
        }
    });

    // players
    auto p_opts = std::make_shared<CommonOpts>();
    auto p_min_toi = std::make_shared<double>(200.0);
    auto p_top = std::make_shared<int>(0);
    auto p_tw = std::make_shared<bool>(false);
    auto* players_cmd = app.add_subcommand("players", "individual and WOWY pace tables per zone");
    add_common(players_cmd, *p_opts);
    players_cmd->add_option("--min-toi", *p_min_toi, "minimum 5v5 minutes for inclusion");
    players_cmd->add_option("--top", *p_top, "keep only the top/bottom N rows by WOWY phi_t");
    players_cmd->add_flag("--time-weighted-wowy", *p_tw,
                          "pool WOWY by time instead of per-sequence means");
    players_cmd->callback([p_opts, p_min_toi, p_top, p_tw] {
        LoadedData d = load(*p_opts);
        if (d.shifts.empty() || d.intervals.empty())
            throw std::runtime_error("players requires --shifts and --intervals");
        auto seqs = build_sequences(d.log, {}, p_opts->workers);
        auto zonal = split_by_zone(seqs, d.log, d.rink);
        const auto weighting =
            *p_tw ? WowyWeighting::time_weighted : WowyWeighting::per_sequence;
        PlayerTables tables =
            build_player_tables(d.log, zonal, filter_of(*p_opts), d.shifts, d.intervals,
                                *p_min_toi, weighting, mode_of(*p_opts), p_opts->workers);
        for (auto& [zone, rows] : tables.by_zone) {
            if (*p_top > 0 && static_cast<int>(rows.size()) > 2 * *p_top) {
                std::vector<PlayerTableRow> trimmed(rows.begin(), rows.begin() + *p_top);
                trimmed.insert(trimmed.end(), rows.end() - *p_top, rows.end());
                rows = std::move(trimmed);
            }
            const std::string base = std::string("players_") + to_string(zone);
            if (p_opts->format == "json") {
                auto out = open_out(*p_opts, base + ".json");
                write_player_table_json(rows, out);
            } else {
                auto out = open_out(*p_opts, base + ".csv");
                write_player_table_csv(rows, out);
            }
        }
    });

    // wowy
    auto w_opts = std::make_shared<CommonOpts>();
    auto w_player = std::make_shared<std::string>();
    auto w_team = std::make_shared<std::string>();
    auto w_tw = std::make_shared<bool>(false);
    auto* wowy_cmd = app.add_subcommand("wowy", "with/without split for one player");
    add_common(wowy_cmd, *w_opts);
    wowy_cmd->add_option("--player", *w_player, "player id")->required();
    wowy_cmd->add_option("--team", *w_team, "team id (defaults to the player's shift team)");
    wowy_cmd->add_flag("--time-weighted-wowy", *w_tw, "pool by time instead of sequence means");
    wowy_cmd->callback([w_opts, w_player, w_team, w_tw] {
        LoadedData d = load(*w_opts);
        if (d.shifts.empty()) throw std::runtime_error("wowy requires --shifts");
        std::string team = *w_team;
        if (team.empty()) {
            for (const Shift& s : d.shifts)
                if (s.player_id == *w_player) {
                    team = s.team_id;
                    break;
                }
            if (team.empty()) throw std::runtime_error("player has no shifts: " + *w_player);
        }
        auto seqs = build_sequences(d.log, {}, w_opts->workers);
        auto zonal = split_by_zone(seqs, d.log, d.rink);
        const ShiftIndex index(d.shifts);
        const auto weighting =
            *w_tw ? WowyWeighting::time_weighted : WowyWeighting::per_sequence;
        const auto rows = wowy_player(d.log, zonal, filter_of(*w_opts), index, team, *w_player,
                                      weighting, w_opts->workers);
        auto out = open_out(*w_opts, "wowy_" + *w_player + ".csv");
        write_wowy_csv(rows, out);
    });

    // entries
    auto e_opts = std::make_shared<CommonOpts>();
    auto e_window = std::make_shared<double>(5.0);
    auto* entries_cmd = app.add_subcommand("entries", "zone-entry danger table");
    add_common(entries_cmd, *e_opts);
    entries_cmd->add_option("--entry-shot-window", *e_window, "seconds after entry for shots");
    entries_cmd->callback([e_opts, e_window] {
        LoadedData d = load(*e_opts);
        auto seqs = build_sequences(d.log, {}, e_opts->workers);
        const auto mp = filter_of(*e_opts).manpower;
        const EntryTableResult result = entry_table(d.log, seqs, *e_window, mp);
        if (e_opts->format == "json") {
            auto out = open_out(*e_opts, "entries.json");
            write_entry_table_json(result, out);
        } else {
            auto out = open_out(*e_opts, "entries.csv");
            write_entry_table_csv(result, out);
        }
    });

    // shots
    auto s_opts = std::make_shared<CommonOpts>();
    auto s_window = std::make_shared<double>(5.0);
    auto* shots_cmd = app.add_subcommand("shots", "pre-shot pace quintiles");
    add_common(shots_cmd, *s_opts);
    shots_cmd->add_option("--window", *s_window, "pre-shot window in seconds");
    shots_cmd->callback([s_opts, s_window] {
        LoadedData d = load(*s_opts);
        auto seqs = build_sequences(d.log, {}, s_opts->workers);
        const auto rows =
            preshot_quintiles(d.log, seqs, d.rink, *s_window, filter_of(*s_opts).manpower);
        auto out = open_out(*s_opts, "preshot_quintiles.csv");
        write_quintiles_csv(rows, out);
    });

    // passes
    auto pa_opts = std::make_shared<CommonOpts>();
    auto* passes_cmd = app.add_subcommand("passes", "pass speed by type and reception outcome");
    add_common(passes_cmd, *pa_opts);
    passes_cmd->callback([pa_opts] {
        LoadedData d = load(*pa_opts);
        const auto result = pass_reception_speeds(d.log, filter_of(*pa_opts).manpower);
        auto out = open_out(*pa_opts, "pass_speeds.csv");
        write_pass_speeds_csv(result, out);
    });

    // tendencies
    auto td_opts = std::make_shared<CommonOpts>();
    auto td_by = std::make_shared<std::string>("league");
    auto* tend_cmd = app.add_subcommand("tendencies", "per-game and per-60 tendency counters");
    add_common(tend_cmd, *td_opts);
    tend_cmd->add_option("--by", *td_by, "league|season|period")
        ->check(CLI::IsMember({"league", "season", "period"}));
    tend_cmd->callback([td_opts, td_by] {
        LoadedData d = load(*td_opts);
        auto seqs = build_sequences(d.log, {}, td_opts->workers);
        auto zonal = split_by_zone(seqs, d.log, d.rink);
        TendencyGroupBy by = TendencyGroupBy::league;
        if (*td_by == "season") by = TendencyGroupBy::season;
        else if (*td_by == "period") by = TendencyGroupBy::period;
        const auto rows = tendency_counters(d.log, zonal, d.intervals, by, d.rink);
        auto out = open_out(*td_opts, "tendencies.csv");
        write_tendencies_csv(rows, out);
    });

    // generate
    auto g_opts = std::make_shared<CommonOpts>();
    auto g_cfg = std::make_shared<GenConfig>();
    auto g_mult_team = std::make_shared<std::string>();
    auto g_mult = std::make_shared<double>(1.0);
    auto g_n_teams = std::make_shared<int>(4);
    auto* gen_cmd = app.add_subcommand("generate", "seeded synthetic season with a truth ledger");
    gen_cmd->add_option("--seed", g_cfg->seed, "RNG seed")->required();
    gen_cmd->add_option("--games", g_cfg->n_games, "number of games");
    gen_cmd->add_option("--n-teams", *g_n_teams, "number of teams");
    gen_cmd->add_option("--mult-team", *g_mult_team, "team id to boost in every zone");
    gen_cmd->add_option("--mult", *g_mult, "speed multiplier for --mult-team");
    gen_cmd->add_option("--pp-per-period", g_cfg->pp_per_period, "power plays per period");
    gen_cmd->add_flag("--ledger-cells", g_cfg->ledger_cells,
                      "supersampled cell traversal in the ledger (slow)");
    gen_cmd->add_option("--out-dir", g_opts->output_dir, "dataset directory")->required();
    gen_cmd->callback([g_opts, g_cfg, g_mult_team, g_mult, g_n_teams] {
        GenConfig cfg = *g_cfg;
        for (int i = 1; i <= *g_n_teams; ++i) {
            TeamGenConfig t;
            t.id = "T" + std::string(i < 10 ? "0" : "") + std::to_string(i);
            if (t.id == *g_mult_team) t.mult_dz = t.mult_nz = t.mult_oz = *g_mult;
            cfg.teams.push_back(t);
        }
        const SynthResult result = generate(cfg);
        write_dataset(result, g_opts->output_dir);
        std::cout << "generated " << result.log.events.size() << " events, "
                  << result.ledger.samples.size() << " ledger samples\n";
    });

    std::vector<const char*> argv;
    argv.push_back("pace");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    try {
        return run_app(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}

} // namespace pace

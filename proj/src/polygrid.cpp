#include "pace/polygrid.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include "pace/csv.hpp"

namespace pace {

namespace {

constexpr double kTeeMerge = 1e-12;  // crossing parameters closer than this coincide

int div_cells(double extent, double cell) {
    return static_cast<int>(std::ceil(extent / cell - 1e-9));
}

} // namespace

int Polygrid::valid_count() const {
    int n = 0;
    for (auto v : valid) n += v;
    return n;
}

int Polygrid::cell_of_point(double x, double y) const {
    int col = static_cast<int>(std::floor((x - origin_x) / spec.cell_size_ft));
    int row = static_cast<int>(std::floor((y - origin_y) / spec.cell_size_ft));
    col = std::clamp(col, 0, n_cols - 1);
    row = std::clamp(row, 0, n_rows - 1);
    return cell(col, row);
}

Polygrid build_grid(const RinkSpec& spec) {
    spec.check();
    Polygrid g;
    g.spec = spec;
    g.n_cols = div_cells(spec.length_ft, spec.cell_size_ft);
    g.n_rows = div_cells(spec.width_ft, spec.cell_size_ft);
    g.origin_x = -0.5 * g.n_cols * spec.cell_size_ft;
    g.origin_y = -0.5 * g.n_rows * spec.cell_size_ft;
    const int n = g.n_cols * g.n_rows;
    g.dist_ft.assign(n, 0.0);
    g.time_s.assign(n, 0.0);
    g.valid.assign(n, 0);

    // The rink is the set of points within corner_radius of the core
    // rectangle; a cell is valid iff its rectangle comes that close.
    const double core_x = spec.half_length() - spec.corner_radius_ft;
    const double core_y = spec.half_width() - spec.corner_radius_ft;
    const double r2 = spec.corner_radius_ft * spec.corner_radius_ft;
    for (int row = 0; row < g.n_rows; ++row) {
        for (int col = 0; col < g.n_cols; ++col) {
            const double x0 = g.origin_x + col * spec.cell_size_ft;
            const double x1 = x0 + spec.cell_size_ft;
            const double y0 = g.origin_y + row * spec.cell_size_ft;
            const double y1 = y0 + spec.cell_size_ft;
            const double dx = std::max({0.0, -core_x - x1, x0 - core_x});
            const double dy = std::max({0.0, -core_y - y1, y0 - core_y});
            if (dx * dx + dy * dy <= r2) g.valid[g.cell(col, row)] = 1;
        }
    }
    return g;
}

namespace {

// Sorted, deduplicated crossing parameters spanning [0, 1].
void crossing_params(double g0, double g1, double cell, std::vector<double>& ts) {
    if (g0 == g1) return;
    const double lo = std::min(g0, g1), hi = std::max(g0, g1);
    const int klo = static_cast<int>(std::ceil(lo / cell));
    const int khi = static_cast<int>(std::floor(hi / cell));
    const double d = g1 - g0;
    for (int k = klo; k <= khi; ++k) {
        double t = (k * cell - g0) / d;
        ts.push_back(std::clamp(t, 0.0, 1.0));
    }
}

// (cell, parameter length) runs along the segment, path order.
std::vector<CellShare> walk_segment(NormalizedPoint a, NormalizedPoint b, const Polygrid& grid) {
    if (!grid.spec.contains(a.x_north, a.y_east) || !grid.spec.contains(b.x_north, b.y_east))
        throw std::runtime_error("segment endpoint outside rink");

    const double cell = grid.spec.cell_size_ft;
    const double gx0 = a.x_north - grid.origin_x, gy0 = a.y_east - grid.origin_y;
    const double gx1 = b.x_north - grid.origin_x, gy1 = b.y_east - grid.origin_y;

    if (gx0 == gx1 && gy0 == gy1)
        return {{grid.cell_of_point(a.x_north, a.y_east), 1.0}};

    std::vector<double> ts;
    ts.push_back(0.0);
    ts.push_back(1.0);
    crossing_params(gx0, gx1, cell, ts);
    crossing_params(gy0, gy1, cell, ts);
    std::sort(ts.begin(), ts.end());

    std::vector<double> merged;
    merged.push_back(ts.front());
    for (double t : ts)
        if (t - merged.back() > kTeeMerge) merged.push_back(t);
    merged.front() = 0.0;
    merged.back() = 1.0;

    std::vector<CellShare> out;
    const double dx = gx1 - gx0, dy = gy1 - gy0;
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        const double t0 = merged[i], t1 = merged[i + 1];
        const double tm = 0.5 * (t0 + t1);
        int col = static_cast<int>(std::floor((gx0 + tm * dx) / cell));
        int row = static_cast<int>(std::floor((gy0 + tm * dy) / cell));
        col = std::clamp(col, 0, grid.n_cols - 1);
        row = std::clamp(row, 0, grid.n_rows - 1);
        const std::int32_t c = grid.cell(col, row);
        if (!out.empty() && out.back().cell == c)
            out.back().fraction += t1 - t0;
        else
            out.push_back({c, t1 - t0});
    }
    return out;
}

} // namespace

std::vector<std::int32_t> traverse(NormalizedPoint a, NormalizedPoint b, const Polygrid& grid) {
    std::vector<std::int32_t> cells;
    for (const CellShare& s : walk_segment(a, b, grid)) cells.push_back(s.cell);
    return cells;
}

std::vector<CellShare> traverse_with_shares(NormalizedPoint a, NormalizedPoint b,
                                            const Polygrid& grid) {
    return walk_segment(a, b, grid);
}

void accumulate(Polygrid& grid, const PaceSample& sample, AllocMode mode) {
    const auto shares = walk_segment(sample.from_pt, sample.to_pt, grid);
    const double k = static_cast<double>(shares.size());
    for (const CellShare& s : shares) {
        const double f = mode == AllocMode::equal_split ? 1.0 / k : s.fraction;
        const double d = sample.d_total * f;
        const double t = sample.dt * f;
        if (grid.valid[s.cell]) {
            grid.dist_ft[s.cell] += d;
            grid.time_s[s.cell] += t;
        } else {
            grid.leak_dist_ft += d;
            grid.leak_time_s += t;
        }
    }
}

void merge(Polygrid& into, const Polygrid& from) {
    if (into.spec != from.spec || into.n_cols != from.n_cols || into.n_rows != from.n_rows)
        throw std::runtime_error("polygrid spec mismatch in merge");
    for (std::size_t i = 0; i < into.dist_ft.size(); ++i) {
        into.dist_ft[i] += from.dist_ft[i];
        into.time_s[i] += from.time_s[i];
    }
    into.leak_dist_ft += from.leak_dist_ft;
    into.leak_time_s += from.leak_time_s;
}

Polygrid accumulate_sequences(const EventLog& log, const std::vector<PossessionSequence>& seqs,
                              const RinkSpec& spec, const PaceFilter& filter, bool mirror,
                              AllocMode mode, int workers) {
    const int n_games = static_cast<int>(log.games.size());
    std::vector<std::vector<std::uint32_t>> seq_by_game(n_games);
    for (std::uint32_t i = 0; i < seqs.size(); ++i)
        seq_by_game[seqs[i].game_index].push_back(i);

    std::vector<Polygrid> partial(n_games);
#if defined(_OPENMP)
    if (workers < 1) workers = omp_get_max_threads();
#else
    workers = 1;
#endif
#pragma omp parallel for schedule(dynamic) num_threads(workers)
    for (int g = 0; g < n_games; ++g) {
        partial[g] = build_grid(spec);
        for (std::uint32_t i : seq_by_game[g]) {
            const PossessionSequence& seq = seqs[i];
            if (!filter.accepts(seq, log)) continue;
            for (PaceSample s : pace_samples(seq, log)) {
                if (mirror) {
                    s.from_pt = {-s.from_pt.x_north, -s.from_pt.y_east};
                    s.to_pt = {-s.to_pt.x_north, -s.to_pt.y_east};
                }
                accumulate(partial[g], s, mode);
            }
        }
    }

    Polygrid total = build_grid(spec);
    for (int g = 0; g < n_games; ++g) merge(total, partial[g]);
    return total;
}

SpeedGrid speed_grid(const Polygrid& grid, double tau_s) {
    SpeedGrid g;
    g.spec = grid.spec;
    g.n_cols = grid.n_cols;
    g.n_rows = grid.n_rows;
    const std::size_t n = grid.dist_ft.size();
    g.value.assign(n, 0.0);
    g.defined.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!grid.valid[i]) continue;
        if (grid.time_s[i] >= tau_s && grid.time_s[i] > 0.0) {
            g.value[i] = grid.dist_ft[i] / grid.time_s[i];
            g.defined[i] = 1;
        }
    }
    return g;
}

SpeedGrid smooth(const SpeedGrid& g, double sigma_cells) {
    SpeedGrid out = g;
    const double inv2s2 = 1.0 / (2.0 * sigma_cells * sigma_cells);
    for (int row = 0; row < g.n_rows; ++row) {
        for (int col = 0; col < g.n_cols; ++col) {
            const int c = g.cell(col, row);
            if (!g.defined[c]) continue;
            double num = 0, den = 0;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    const int nc = col + dc, nr = row + dr;
                    if (nc < 0 || nc >= g.n_cols || nr < 0 || nr >= g.n_rows) continue;
                    const int cc = g.cell(nc, nr);
                    if (!g.defined[cc]) continue;
                    const double w = std::exp(-(dc * dc + dr * dr) * inv2s2);
                    num += w * g.value[cc];
                    den += w;
                }
            }
            out.value[c] = num / den;
        }
    }
    return out;
}

SpeedGrid diff(const SpeedGrid& a, const SpeedGrid& b, bool pre_smooth, double sigma_cells) {
    if (a.spec != b.spec || a.n_cols != b.n_cols || a.n_rows != b.n_rows)
        throw std::runtime_error("speed grid spec mismatch in diff");
    SpeedGrid tmp_a, tmp_b;
    const SpeedGrid* pa = &a;
    const SpeedGrid* pb = &b;
    if (pre_smooth) {
        tmp_a = smooth(a, sigma_cells);
        tmp_b = smooth(b, sigma_cells);
        pa = &tmp_a;
        pb = &tmp_b;
    }
    SpeedGrid out;
    out.spec = a.spec;
    out.n_cols = a.n_cols;
    out.n_rows = a.n_rows;
    out.value.assign(a.value.size(), 0.0);
    out.defined.assign(a.value.size(), 0);
    for (std::size_t i = 0; i < a.value.size(); ++i) {
        if (pa->defined[i] && pb->defined[i]) {
            out.value[i] = pa->value[i] - pb->value[i];
            out.defined[i] = 1;
        }
    }
    return out;
}

void write_speed_grid_csv(const SpeedGrid& g, std::ostream& out) {
    csv::Writer w(out);
    for (int row = 0; row < g.n_rows; ++row) {
        for (int col = 0; col < g.n_cols; ++col) {
            const int c = g.cell(col, row);
            if (g.defined[c]) w.field(g.value[c]);
            else w.field("");
        }
        w.end_row();
    }
}

void write_accumulators_csv(const Polygrid& g, std::ostream& out) {
    csv::Writer w(out);
    out << "# dist_ft\n";
    for (int row = 0; row < g.n_rows; ++row) {
        for (int col = 0; col < g.n_cols; ++col) w.field(g.dist_ft[g.cell(col, row)]);
        w.end_row();
    }
    out << "# time_s\n";
    for (int row = 0; row < g.n_rows; ++row) {
        for (int col = 0; col < g.n_cols; ++col) w.field(g.time_s[g.cell(col, row)]);
        w.end_row();
    }
}

} // namespace pace

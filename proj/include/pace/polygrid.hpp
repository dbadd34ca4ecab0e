#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "pace/events.hpp"
#include "pace/metrics.hpp"
#include "pace/rink.hpp"
#include "pace/sequencer.hpp"

namespace pace {

/// Per-cell distance/time accumulators over the rink. Cells are
/// cell_size_ft squares, row-major, column 0 at the -x end (the team's
/// DZ on the left). The grid spans the smallest cell-aligned box
/// centered on the rink; when the dimensions divide evenly (all
/// presets' length, NHL width) it coincides with the rink exactly.
/// Cells with no in-rink point are invalid and never hold accumulation.
struct Polygrid {
    RinkSpec spec;
    int n_cols = 0;
    int n_rows = 0;
    double origin_x = 0;  // -x edge of column 0
    double origin_y = 0;  // -y edge of row 0
    std::vector<double> dist_ft;
    std::vector<double> time_s;
    std::vector<std::uint8_t> valid;
    double leak_dist_ft = 0;  // accumulation landing in invalid cells
    double leak_time_s = 0;

    int cell(int col, int row) const { return row * n_cols + col; }
    int col_of(int cell) const { return cell % n_cols; }
    int row_of(int cell) const { return cell / n_cols; }
    int valid_count() const;
    int cell_of_point(double x, double y) const;  // boundary points resolve upward
};

Polygrid build_grid(const RinkSpec& spec);

/// Cells crossed by the segment, in path order: exactly those the
/// segment spends positive length in. A pass through a lattice corner
/// yields only the two diagonal cells; a zero-length segment yields its
/// containing cell. Endpoints must be inside the rink.
std::vector<std::int32_t> traverse(NormalizedPoint a, NormalizedPoint b, const Polygrid& grid);

/// Same cells plus the fraction of the segment length inside each.
struct CellShare {
    std::int32_t cell;
    double fraction;
};
std::vector<CellShare> traverse_with_shares(NormalizedPoint a, NormalizedPoint b,
                                            const Polygrid& grid);

enum class AllocMode { equal_split, chord_length };

/// Adds the sample's distance and time to every crossed cell — equal
/// shares by default, chord-proportional behind the flag. Shares that
/// land in invalid cells are tallied as leakage and excluded from
/// exports.
void accumulate(Polygrid& grid, const PaceSample& sample, AllocMode mode = AllocMode::equal_split);

/// Cellwise merge; grids must share a spec.
void merge(Polygrid& into, const Polygrid& from);

/// Accumulates all samples of the accepted sequences, sharded by game
/// and merged in sorted-game order (worker count never changes the
/// result). Mirror rotates every segment 180 degrees (defending view).
Polygrid accumulate_sequences(const EventLog& log, const std::vector<PossessionSequence>& seqs,
                              const RinkSpec& spec, const PaceFilter& filter, bool mirror = false,
                              AllocMode mode = AllocMode::equal_split, int workers = 1);

/// Per-cell speed with an exposure mask: cells below tau seconds of
/// accumulated time (or invalid) carry no value.
struct SpeedGrid {
    RinkSpec spec;
    int n_cols = 0;
    int n_rows = 0;
    std::vector<double> value;
    std::vector<std::uint8_t> defined;

    int cell(int col, int row) const { return row * n_cols + col; }
};

SpeedGrid speed_grid(const Polygrid& grid, double tau_s);

/// 3x3 Gaussian-weighted average, renormalized over defined neighbors;
/// undefined cells stay undefined. Constant fields are fixed points.
SpeedGrid smooth(const SpeedGrid& g, double sigma_cells = 0.5);

/// Cellwise a - b where both are defined; optional pre-smoothing of both
/// inputs. Throws on spec mismatch.
SpeedGrid diff(const SpeedGrid& a, const SpeedGrid& b, bool pre_smooth, double sigma_cells = 0.5);

/// Matrix CSV: rows from -width/2, columns from -length/2; undefined
/// cells are empty fields.
void write_speed_grid_csv(const SpeedGrid& g, std::ostream& out);

/// Raw accumulator matrices for debugging.
void write_accumulators_csv(const Polygrid& g, std::ostream& out);

} // namespace pace

#pragma once

#include "pace/metrics.hpp"
#include "pace/polygrid.hpp"

namespace pace::reference {

/// Plain single-pass counterparts of the sharded parallel kernels, kept
/// for cross-checking and benchmarking. They walk the whole stream in
/// order with no per-game partials.

std::vector<PossessionSequence> build_sequences(const EventLog& log,
                                                const SequencerConfig& cfg = {});

GroupedSpeed aggregate_sequences(const EventLog& log, const std::vector<PossessionSequence>& seqs,
                                 const KeyDims& dims, const PaceFilter& filter);

Polygrid accumulate_sequences(const EventLog& log, const std::vector<PossessionSequence>& seqs,
                              const RinkSpec& spec, const PaceFilter& filter, bool mirror = false,
                              AllocMode mode = AllocMode::equal_split);

SpeedGrid smooth(const SpeedGrid& g, double sigma_cells = 0.5);

} // namespace pace::reference

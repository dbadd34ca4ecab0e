// Times the sharded OpenMP kernels against the plain serial reference on
// a generated season: sequencing, zonal aggregation, and polygrid
// accumulation.

#include <chrono>
#include <cstdio>
#include <string>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include "pace/metrics.hpp"
#include "pace/polygrid.hpp"
#include "pace/reference.hpp"
#include "pace/sequencer.hpp"
#include "pace/synth.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename F>
double timed(const char* label, F&& f) {
    const auto start = Clock::now();
    f();
    const double s = seconds_since(start);
    std::printf("  %-34s %8.3f s\n", label, s);
    return s;
}

} // namespace

int main(int argc, char** argv) {
    int games = 120;
    if (argc > 1) games = std::atoi(argv[1]);

    pace::GenConfig cfg;
    cfg.seed = 7;
    cfg.n_games = games;

    std::printf("generating %d games...\n", games);
    const auto start = Clock::now();
    const pace::SynthResult synth = pace::generate(cfg);
    std::printf("  %zu events in %.3f s\n", synth.log.size(), seconds_since(start));

    int threads = 1;
#if defined(_OPENMP)
    threads = omp_get_max_threads();
#endif
    std::printf("threads: %d\n", threads);

    std::vector<pace::PossessionSequence> seqs_serial, seqs_parallel;
    std::printf("sequencing:\n");
    const double t_seq_ser =
        timed("serial reference", [&] { seqs_serial = pace::reference::build_sequences(synth.log); });
    const double t_seq_par = timed("sharded (all threads)", [&] {
        seqs_parallel = pace::build_sequences(synth.log, {}, threads);
    });

    auto zonal = pace::split_by_zone(seqs_parallel, synth.log, cfg.rink);
    pace::KeyDims dims;
    dims.team = true;
    dims.zone = true;
    pace::PaceFilter filter;
    filter.manpower = pace::Manpower{5, 5};

    pace::GroupedSpeed agg_serial, agg_parallel;
    std::printf("zonal aggregation:\n");
    const double t_agg_ser = timed("serial reference", [&] {
        agg_serial = pace::reference::aggregate_sequences(synth.log, zonal, dims, filter);
    });
    const double t_agg_par = timed("sharded (all threads)", [&] {
        agg_parallel = pace::aggregate_sequences(synth.log, zonal, dims, filter, threads);
    });

    pace::Polygrid grid_serial, grid_parallel;
    std::printf("polygrid accumulation:\n");
    const double t_grid_ser = timed("serial reference", [&] {
        grid_serial =
            pace::reference::accumulate_sequences(synth.log, seqs_parallel, cfg.rink, filter);
    });
    const double t_grid_par = timed("sharded (all threads)", [&] {
        grid_parallel = pace::accumulate_sequences(synth.log, seqs_parallel, cfg.rink, filter,
                                                   false, pace::AllocMode::equal_split, threads);
    });

    std::printf("speedups: sequencing %.2fx, aggregation %.2fx, polygrid %.2fx\n",
                t_seq_ser / t_seq_par, t_agg_ser / t_agg_par, t_grid_ser / t_grid_par);

    // Cross-checks so the benchmark doubles as a smoke test.
    bool ok = seqs_serial.size() == seqs_parallel.size() &&
              agg_serial.size() == agg_parallel.size();
    double max_rel = 0;
    for (const auto& [key, sv] : agg_serial) {
        auto it = agg_parallel.find(key);
        if (it == agg_parallel.end()) {
            ok = false;
            break;
        }
        const double a = sv.sum_d_total, b = it->second.sum_d_total;
        if (a != 0) max_rel = std::max(max_rel, std::abs(a - b) / std::abs(a));
    }
    std::printf("serial vs sharded: %s (max rel diff %.2e)\n", ok ? "consistent" : "MISMATCH",
                max_rel);
    return ok ? 0 : 1;
}

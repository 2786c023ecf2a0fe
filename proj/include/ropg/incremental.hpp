#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ropg/potential.hpp"

namespace ropg {

// Counters after t placed values. occupied_* count non-empty rows/columns,
// greens counts entries that opened a row and a column simultaneously (these
// are exactly the equilibria of the finished game). simple_cols/simple_greens
// are the coupled auxiliary processes driven by the first-candidate
// no-resample events; resample_events counts the steps where the first
// candidate was already occupied. 0 <= occupied_cols - simple_cols <=
// resample_events at every step.
struct IncrementalSnapshot {
    std::int64_t t = 0;
    int occupied_rows = 0;
    int occupied_cols = 0;
    int greens = 0;
    int simple_cols = 0;
    int simple_greens = 0;
    std::int64_t resample_events = 0;
};

struct GreenEntry {
    ActionProfile profile;
    std::int32_t value = 0;
};

struct IncrementalTrace {
    int k = 0;
    IncrementalSnapshot final_state;
    std::vector<IncrementalSnapshot> snapshots;  // one per step incl. t=0 when recorded
    std::vector<GreenEntry> greens;              // placement order == equilibrium rank order
    std::optional<std::int64_t> tau;             // first t with greens == stopping target
    std::optional<Potential> final_potential;    // present when the grid was filled
};

struct IncrementalOptions {
    bool record_trace = false;
    std::int64_t max_steps = -1;      // -1: run to K^2
    int stop_at_greens = 0;           // >0: stop at the step reaching this green count
    bool complete_after_stop = true;  // fill the remaining cells uniformly after stopping
};

// Low-level engine; the named constructions below are thin wrappers.
IncrementalTrace run_incremental(int k, std::uint64_t seed, const IncrementalOptions& options);

// Full incremental construction of a potential: value 1 goes to (1,1) and is
// green; each later value opens a new row with probability (K-R)K/(K^2-t)
// (R, t the pre-step state), then a new column with probability (K-C)/K, or
// lands uniformly on an empty cell of the occupied rows. Produces a complete
// game whose equilibria are exactly the green entries.
IncrementalTrace incremental_construct(int k, std::uint64_t seed, bool record_trace = false);

// Incremental construction stopped at tau = first t with floor(eps*K) greens,
// then completed by placing the remaining values uniformly on the empty
// cells. With complete=false only the stopped state is built (the estimators
// of tau/K, R_tau/K, C_tau/K never read the completion).
IncrementalTrace epsilon_stopped_construct(int k, double epsilon, std::uint64_t seed,
                                           bool complete = true, bool record_trace = false);

// Runs the construction for t_max steps with per-step snapshots; used for
// fluid-limit and resample-count experiments.
IncrementalTrace simulate_aux_processes(int k, std::uint64_t seed, std::int64_t t_max);

// CSV with header t,R,C,G,C_tilde,G_tilde,D.
std::string trace_to_csv(const IncrementalTrace& trace);

}  // namespace ropg

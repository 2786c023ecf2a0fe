#pragma once

#include <cstdint>
#include <vector>

#include "ropg/exact.hpp"
#include "ropg/potential.hpp"

namespace ropg {

// One best-response run. The row player moves first; moves alternate. The
// path keeps stationary mid-run steps (so even->odd transitions only ever
// change the row and odd->even only the column) but drops trailing repeats
// once the absorbing profile has been reached.
struct BRDTrace {
    ActionProfile start;
    std::vector<ActionProfile> path;  // path[0] == start, last == absorbed_at
    ActionProfile absorbed_at;
    int steps_to_absorb = 0;   // profile-changing steps only
    int total_iterations = 0;  // all executed steps, stationary checks included
    int absorbed_rank = 0;     // rank of the absorbing equilibrium
};

// Basin of attraction per equilibrium rank. Basins are unions of full
// columns: the first BRD move is along the row, so absorption depends only
// on the starting column.
struct BasinMap {
    std::vector<int> column_to_rank;        // index c-1 -> rank
    std::vector<std::int64_t> basin_sizes;  // index rank-1 -> cell count (multiple of K)
};

// Row/column argmin tables and ranked equilibria for one game; shared
// precompute that makes each BRD step O(1).
struct GameAnalysis {
    int k = 0;
    std::vector<int> row_best_col;   // 1-based column of each row's minimum
    std::vector<int> col_best_row;   // 1-based row of each column's minimum
    EquilibriumSet equilibria;
    std::vector<int> eq_rank_by_row;  // 0 when the row holds no equilibrium
};

GameAnalysis analyze_game(const Potential& p);

BRDTrace brd_run(const Potential& p, ActionProfile start);
BRDTrace brd_run(const Potential& p, const GameAnalysis& analysis, ActionProfile start);

BasinMap compute_basins(const Potential& p);
BasinMap compute_basins(const Potential& p, const GameAnalysis& analysis);

// Probability that a BRD on a uniform game follows one fixed admissible
// path of `path_length` moves: prod_{t=1..T} 1/(tK - h(t)) with
// h(t) = sum_{i<=t} floor(i/2). Exact.
Rational path_probability(int k, int path_length);

}  // namespace ropg

#include "ropg/brd.hpp"

#include <limits>
#include <stdexcept>

#include "ropg/theory.hpp"

namespace ropg {

GameAnalysis analyze_game(const Potential& p) {
    const int k = p.k();
    GameAnalysis a;
    a.k = k;
    a.row_best_col.resize(k);
    a.col_best_row.resize(k);
    std::vector<std::int32_t> col_best(k, std::numeric_limits<std::int32_t>::max());
    const auto& values = p.values();
    for (int r = 0; r < k; ++r) {
        const std::int32_t* row = values.data() + static_cast<std::size_t>(r) * k;
        std::int32_t best = row[0];
        int best_c = 0;
        for (int c = 0; c < k; ++c) {
            const std::int32_t v = row[c];
            if (v < best) {
                best = v;
                best_c = c;
            }
            if (v < col_best[c]) {
                col_best[c] = v;
                a.col_best_row[c] = r + 1;
            }
        }
        a.row_best_col[r] = best_c + 1;
    }
    std::vector<Equilibrium> eqs;
    for (int r = 1; r <= k; ++r) {
        const int c = a.row_best_col[r - 1];
        if (a.col_best_row[c - 1] == r) eqs.push_back({{r, c}, p.at(r, c), 0});
    }
    a.equilibria = EquilibriumSet(std::move(eqs));
    a.eq_rank_by_row.assign(k, 0);
    for (const auto& e : a.equilibria) a.eq_rank_by_row[e.profile.row - 1] = e.rank;
    return a;
}

BRDTrace brd_run(const Potential& p, ActionProfile start) {
    return brd_run(p, analyze_game(p), start);
}

BRDTrace brd_run(const Potential& p, const GameAnalysis& analysis, ActionProfile start) {
    const int k = p.k();
    if (start.row < 1 || start.row > k || start.col < 1 || start.col > k)
        throw std::invalid_argument("BRD start profile out of range");

    BRDTrace trace;
    trace.start = start;
    trace.path.push_back(start);

    ActionProfile current = start;
    bool row_turn = true;  // player A (rows) moves at even times
    int stationary_streak = 0;
    std::size_t last_change_index = 0;
    const int max_iterations = 2 * k + 2;

    while (stationary_streak < 2) {
        if (trace.total_iterations > max_iterations)
            throw std::logic_error("BRD failed to absorb within 2K+2 steps");
        ActionProfile next = current;
        if (row_turn) {
            next.row = analysis.col_best_row[current.col - 1];
        } else {
            next.col = analysis.row_best_col[current.row - 1];
        }
        ++trace.total_iterations;
        trace.path.push_back(next);
        if (next == current) {
            ++stationary_streak;
        } else {
            stationary_streak = 0;
            ++trace.steps_to_absorb;
            last_change_index = trace.path.size() - 1;
        }
        current = next;
        row_turn = !row_turn;
    }

    trace.path.resize(last_change_index + 1);
    trace.absorbed_at = current;
    const int rank = analysis.eq_rank_by_row[current.row - 1];
    if (rank == 0 ||
        analysis.equilibria.by_rank(rank).profile != current)
        throw std::logic_error("BRD absorbed at a non-equilibrium profile");
    trace.absorbed_rank = rank;
    return trace;
}

BasinMap compute_basins(const Potential& p) {
    return compute_basins(p, analyze_game(p));
}

namespace {

// Absorption walk along precomputed minima; equivalent to brd_run from
// (1, start_col) but without trace bookkeeping.
ActionProfile absorb_from_column(const GameAnalysis& analysis, int start_col) {
    int col = start_col;
    int row = analysis.col_best_row[col - 1];
    for (int step = 0; step <= 2 * analysis.k + 2; ++step) {
        const int next_col = analysis.row_best_col[row - 1];
        if (next_col == col) return {row, col};
        col = next_col;
        const int next_row = analysis.col_best_row[col - 1];
        if (next_row == row) return {row, col};
        row = next_row;
    }
    throw std::logic_error("BRD failed to absorb within 2K+2 steps");
}

}  // namespace

BasinMap compute_basins(const Potential& p, const GameAnalysis& analysis) {
    const int k = p.k();
    BasinMap map;
    map.column_to_rank.resize(k);
    map.basin_sizes.assign(analysis.equilibria.count(), 0);
    for (int c = 1; c <= k; ++c) {
        const ActionProfile absorbed = absorb_from_column(analysis, c);
        const int rank = analysis.eq_rank_by_row[absorbed.row - 1];
        map.column_to_rank[c - 1] = rank;
        map.basin_sizes[rank - 1] += k;
    }
    return map;
}

Rational path_probability(int k, int path_length) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (path_length < 1 || path_length > 2 * k)
        throw std::invalid_argument("path length must lie in [1, 2K]");
    Rational prob = 1;
    for (int t = 1; t <= path_length; ++t) {
        const std::int64_t denom =
            static_cast<std::int64_t>(t) * k - cumulative_floor_half(t);
        prob /= denom;
    }
    return prob;
}

}  // namespace ropg

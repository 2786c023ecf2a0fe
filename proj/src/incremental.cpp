#include "ropg/incremental.hpp"

#include <cstdlib>
#include <new>
#include <stdexcept>

#include "ropg/rng.hpp"
#include "ropg/theory.hpp"

namespace ropg {

namespace {

// Zero-initialized int32 grid backed by calloc so that untouched pages stay
// lazily mapped; a stopped construction at k = 10^4 touches only the pages
// it writes.
class ZeroedGrid {
public:
    explicit ZeroedGrid(std::size_t n)
        : data_(static_cast<std::int32_t*>(std::calloc(n, sizeof(std::int32_t)))), size_(n) {
        if (data_ == nullptr) throw std::bad_alloc();
    }
    ~ZeroedGrid() { std::free(data_); }
    ZeroedGrid(const ZeroedGrid&) = delete;
    ZeroedGrid& operator=(const ZeroedGrid&) = delete;

    std::int32_t& cell(int k, int row, int col) {
        return data_[static_cast<std::size_t>(row - 1) * k + (col - 1)];
    }
    const std::int32_t* data() const { return data_; }
    std::size_t size() const { return size_; }

private:
    std::int32_t* data_;
    std::size_t size_;
};

}  // namespace

IncrementalTrace run_incremental(int k, std::uint64_t seed, const IncrementalOptions& options) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (k > kMaxActions) throw std::invalid_argument("k exceeds supported maximum");
    const std::int64_t total_cells = static_cast<std::int64_t>(k) * k;
    std::int64_t step_limit = total_cells;
    if (options.max_steps >= 0) {
        if (options.max_steps > total_cells)
            throw std::invalid_argument("max_steps must not exceed k^2");
        step_limit = options.max_steps;
    }

    Rng rng(seed);
    ZeroedGrid grid(static_cast<std::size_t>(total_cells));

    IncrementalTrace trace;
    trace.k = k;

    std::int64_t t = 0;
    int occupied_rows = 0;
    int occupied_cols = 0;
    int greens = 0;
    int simple_cols = 0;
    int simple_greens = 0;
    std::int64_t resample_events = 0;

    const auto snapshot = [&]() {
        return IncrementalSnapshot{t,           occupied_rows, occupied_cols, greens,
                                   simple_cols, simple_greens, resample_events};
    };
    if (options.record_trace) trace.snapshots.push_back(snapshot());

    while (t < step_limit) {
        const auto value = static_cast<std::int32_t>(t + 1);
        int row_delta = 0;
        int col_delta = 0;
        int simple_col_delta = 0;
        bool green = false;
        ActionProfile placed;

        if (t == 0) {
            placed = {1, 1};
            row_delta = col_delta = simple_col_delta = 1;
            green = true;
        } else {
            const auto new_row_numerator =
                static_cast<std::uint64_t>(k - occupied_rows) * static_cast<std::uint64_t>(k);
            const auto empty_cells = static_cast<std::uint64_t>(total_cells - t);
            if (rng.bernoulli_ratio(new_row_numerator, empty_cells)) {
                row_delta = 1;
                if (rng.bernoulli_ratio(static_cast<std::uint64_t>(k - occupied_cols),
                                        static_cast<std::uint64_t>(k))) {
                    col_delta = 1;
                    placed = {occupied_rows + 1, occupied_cols + 1};
                    green = true;
                } else {
                    placed = {occupied_rows + 1,
                              1 + static_cast<int>(rng.below(
                                      static_cast<std::uint64_t>(occupied_cols)))};
                }
                simple_col_delta = col_delta;
            } else {
                // Uniform empty cell among the occupied rows, realized by
                // resampling; the first candidate drives the coupled
                // no-resample indicator.
                int x = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(occupied_rows)));
                int y = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
                const bool first_candidate_empty = grid.cell(k, x, y) == 0;
                if (!first_candidate_empty) {
                    ++resample_events;
                    do {
                        x = 1 + static_cast<int>(
                                    rng.below(static_cast<std::uint64_t>(occupied_rows)));
                        y = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
                    } while (grid.cell(k, x, y) != 0);
                }
                if (y > occupied_cols) {
                    // An empty column: the new column gets the next label.
                    col_delta = 1;
                    placed = {x, occupied_cols + 1};
                } else {
                    placed = {x, y};
                }
                simple_col_delta = first_candidate_empty ? col_delta : 0;
            }
        }

        grid.cell(k, placed.row, placed.col) = value;
        occupied_rows += row_delta;
        occupied_cols += col_delta;
        simple_cols += simple_col_delta;
        if (row_delta == 1 && simple_col_delta == 1) ++simple_greens;
        if (green) {
            ++greens;
            trace.greens.push_back({placed, value});
        }
        ++t;

        if (options.record_trace) trace.snapshots.push_back(snapshot());
        if (options.stop_at_greens > 0 && greens == options.stop_at_greens && !trace.tau) {
            trace.tau = t;
            break;
        }
    }

    const bool stopped_early = t < total_cells;
    if (stopped_early && trace.tau && options.complete_after_stop) {
        // Uniform bijection of the unplaced values onto the empty cells.
        std::vector<std::int64_t> empty_cells;
        empty_cells.reserve(static_cast<std::size_t>(total_cells - t));
        for (std::int64_t idx = 0; idx < total_cells; ++idx)
            if (grid.data()[idx] == 0) empty_cells.push_back(idx);
        shuffle(empty_cells, rng);
        std::int32_t next_value = static_cast<std::int32_t>(t) + 1;
        std::vector<std::int32_t> values(grid.data(), grid.data() + total_cells);
        for (const std::int64_t idx : empty_cells) values[static_cast<std::size_t>(idx)] = next_value++;
        trace.final_potential = Potential::unchecked(k, std::move(values));
    } else if (!stopped_early && t == total_cells) {
        trace.final_potential = Potential::unchecked(
            k, std::vector<std::int32_t>(grid.data(), grid.data() + total_cells));
    }

    trace.final_state = snapshot();
    return trace;
}

IncrementalTrace incremental_construct(int k, std::uint64_t seed, bool record_trace) {
    IncrementalOptions options;
    options.record_trace = record_trace;
    return run_incremental(k, seed, options);
}

IncrementalTrace epsilon_stopped_construct(int k, double epsilon, std::uint64_t seed,
                                           bool complete, bool record_trace) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw std::invalid_argument("epsilon must lie in (0, 1/2)");
    const int target = floor_epsilon_k(epsilon, k);
    if (target < 1) throw std::invalid_argument("floor(epsilon*k) must be >= 1");
    IncrementalOptions options;
    options.record_trace = record_trace;
    options.stop_at_greens = target;
    options.complete_after_stop = complete;
    return run_incremental(k, seed, options);
}

IncrementalTrace simulate_aux_processes(int k, std::uint64_t seed, std::int64_t t_max) {
    if (t_max < 0) throw std::invalid_argument("t_max must be >= 0");
    IncrementalOptions options;
    options.record_trace = true;
    options.max_steps = t_max;
    options.complete_after_stop = false;
    return run_incremental(k, seed, options);
}

std::string trace_to_csv(const IncrementalTrace& trace) {
    std::string out = "t,R,C,G,C_tilde,G_tilde,D\n";
    const auto append = [&out](const IncrementalSnapshot& s) {
        out += std::to_string(s.t);
        out += ',';
        out += std::to_string(s.occupied_rows);
        out += ',';
        out += std::to_string(s.occupied_cols);
        out += ',';
        out += std::to_string(s.greens);
        out += ',';
        out += std::to_string(s.simple_cols);
        out += ',';
        out += std::to_string(s.simple_greens);
        out += ',';
        out += std::to_string(s.resample_events);
        out += '\n';
    };
    if (trace.snapshots.empty()) {
        append(trace.final_state);
    } else {
        for (const auto& s : trace.snapshots) append(s);
    }
    return out;
}

}  // namespace ropg

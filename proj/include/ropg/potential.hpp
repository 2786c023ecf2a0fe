#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ropg/exact.hpp"
#include "ropg/rng.hpp"

namespace ropg {

// Largest supported action count: keeps every rank value within int32.
inline constexpr int kMaxActions = 46340;

// One action per player; 1-based, matching the K x K matrix view.
struct ActionProfile {
    int row = 0;
    int col = 0;

    friend bool operator==(const ActionProfile&, const ActionProfile&) = default;
};

// A strict ordinal potential game with K actions per player. The grid holds
// each rank 1..K^2 exactly once (row-major); lower rank = better outcome.
// The grid is the whole game: it determines preferences, equilibria and
// best-response behaviour. Immutable after construction.
class Potential {
public:
    // Validates that `values` is a bijection onto {1,...,k^2}.
    Potential(int k, std::vector<std::int32_t> values);

    // Skips the bijection check; for internal callers that construct grids
    // which are bijections by construction.
    static Potential unchecked(int k, std::vector<std::int32_t> values);

    int k() const { return k_; }
    std::int64_t cell_count() const { return static_cast<std::int64_t>(k_) * k_; }

    // 1-based accessors.
    std::int32_t at(int row, int col) const {
        return values_[static_cast<std::size_t>(row - 1) * k_ + (col - 1)];
    }
    std::int32_t at(const ActionProfile& p) const { return at(p.row, p.col); }

    const std::vector<std::int32_t>& values() const { return values_; }

    friend bool operator==(const Potential&, const Potential&) = default;

private:
    Potential() = default;

    int k_ = 0;
    std::vector<std::int32_t> values_;
};

struct Equilibrium {
    ActionProfile profile;
    std::int32_t value = 0;
    int rank = 0;  // 1-based position when sorted by increasing value

    friend bool operator==(const Equilibrium&, const Equilibrium&) = default;
};

// All pure Nash equilibria of a game, sorted by increasing potential value.
// There are between 1 and K of them, at most one per row and per column, and
// the global minimum (value 1) is always present.
class EquilibriumSet {
public:
    EquilibriumSet() = default;
    explicit EquilibriumSet(std::vector<Equilibrium> entries);

    int count() const { return static_cast<int>(entries_.size()); }
    const Equilibrium& by_rank(int rank) const { return entries_[rank - 1]; }
    const std::vector<Equilibrium>& entries() const { return entries_; }

    std::vector<std::int32_t> sorted_values() const;

    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

private:
    std::vector<Equilibrium> entries_;
};

// Uniform sample over all (k^2)! rank assignments: an in-place Fisher-Yates
// shuffle of 1..k^2 driven by the fixed xoshiro256++ generator, so identical
// (k, seed) give bit-identical games everywhere.
Potential sample_uniform_potential(int k, std::uint64_t seed);
Potential sample_uniform_potential(int k, Rng& rng);

// A profile is an equilibrium iff its value is the strict minimum of its row
// and of its column.
EquilibriumSet find_equilibria(const Potential& p);

// K^2/(2K-1), exactly.
Rational expected_num_equilibria(int k);

// Relabels actions: output cell (row_perm[i-1], col_perm[j-1]) holds the
// input value at (i, j). Both permutations are 1-based bijections of [K].
Potential permute_potential(const Potential& p, const std::vector<int>& row_perm,
                            const std::vector<int>& col_perm);

// CSV: K rows of K comma-separated integers. Lines starting with '#' are
// skipped on input (used for metadata echoes).
std::string potential_to_csv(const Potential& p);
Potential potential_from_csv(std::istream& in);

// JSON: {"k": int, "values": [[int,...],...]}, row-major.
std::string potential_to_json(const Potential& p);
Potential potential_from_json(const std::string& text);

}  // namespace ropg

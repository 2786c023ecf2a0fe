#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ropg/brd.hpp"
#include "ropg/exact.hpp"
#include "ropg/potential.hpp"

namespace ropg {

enum class StatisticKind {
    equilibrium_count,   // W
    sorted_eq_values,    // increasing equilibrium potential values
    sorted_basin_sizes,  // increasing basin cell counts
    joint,               // (W, sorted equilibrium values); W is the key length
};

// Exact distribution of a statistic under the uniform law on all (K^2)!
// potentials. Keys are integer vectors (a single element for W). The
// probabilities are exact rationals summing to one.
struct ExactDistribution {
    StatisticKind kind = StatisticKind::equilibrium_count;
    int k = 0;
    std::vector<std::pair<std::vector<std::int32_t>, Rational>> support;
    Rational mean_equilibria;  // E[W], always computed
};

// The statistic key a sampled game contributes to the distribution above.
std::vector<std::int32_t> statistic_key(const Potential& p, StatisticKind kind);

// Enumerates all (k^2)! grids in lexicographic order; k <= 3.
ExactDistribution enumerate_exact(int k, StatisticKind kind);

// Brute force over all K^2 starts: true iff every start's absorption matches
// compute_basins and all starts of a column agree.
bool verify_basins_all_starts(const Potential& p);

// JSON with probabilities serialized as "num/den" strings.
std::string distribution_to_json(const ExactDistribution& dist);

}  // namespace ropg

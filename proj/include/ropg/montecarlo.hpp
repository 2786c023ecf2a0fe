#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ropg/potential.hpp"

namespace ropg {

enum class GeneratorKind { uniform, incremental };

// One experiment run. Reports produced from equal configs are byte-identical
// regardless of thread_budget: every trial derives its own seed from
// (base_seed, trial index) and writes into a preallocated slot, and all
// reductions run in trial order after the join.
struct ExperimentConfig {
    int k = 1000;
    std::int64_t trials = 1000;
    std::vector<double> epsilons;  // strictly increasing, within [0, 1/2)
    std::uint64_t base_seed = 1;
    GeneratorKind generator = GeneratorKind::uniform;
    int thread_budget = 0;           // 0: ROPG_THREADS env var, else hardware
    double fluid_horizon = 1.0;      // T: auxiliary processes tracked for t <= T*K
    bool full_profile_starts = false;  // rank runs: sample the start row too
};

struct BasinEpsilonStat {
    double epsilon = 0.0;
    int target_rank = 0;  // max(1, floor(eps*K)); eps=0 maps to rank 1
    std::int64_t included = 0;
    std::int64_t excluded = 0;  // trials with W < target_rank
    double mean_basin_over_k = 0.0;
    double std_err = 0.0;
    double density_theory = 0.0;  // limit value phi(eps)
};

struct EquilibriumCountStats {
    double mean = 0.0;
    double variance = 0.0;
    double mean_over_k = 0.0;
};

struct RankSection {
    std::vector<double> rank_over_k;  // per trial, in trial order
    double mean_rank_over_k = 0.0;
    double mean_theory = 0.0;           // e - 5/2
    double kolmogorov_distance = 0.0;   // empirical CDF vs limit CDF
    std::vector<std::pair<double, double>> cdf_at_epsilons;  // (eps, empirical)
};

struct WorstEqSection {
    std::vector<double> ratios;  // per trial: worst equilibrium value / (K ln K)
    double median = 0.0;
    double frac_below_1_1 = 0.0;
    double frac_below_1_2 = 0.0;
};

struct IncrementalEpsilonStat {
    double epsilon = 0.0;
    int target_greens = 0;
    std::int64_t runs = 0;
    std::int64_t excluded = 0;  // runs that finished without reaching the target
    double tau_over_k_mean = 0.0;
    double tau_over_k_std_err = 0.0;
    double rows_over_k_mean = 0.0;
    double cols_over_k_mean = 0.0;
    double tau_theory = 0.0;        // log(1/(1-2eps))/2
    double occupancy_theory = 0.0;  // 1 - sqrt(1-2eps)
};

struct FluidSection {
    double horizon = 0.0;  // T
    std::int64_t runs = 0;
    std::vector<double> sup_errors;  // per run: sup_t |R/K-r| + |C~/K-c| + |G~/K-g|
    double sup_error_mean = 0.0;
    double sup_error_max = 0.0;
    double frac_within_005 = 0.0;
    std::vector<std::int64_t> final_resample_counts;  // D at t_max per run
};

struct ExperimentReport {
    std::string target;
    int k = 0;
    std::int64_t trials = 0;
    std::vector<double> epsilons;
    std::uint64_t base_seed = 0;
    std::string generator;
    std::string seed_rule;
    double fluid_horizon = 1.0;
    bool full_profile_starts = false;

    std::optional<EquilibriumCountStats> w_stats;
    std::vector<BasinEpsilonStat> basin_stats;
    std::optional<RankSection> rank;
    std::optional<WorstEqSection> worst;
    std::vector<IncrementalEpsilonStat> incremental_stats;
    std::optional<FluidSection> fluid;
};

// Per trial: sample a game, compute basins, and record |BoA(eta_target)|/K
// for each epsilon (excluded when the game has fewer equilibria). Also
// aggregates the equilibrium-count statistics.
ExperimentReport estimate_basin_profile(const ExperimentConfig& cfg);

// Per trial: one BRD from a uniformly random start; records the rescaled
// rank of the absorbed equilibrium and compares the empirical CDF with the
// limit law.
ExperimentReport estimate_rank_distribution(const ExperimentConfig& cfg);

// Per trial: the worst equilibrium's potential over K ln K.
ExperimentReport estimate_worst_equilibrium(const ExperimentConfig& cfg);

// Epsilon-stopped constructions (tau/K, R_tau/K, C_tau/K per epsilon) plus
// fluid-limit sup-errors of the auxiliary processes over t <= horizon*K.
ExperimentReport estimate_incremental_limits(const ExperimentConfig& cfg);

std::string report_to_json(const ExperimentReport& report);
std::string report_to_csv(const ExperimentReport& report);

// ROPG_THREADS env var when set and positive, else hardware concurrency.
int default_thread_budget();

// Reals with 9 significant digits, '.' separator, no locale dependence.
std::string format_real(double x);

}  // namespace ropg

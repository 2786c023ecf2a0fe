#include "ropg/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "ropg/brd.hpp"
#include "ropg/incremental.hpp"
#include "ropg/rng.hpp"
#include "ropg/theory.hpp"

namespace ropg {

namespace {

constexpr const char* kSeedRule =
    "trial_seed(i) = splitmix64(base_seed + (i+1)*0x9E3779B97F4A7C15)";

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.k < 1) throw std::invalid_argument("k must be >= 1");
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
    for (std::size_t i = 0; i < cfg.epsilons.size(); ++i) {
        const double e = cfg.epsilons[i];
        if (!(e >= 0.0 && e < 0.5))
            throw std::invalid_argument("epsilon values must lie in [0, 1/2)");
        if (i > 0 && !(e > cfg.epsilons[i - 1]))
            throw std::invalid_argument("epsilon list must be strictly increasing");
    }
    if (!(cfg.fluid_horizon > 0.0))
        throw std::invalid_argument("fluid horizon must be > 0");
}

int resolve_threads(const ExperimentConfig& cfg) {
    return cfg.thread_budget > 0 ? cfg.thread_budget : default_thread_budget();
}

// Work-stealing loop over trial indices; each job owns its slot, so the
// result layout is independent of scheduling.
void run_parallel(std::int64_t jobs, int threads,
                  const std::function<void(std::int64_t)>& body) {
    threads = std::min<std::int64_t>(std::max(threads, 1), jobs);
    if (threads <= 1) {
        for (std::int64_t i = 0; i < jobs; ++i) body(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&]() {
            try {
                for (;;) {
                    const std::int64_t i = next.fetch_add(1);
                    if (i >= jobs) return;
                    body(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(jobs);
            }
        });
    }
    for (auto& worker : pool) worker.join();
    if (failure) std::rethrow_exception(failure);
}

Potential sample_game(const ExperimentConfig& cfg, Rng& rng) {
    if (cfg.generator == GeneratorKind::uniform)
        return sample_uniform_potential(cfg.k, rng);
    IncrementalTrace trace = incremental_construct(cfg.k, rng.next());
    return std::move(*trace.final_potential);
}

const char* generator_name(GeneratorKind g) {
    return g == GeneratorKind::uniform ? "uniform" : "incremental";
}

ExperimentReport base_report(const ExperimentConfig& cfg, const char* target) {
    ExperimentReport report;
    report.target = target;
    report.k = cfg.k;
    report.trials = cfg.trials;
    report.epsilons = cfg.epsilons;
    report.base_seed = cfg.base_seed;
    report.generator = generator_name(cfg.generator);
    report.seed_rule = kSeedRule;
    report.fluid_horizon = cfg.fluid_horizon;
    report.full_profile_starts = cfg.full_profile_starts;
    return report;
}

struct MeanStdErr {
    double mean = 0.0;
    double std_err = 0.0;
    std::int64_t count = 0;
};

MeanStdErr mean_std_err(const std::vector<double>& values) {
    MeanStdErr out;
    out.count = static_cast<std::int64_t>(values.size());
    if (out.count == 0) return out;
    double sum = 0.0;
    for (const double v : values) sum += v;
    out.mean = sum / static_cast<double>(out.count);
    if (out.count > 1) {
        double ss = 0.0;
        for (const double v : values) ss += (v - out.mean) * (v - out.mean);
        out.std_err = std::sqrt(ss / static_cast<double>(out.count - 1) /
                                static_cast<double>(out.count));
    }
    return out;
}

double limit_cdf_extended(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 0.5) return 1.0;
    return limit_rank_cdf(x);
}

}  // namespace

int default_thread_budget() {
    if (const char* env = std::getenv("ROPG_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed > 0) return static_cast<int>(parsed);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string format_real(double x) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.9g", x);
    return buffer;
}

ExperimentReport estimate_basin_profile(const ExperimentConfig& cfg) {
    validate_config(cfg);
    ExperimentReport report = base_report(cfg, "basins");

    const int k = cfg.k;
    const std::int64_t n = cfg.trials;
    const std::size_t n_eps = cfg.epsilons.size();
    std::vector<int> targets(n_eps);
    for (std::size_t e = 0; e < n_eps; ++e)
        targets[e] = std::max(1, floor_epsilon_k(cfg.epsilons[e], k));

    std::vector<std::int32_t> w_values(static_cast<std::size_t>(n));
    // basin size over K per (trial, eps); negative marks an excluded trial.
    std::vector<double> basin(static_cast<std::size_t>(n) * n_eps, -1.0);

    run_parallel(n, resolve_threads(cfg), [&](std::int64_t i) {
        Rng rng(mix_seed(cfg.base_seed, static_cast<std::uint64_t>(i)));
        const Potential game = sample_game(cfg, rng);
        const GameAnalysis analysis = analyze_game(game);
        const BasinMap basins = compute_basins(game, analysis);
        const int w = analysis.equilibria.count();
        w_values[static_cast<std::size_t>(i)] = w;
        std::int64_t covered = 0;
        for (const std::int64_t s : basins.basin_sizes) covered += s;
        if (covered != static_cast<std::int64_t>(k) * k)
            throw std::logic_error("basin sizes do not partition the grid");
        for (std::size_t e = 0; e < n_eps; ++e) {
            if (targets[e] <= w)
                basin[static_cast<std::size_t>(i) * n_eps + e] =
                    static_cast<double>(basins.basin_sizes[targets[e] - 1]) / k;
        }
    });

    EquilibriumCountStats w_stats;
    double w_sum = 0.0;
    for (const std::int32_t w : w_values) w_sum += w;
    w_stats.mean = w_sum / static_cast<double>(n);
    double w_ss = 0.0;
    for (const std::int32_t w : w_values) w_ss += (w - w_stats.mean) * (w - w_stats.mean);
    w_stats.variance = n > 1 ? w_ss / static_cast<double>(n - 1) : 0.0;
    w_stats.mean_over_k = w_stats.mean / k;
    report.w_stats = w_stats;

    for (std::size_t e = 0; e < n_eps; ++e) {
        std::vector<double> included;
        included.reserve(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i) {
            const double v = basin[static_cast<std::size_t>(i) * n_eps + e];
            if (v >= 0.0) included.push_back(v);
        }
        const MeanStdErr stats = mean_std_err(included);
        BasinEpsilonStat row;
        row.epsilon = cfg.epsilons[e];
        row.target_rank = targets[e];
        row.included = stats.count;
        row.excluded = n - stats.count;
        row.mean_basin_over_k = stats.mean;
        row.std_err = stats.std_err;
        row.density_theory = limit_rank_density(cfg.epsilons[e]);
        report.basin_stats.push_back(row);
    }
    return report;
}

ExperimentReport estimate_rank_distribution(const ExperimentConfig& cfg) {
    validate_config(cfg);
    ExperimentReport report = base_report(cfg, "ranks");

    const int k = cfg.k;
    const std::int64_t n = cfg.trials;
    RankSection section;
    section.rank_over_k.assign(static_cast<std::size_t>(n), 0.0);

    run_parallel(n, resolve_threads(cfg), [&](std::int64_t i) {
        Rng rng(mix_seed(cfg.base_seed, static_cast<std::uint64_t>(i)));
        const Potential game = sample_game(cfg, rng);
        const GameAnalysis analysis = analyze_game(game);
        // The first move is along the row, so the start column alone decides
        // absorption; the full-profile mode re-confirms that.
        const int col = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
        const int row = cfg.full_profile_starts
                            ? 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k)))
                            : 1;
        const BRDTrace trace = brd_run(game, analysis, {row, col});
        section.rank_over_k[static_cast<std::size_t>(i)] =
            static_cast<double>(trace.absorbed_rank) / k;
    });

    double sum = 0.0;
    for (const double v : section.rank_over_k) sum += v;
    section.mean_rank_over_k = sum / static_cast<double>(n);
    section.mean_theory = limit_mean_rank();

    std::vector<double> sorted = section.rank_over_k;
    std::sort(sorted.begin(), sorted.end());
    double ks = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double cdf = limit_cdf_extended(sorted[static_cast<std::size_t>(i)]);
        const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - cdf;
        const double lo = cdf - static_cast<double>(i) / static_cast<double>(n);
        ks = std::max(ks, std::max(hi, lo));
    }
    section.kolmogorov_distance = ks;

    for (const double eps : cfg.epsilons) {
        const auto upper = std::upper_bound(sorted.begin(), sorted.end(), eps);
        const double empirical =
            static_cast<double>(upper - sorted.begin()) / static_cast<double>(n);
        section.cdf_at_epsilons.emplace_back(eps, empirical);
    }
    report.rank = std::move(section);
    return report;
}

ExperimentReport estimate_worst_equilibrium(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (cfg.k < 2) throw std::invalid_argument("worst-equilibrium ratios need k >= 2");
    ExperimentReport report = base_report(cfg, "worst-eq");

    const std::int64_t n = cfg.trials;
    const double scale = static_cast<double>(cfg.k) * std::log(static_cast<double>(cfg.k));
    WorstEqSection section;
    section.ratios.assign(static_cast<std::size_t>(n), 0.0);

    run_parallel(n, resolve_threads(cfg), [&](std::int64_t i) {
        Rng rng(mix_seed(cfg.base_seed, static_cast<std::uint64_t>(i)));
        const Potential game = sample_game(cfg, rng);
        const EquilibriumSet eqs = find_equilibria(game);
        const std::int32_t worst_value = eqs.by_rank(eqs.count()).value;
        section.ratios[static_cast<std::size_t>(i)] = worst_value / scale;
    });

    std::vector<double> sorted = section.ratios;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    section.median = sorted.size() % 2 == 1
                         ? sorted[mid]
                         : 0.5 * (sorted[mid - 1] + sorted[mid]);
    std::int64_t below_11 = 0;
    std::int64_t below_12 = 0;
    for (const double r : sorted) {
        if (r < 1.1) ++below_11;
        if (r < 1.2) ++below_12;
    }
    section.frac_below_1_1 = static_cast<double>(below_11) / static_cast<double>(n);
    section.frac_below_1_2 = static_cast<double>(below_12) / static_cast<double>(n);
    report.worst = std::move(section);
    return report;
}

ExperimentReport estimate_incremental_limits(const ExperimentConfig& cfg) {
    validate_config(cfg);
    ExperimentReport report = base_report(cfg, "incremental");
    report.generator = "incremental";

    const int k = cfg.k;
    const std::int64_t n = cfg.trials;
    const std::size_t n_eps = cfg.epsilons.size();
    for (const double eps : cfg.epsilons)
        if (floor_epsilon_k(eps, k) < 1)
            throw std::invalid_argument("floor(epsilon*k) must be >= 1 for stopped runs");

    // tau/K, R_tau/K, C_tau/K per (eps, run); negative tau marks no stop.
    std::vector<double> taus(n_eps * static_cast<std::size_t>(n), -1.0);
    std::vector<double> rows(n_eps * static_cast<std::size_t>(n), 0.0);
    std::vector<double> cols(n_eps * static_cast<std::size_t>(n), 0.0);

    run_parallel(static_cast<std::int64_t>(n_eps) * n, resolve_threads(cfg),
                 [&](std::int64_t job) {
                     const std::size_t e = static_cast<std::size_t>(job) / n;
                     const std::int64_t i = job % n;
                     const std::uint64_t seed =
                         mix_seed(cfg.base_seed, static_cast<std::uint64_t>(job));
                     const IncrementalTrace trace = epsilon_stopped_construct(
                         k, cfg.epsilons[e], seed, /*complete=*/false);
                     if (trace.tau) {
                         const std::size_t slot = e * static_cast<std::size_t>(n) +
                                                  static_cast<std::size_t>(i);
                         taus[slot] = static_cast<double>(*trace.tau) / k;
                         rows[slot] =
                             static_cast<double>(trace.final_state.occupied_rows) / k;
                         cols[slot] =
                             static_cast<double>(trace.final_state.occupied_cols) / k;
                     }
                 });

    for (std::size_t e = 0; e < n_eps; ++e) {
        IncrementalEpsilonStat stat;
        stat.epsilon = cfg.epsilons[e];
        stat.target_greens = floor_epsilon_k(cfg.epsilons[e], k);
        std::vector<double> tau_list, row_list, col_list;
        for (std::int64_t i = 0; i < n; ++i) {
            const std::size_t slot = e * static_cast<std::size_t>(n) + static_cast<std::size_t>(i);
            if (taus[slot] >= 0.0) {
                tau_list.push_back(taus[slot]);
                row_list.push_back(rows[slot]);
                col_list.push_back(cols[slot]);
            }
        }
        const MeanStdErr tau_stats = mean_std_err(tau_list);
        stat.runs = n;
        stat.excluded = n - tau_stats.count;
        stat.tau_over_k_mean = tau_stats.mean;
        stat.tau_over_k_std_err = tau_stats.std_err;
        stat.rows_over_k_mean = mean_std_err(row_list).mean;
        stat.cols_over_k_mean = mean_std_err(col_list).mean;
        stat.tau_theory = stop_time_limit(cfg.epsilons[e]);
        stat.occupancy_theory = occupancy_limit(cfg.epsilons[e]);
        report.incremental_stats.push_back(stat);
    }

    FluidSection fluid;
    fluid.horizon = cfg.fluid_horizon;
    fluid.runs = n;
    fluid.sup_errors.assign(static_cast<std::size_t>(n), 0.0);
    fluid.final_resample_counts.assign(static_cast<std::size_t>(n), 0);
    const std::int64_t t_max =
        std::min(static_cast<std::int64_t>(cfg.fluid_horizon * k),
                 static_cast<std::int64_t>(k) * k);
    const std::uint64_t fluid_stream_offset = n_eps * static_cast<std::size_t>(n);

    run_parallel(n, resolve_threads(cfg), [&](std::int64_t i) {
        const std::uint64_t seed = mix_seed(
            cfg.base_seed, fluid_stream_offset + static_cast<std::uint64_t>(i));
        const IncrementalTrace trace = simulate_aux_processes(k, seed, t_max);
        double sup = 0.0;
        for (const IncrementalSnapshot& s : trace.snapshots) {
            const FluidState ode = fluid_solution(static_cast<double>(s.t) / k);
            const double err =
                std::abs(static_cast<double>(s.occupied_rows) / k - ode.row_fraction) +
                std::abs(static_cast<double>(s.simple_cols) / k - ode.col_fraction) +
                std::abs(static_cast<double>(s.simple_greens) / k - ode.green_fraction);
            sup = std::max(sup, err);
        }
        fluid.sup_errors[static_cast<std::size_t>(i)] = sup;
        fluid.final_resample_counts[static_cast<std::size_t>(i)] =
            trace.final_state.resample_events;
    });

    double sup_sum = 0.0;
    double sup_max = 0.0;
    std::int64_t within = 0;
    for (const double s : fluid.sup_errors) {
        sup_sum += s;
        sup_max = std::max(sup_max, s);
        if (s <= 0.05) ++within;
    }
    fluid.sup_error_mean = sup_sum / static_cast<double>(n);
    fluid.sup_error_max = sup_max;
    fluid.frac_within_005 = static_cast<double>(within) / static_cast<double>(n);
    report.fluid = std::move(fluid);
    return report;
}

namespace {

nlohmann::ordered_json epsilons_json(const std::vector<double>& eps) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const double e : eps) arr.push_back(e);
    return arr;
}

}  // namespace

std::string report_to_json(const ExperimentReport& report) {
    nlohmann::ordered_json doc;
    doc["target"] = report.target;
    doc["config"] = {
        {"k", report.k},
        {"trials", report.trials},
        {"epsilons", epsilons_json(report.epsilons)},
        {"base_seed", report.base_seed},
        {"generator", report.generator},
        {"seed_rule", report.seed_rule},
        {"fluid_horizon", report.fluid_horizon},
        {"full_profile_starts", report.full_profile_starts},
    };
    if (report.w_stats) {
        doc["w_stats"] = {
            {"mean", report.w_stats->mean},
            {"variance", report.w_stats->variance},
            {"mean_over_k", report.w_stats->mean_over_k},
        };
    }
    if (!report.basin_stats.empty()) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& s : report.basin_stats) {
            rows.push_back({
                {"epsilon", s.epsilon},
                {"target_rank", s.target_rank},
                {"included", s.included},
                {"excluded", s.excluded},
                {"mean_basin_over_k", s.mean_basin_over_k},
                {"std_err", s.std_err},
                {"phi_theory", s.density_theory},
            });
        }
        doc["basins"] = std::move(rows);
    }
    if (report.rank) {
        nlohmann::ordered_json cdf = nlohmann::ordered_json::array();
        for (const auto& [eps, value] : report.rank->cdf_at_epsilons)
            cdf.push_back({{"epsilon", eps}, {"empirical", value}});
        std::vector<double> sorted_samples = report.rank->rank_over_k;
        std::sort(sorted_samples.begin(), sorted_samples.end());
        doc["ranks"] = {
            {"mean_rank_over_k", report.rank->mean_rank_over_k},
            {"mean_theory", report.rank->mean_theory},
            {"kolmogorov_distance", report.rank->kolmogorov_distance},
            {"cdf_at_epsilons", std::move(cdf)},
            {"samples_sorted", std::move(sorted_samples)},
        };
    }
    if (report.worst) {
        doc["worst_eq"] = {
            {"median", report.worst->median},
            {"frac_below_1_1", report.worst->frac_below_1_1},
            {"frac_below_1_2", report.worst->frac_below_1_2},
            {"ratios", report.worst->ratios},
        };
    }
    if (!report.incremental_stats.empty()) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& s : report.incremental_stats) {
            rows.push_back({
                {"epsilon", s.epsilon},
                {"target_greens", s.target_greens},
                {"runs", s.runs},
                {"excluded", s.excluded},
                {"tau_over_k_mean", s.tau_over_k_mean},
                {"tau_over_k_std_err", s.tau_over_k_std_err},
                {"rows_over_k_mean", s.rows_over_k_mean},
                {"cols_over_k_mean", s.cols_over_k_mean},
                {"tau_theory", s.tau_theory},
                {"occupancy_theory", s.occupancy_theory},
            });
        }
        doc["incremental"] = std::move(rows);
    }
    if (report.fluid) {
        doc["fluid"] = {
            {"horizon", report.fluid->horizon},
            {"runs", report.fluid->runs},
            {"sup_error_mean", report.fluid->sup_error_mean},
            {"sup_error_max", report.fluid->sup_error_max},
            {"frac_within_005", report.fluid->frac_within_005},
            {"sup_errors", report.fluid->sup_errors},
            {"final_resample_counts", report.fluid->final_resample_counts},
        };
    }
    return doc.dump(2) + "\n";
}

std::string report_to_csv(const ExperimentReport& report) {
    std::string out;
    out += "# target=" + report.target + "\n";
    out += "# k=" + std::to_string(report.k) + " trials=" + std::to_string(report.trials) +
           " base_seed=" + std::to_string(report.base_seed) +
           " generator=" + report.generator;
    out += " epsilons=";
    for (std::size_t i = 0; i < report.epsilons.size(); ++i) {
        if (i > 0) out += '|';
        out += format_real(report.epsilons[i]);
    }
    out += " fluid_horizon=" + format_real(report.fluid_horizon);
    out += " full_profile_starts=" + std::to_string(report.full_profile_starts ? 1 : 0);
    out += "\n";
    out += "# seed_rule=" + report.seed_rule + "\n";
    if (!report.basin_stats.empty()) {
        out += "epsilon,mean_basin_over_k,std_err,excluded,phi_theory\n";
        for (const auto& s : report.basin_stats) {
            out += format_real(s.epsilon) + "," + format_real(s.mean_basin_over_k) + "," +
                   format_real(s.std_err) + "," + std::to_string(s.excluded) + "," +
                   format_real(s.density_theory) + "\n";
        }
    } else if (report.rank) {
        out += "epsilon,empirical_cdf,Phi_theory\n";
        for (const auto& [eps, value] : report.rank->cdf_at_epsilons) {
            out += format_real(eps) + "," + format_real(value) + "," +
                   format_real(limit_rank_cdf(eps)) + "\n";
        }
        out += "# mean_rank_over_k=" + format_real(report.rank->mean_rank_over_k) +
               " kolmogorov_distance=" + format_real(report.rank->kolmogorov_distance) + "\n";
    } else if (report.worst) {
        out += "quantile,ratio\n";
        const std::vector<double>& ratios = report.worst->ratios;
        std::vector<double> sorted = ratios;
        std::sort(sorted.begin(), sorted.end());
        for (const double q : {0.05, 0.25, 0.5, 0.75, 0.95, 1.0}) {
            const std::size_t idx = std::min(
                sorted.size() - 1,
                static_cast<std::size_t>(q * static_cast<double>(sorted.size())));
            out += format_real(q) + "," + format_real(sorted[idx]) + "\n";
        }
        out += "# frac_below_1_2=" + format_real(report.worst->frac_below_1_2) + "\n";
    } else if (!report.incremental_stats.empty()) {
        out += "epsilon,tau_over_k,rows_over_k,cols_over_k,tau_theory,occupancy_theory\n";
        for (const auto& s : report.incremental_stats) {
            out += format_real(s.epsilon) + "," + format_real(s.tau_over_k_mean) + "," +
                   format_real(s.rows_over_k_mean) + "," + format_real(s.cols_over_k_mean) +
                   "," + format_real(s.tau_theory) + "," + format_real(s.occupancy_theory) +
                   "\n";
        }
    }
    return out;
}

}  // namespace ropg

// ropg: generate random strict ordinal potential games, run best-response
// dynamics, compute basins of attraction, drive the incremental
// construction, and reproduce the limit-law experiments. Every subcommand is
// deterministic given its full flag set; the flag set (seed included) is
// echoed into each artifact's header or metadata.
//
// Exit codes: 0 success, 1 flag/validation failure, 2 internal invariant
// violation.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ropg/brd.hpp"
#include "ropg/exact.hpp"
#include "ropg/incremental.hpp"
#include "ropg/montecarlo.hpp"
#include "ropg/oracle.hpp"
#include "ropg/potential.hpp"
#include "ropg/rng.hpp"
#include "ropg/theory.hpp"

namespace {

using ropg::format_real;

struct MetaEcho {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(const std::string& key, const std::string& value) {
        entries.emplace_back(key, value);
    }
    void add(const std::string& key, std::int64_t value) { add(key, std::to_string(value)); }
    void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
    void add(const std::string& key, int value) { add(key, std::to_string(value)); }
    void add(const std::string& key, double value) { add(key, format_real(value)); }

    std::string csv_header(const std::string& subcommand) const {
        std::string out = "# ropg " + subcommand + "\n# ";
        bool first = true;
        for (const auto& [key, value] : entries) {
            if (!first) out += ' ';
            out += key + "=" + value;
            first = false;
        }
        out += '\n';
        return out;
    }

    nlohmann::ordered_json json(const std::string& subcommand) const {
        nlohmann::ordered_json meta;
        meta["subcommand"] = subcommand;
        for (const auto& [key, value] : entries) meta[key] = value;
        return meta;
    }
};

void write_artifact(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw std::invalid_argument("--out path is not writable: " + out_path);
    file << content;
    if (!file) throw std::invalid_argument("--out write failed: " + out_path);
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed) {
    if (seed) return *seed;
    std::random_device device;
    const std::uint64_t generated =
        (static_cast<std::uint64_t>(device()) << 32) ^ device();
    std::cerr << "seed=" << generated << "\n";
    return generated;
}

ropg::Potential load_game(const std::string& in_path, std::optional<int> k,
                          std::optional<std::uint64_t>& seed) {
    if (!in_path.empty()) {
        std::ifstream file(in_path);
        if (!file) throw std::invalid_argument("--in path is not readable: " + in_path);
        if (in_path.size() >= 5 && in_path.substr(in_path.size() - 5) == ".json") {
            std::stringstream buffer;
            buffer << file.rdbuf();
            return ropg::potential_from_json(buffer.str());
        }
        return ropg::potential_from_csv(file);
    }
    if (!k) throw std::invalid_argument("--k is required when --in is not given");
    seed = resolve_seed(seed);
    return ropg::sample_uniform_potential(*k, *seed);
}

void add_game_source(CLI::App* cmd, std::string& in_path, std::optional<int>& k,
                     std::optional<std::uint64_t>& seed) {
    cmd->add_option("--in", in_path, "read the game from a CSV or .json file");
    cmd->add_option("--k", k, "actions per player (generate a uniform game)");
    cmd->add_option("--seed", seed, "seed for the generated game");
}

// ---- gen ----------------------------------------------------------------

int run_gen(int k, std::optional<std::uint64_t> seed_opt, const std::string& format,
            const std::string& out_path) {
    const std::uint64_t seed = resolve_seed(seed_opt);
    const ropg::Potential game = ropg::sample_uniform_potential(k, seed);
    MetaEcho meta;
    meta.add("k", k);
    meta.add("seed", seed);
    meta.add("format", format);
    if (format == "json") {
        nlohmann::ordered_json doc = nlohmann::ordered_json::parse(ropg::potential_to_json(game));
        doc["meta"] = meta.json("gen");
        write_artifact(out_path, doc.dump(2) + "\n");
    } else {
        write_artifact(out_path, meta.csv_header("gen") + ropg::potential_to_csv(game));
    }
    return 0;
}

// ---- equilibria ----------------------------------------------------------

int run_equilibria(const std::string& in_path, std::optional<int> k,
                   std::optional<std::uint64_t> seed, const std::string& format,
                   const std::string& out_path) {
    const ropg::Potential game = load_game(in_path, k, seed);
    const ropg::EquilibriumSet eqs = ropg::find_equilibria(game);
    MetaEcho meta;
    meta.add("k", game.k());
    if (seed) meta.add("seed", *seed);
    if (!in_path.empty()) meta.add("in", in_path);
    if (format == "json") {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& e : eqs)
            rows.push_back({{"rank", e.rank},
                            {"row", e.profile.row},
                            {"col", e.profile.col},
                            {"value", e.value}});
        nlohmann::ordered_json doc;
        doc["meta"] = meta.json("equilibria");
        doc["w"] = eqs.count();
        doc["equilibria"] = std::move(rows);
        write_artifact(out_path, doc.dump(2) + "\n");
    } else {
        std::string body = "rank,row,col,value\n";
        for (const auto& e : eqs)
            body += std::to_string(e.rank) + "," + std::to_string(e.profile.row) + "," +
                    std::to_string(e.profile.col) + "," + std::to_string(e.value) + "\n";
        write_artifact(out_path, meta.csv_header("equilibria") + body);
    }
    return 0;
}

// ---- brd -----------------------------------------------------------------

int run_brd(const std::string& in_path, std::optional<int> k,
            std::optional<std::uint64_t> seed, int start_row, int start_col,
            const std::string& format, const std::string& out_path) {
    const ropg::Potential game = load_game(in_path, k, seed);
    if (start_row < 1 || start_row > game.k())
        throw std::invalid_argument("--start-row must lie in [1, k]");
    if (start_col < 1 || start_col > game.k())
        throw std::invalid_argument("--start-col must lie in [1, k]");
    const ropg::BRDTrace trace = ropg::brd_run(game, {start_row, start_col});
    MetaEcho meta;
    meta.add("k", game.k());
    if (seed) meta.add("seed", *seed);
    if (!in_path.empty()) meta.add("in", in_path);
    meta.add("start_row", start_row);
    meta.add("start_col", start_col);
    if (format == "json") {
        nlohmann::ordered_json path = nlohmann::ordered_json::array();
        for (const auto& p : trace.path)
            path.push_back({{"row", p.row}, {"col", p.col}, {"value", game.at(p)}});
        nlohmann::ordered_json doc;
        doc["meta"] = meta.json("brd");
        doc["path"] = std::move(path);
        doc["absorbed_at"] = {{"row", trace.absorbed_at.row}, {"col", trace.absorbed_at.col}};
        doc["absorbed_rank"] = trace.absorbed_rank;
        doc["steps_to_absorb"] = trace.steps_to_absorb;
        doc["total_iterations"] = trace.total_iterations;
        write_artifact(out_path, doc.dump(2) + "\n");
    } else {
        std::string body = "step,row,col,value\n";
        for (std::size_t i = 0; i < trace.path.size(); ++i)
            body += std::to_string(i) + "," + std::to_string(trace.path[i].row) + "," +
                    std::to_string(trace.path[i].col) + "," +
                    std::to_string(game.at(trace.path[i])) + "\n";
        body += "# absorbed_rank=" + std::to_string(trace.absorbed_rank) +
                " steps_to_absorb=" + std::to_string(trace.steps_to_absorb) + "\n";
        write_artifact(out_path, meta.csv_header("brd") + body);
    }
    return 0;
}

// ---- basins ----------------------------------------------------------------

int run_basins(const std::string& in_path, std::optional<int> k,
               std::optional<std::uint64_t> seed, const std::string& format,
               const std::string& out_path) {
    const ropg::Potential game = load_game(in_path, k, seed);
    const ropg::GameAnalysis analysis = ropg::analyze_game(game);
    const ropg::BasinMap basins = ropg::compute_basins(game, analysis);
    MetaEcho meta;
    meta.add("k", game.k());
    if (seed) meta.add("seed", *seed);
    if (!in_path.empty()) meta.add("in", in_path);
    if (format == "json") {
        nlohmann::ordered_json sizes;
        for (std::size_t r = 0; r < basins.basin_sizes.size(); ++r)
            sizes[std::to_string(r + 1)] = basins.basin_sizes[r];
        nlohmann::ordered_json columns = nlohmann::ordered_json::array();
        for (const int rank : basins.column_to_rank) columns.push_back(rank);
        nlohmann::ordered_json doc;
        doc["meta"] = meta.json("basins");
        doc["w"] = analysis.equilibria.count();
        doc["basin_sizes"] = std::move(sizes);
        doc["column_to_rank"] = std::move(columns);
        write_artifact(out_path, doc.dump(2) + "\n");
    } else {
        std::string body = "column,absorbed_rank,absorbed_value\n";
        for (int c = 1; c <= game.k(); ++c) {
            const int rank = basins.column_to_rank[c - 1];
            body += std::to_string(c) + "," + std::to_string(rank) + "," +
                    std::to_string(analysis.equilibria.by_rank(rank).value) + "\n";
        }
        write_artifact(out_path, meta.csv_header("basins") + body);
    }
    return 0;
}

// ---- incremental -----------------------------------------------------------

int run_incremental_cmd(int k, std::optional<std::uint64_t> seed_opt,
                        std::optional<double> epsilon, std::optional<std::int64_t> t_max,
                        bool trace_flag, bool no_complete, const std::string& format,
                        const std::string& out_path) {
    const std::uint64_t seed = resolve_seed(seed_opt);
    ropg::IncrementalTrace trace;
    if (epsilon && t_max)
        throw std::invalid_argument("--epsilon and --t-max are mutually exclusive");
    if (epsilon) {
        trace = ropg::epsilon_stopped_construct(k, *epsilon, seed, !no_complete, trace_flag);
    } else if (t_max) {
        trace = ropg::simulate_aux_processes(k, seed, *t_max);
    } else {
        trace = ropg::incremental_construct(k, seed, trace_flag);
    }

    MetaEcho meta;
    meta.add("k", k);
    meta.add("seed", seed);
    if (epsilon) meta.add("epsilon", *epsilon);
    if (t_max) meta.add("t_max", *t_max);
    meta.add("trace", trace_flag ? 1 : 0);

    if (format == "json") {
        nlohmann::ordered_json doc;
        doc["meta"] = meta.json("incremental");
        if (trace.tau) doc["tau"] = *trace.tau;
        doc["final_state"] = {
            {"t", trace.final_state.t},
            {"R", trace.final_state.occupied_rows},
            {"C", trace.final_state.occupied_cols},
            {"G", trace.final_state.greens},
            {"C_tilde", trace.final_state.simple_cols},
            {"G_tilde", trace.final_state.simple_greens},
            {"D", trace.final_state.resample_events},
        };
        nlohmann::ordered_json greens = nlohmann::ordered_json::array();
        for (const auto& g : trace.greens)
            greens.push_back(
                {{"row", g.profile.row}, {"col", g.profile.col}, {"value", g.value}});
        doc["greens"] = std::move(greens);
        if (trace.final_potential)
            doc["potential"] =
                nlohmann::ordered_json::parse(ropg::potential_to_json(*trace.final_potential));
        write_artifact(out_path, doc.dump(2) + "\n");
        return 0;
    }

    std::string body;
    if (trace_flag || t_max) {
        body = ropg::trace_to_csv(trace);
    } else if (trace.final_potential) {
        body = ropg::potential_to_csv(*trace.final_potential);
    } else {
        body = ropg::trace_to_csv(trace);
    }
    if (trace.tau) body += "# tau=" + std::to_string(*trace.tau) + "\n";
    write_artifact(out_path, meta.csv_header("incremental") + body);
    return 0;
}

// ---- experiment -------------------------------------------------------------

int run_experiment(const std::string& target, ropg::ExperimentConfig cfg,
                   std::optional<std::uint64_t> seed_opt, const std::string& format,
                   const std::string& out_path) {
    cfg.base_seed = resolve_seed(seed_opt);
    ropg::ExperimentReport report;
    if (target == "basins") {
        report = ropg::estimate_basin_profile(cfg);
    } else if (target == "ranks") {
        report = ropg::estimate_rank_distribution(cfg);
    } else if (target == "worst-eq") {
        report = ropg::estimate_worst_equilibrium(cfg);
    } else if (target == "incremental") {
        report = ropg::estimate_incremental_limits(cfg);
    } else {
        throw std::invalid_argument("--target must be basins, ranks, worst-eq or incremental");
    }
    write_artifact(out_path, format == "csv" ? ropg::report_to_csv(report)
                                             : ropg::report_to_json(report));
    return 0;
}

// ---- theory / plot-data -------------------------------------------------------

int run_theory(double grid, const std::string& out_path) {
    if (!(grid > 0.0 && grid <= 0.5))
        throw std::invalid_argument("--grid must lie in (0, 0.5]");
    MetaEcho meta;
    meta.add("grid", grid);
    std::string body = "epsilon,phi,Phi\n";
    const auto steps = static_cast<std::int64_t>(0.5 / grid + 1e-9);
    for (std::int64_t i = 0; i <= steps; ++i) {
        double eps = static_cast<double>(i) * grid;
        if (eps > 0.5) eps = 0.5;
        body += format_real(eps) + "," + format_real(ropg::limit_rank_density(eps)) + "," +
                format_real(ropg::limit_rank_cdf(eps)) + "\n";
    }
    write_artifact(out_path, meta.csv_header("theory") + body);
    return 0;
}

int run_plot_data(const std::string& curve, double grid, double s_max,
                  const std::string& out_path) {
    MetaEcho meta;
    meta.add("curve", curve);
    meta.add("grid", grid);
    if (curve == "phi-Phi") return run_theory(grid, out_path);
    if (curve != "ode") throw std::invalid_argument("--curve must be ode or phi-Phi");
    if (!(grid > 0.0) || !(s_max > 0.0))
        throw std::invalid_argument("--grid and --s-max must be > 0");
    meta.add("s_max", s_max);
    std::string body = "s,r,c,g\n";
    const auto steps = static_cast<std::int64_t>(s_max / grid + 1e-9);
    for (std::int64_t i = 0; i <= steps; ++i) {
        const double s = static_cast<double>(i) * grid;
        const ropg::FluidState state = ropg::fluid_solution(s);
        body += format_real(s) + "," + format_real(state.row_fraction) + "," +
                format_real(state.col_fraction) + "," + format_real(state.green_fraction) +
                "\n";
    }
    write_artifact(out_path, meta.csv_header("plot-data") + body);
    return 0;
}

// ---- verify -----------------------------------------------------------------

bool verify_exact_small_k(std::ostream& log) {
    std::string values;
    bool pass = true;
    for (const int k : {1, 2, 3}) {
        const ropg::ExactDistribution dist =
            ropg::enumerate_exact(k, ropg::StatisticKind::equilibrium_count);
        if (dist.mean_equilibria != ropg::expected_num_equilibria(k)) pass = false;
        if (!values.empty()) values += ", ";
        values += ropg::to_fraction_string(dist.mean_equilibria);
    }
    log << "E[W]: " << values << "\n";
    log << "suite exact-small-k: " << (pass ? "ok" : "FAILED") << "\n";
    return pass;
}

bool verify_basins_suite(std::ostream& log, std::int64_t games_per_k) {
    bool pass = true;
    for (int k = 2; k <= 8; ++k) {
        std::int64_t ok = 0;
        for (std::int64_t i = 0; i < games_per_k; ++i) {
            const ropg::Potential game =
                ropg::sample_uniform_potential(k, ropg::mix_seed(0xB051125, k * 100000 + i));
            if (ropg::verify_basins_all_starts(game)) ++ok;
        }
        log << "basins all-starts k=" << k << ": " << ok << "/" << games_per_k << "\n";
        if (ok != games_per_k) pass = false;
    }
    log << "suite basins: " << (pass ? "ok" : "FAILED") << "\n";
    return pass;
}

bool verify_greens_suite(std::ostream& log, std::int64_t runs_per_k) {
    bool pass = true;
    for (int k = 2; k <= 8; ++k) {
        std::int64_t ok = 0;
        for (std::int64_t i = 0; i < runs_per_k; ++i) {
            const ropg::IncrementalTrace trace =
                ropg::incremental_construct(k, ropg::mix_seed(0x6EEE, k * 100000 + i));
            const ropg::EquilibriumSet eqs = ropg::find_equilibria(*trace.final_potential);
            bool match = eqs.count() == static_cast<int>(trace.greens.size());
            if (match) {
                for (int rank = 1; rank <= eqs.count(); ++rank) {
                    const auto& eq = eqs.by_rank(rank);
                    const auto& green = trace.greens[static_cast<std::size_t>(rank - 1)];
                    if (eq.profile != green.profile || eq.value != green.value) match = false;
                }
            }
            if (match) ++ok;
        }
        log << "greens==equilibria k=" << k << ": " << ok << "/" << runs_per_k << "\n";
        if (ok != runs_per_k) pass = false;
    }
    log << "suite greens: " << (pass ? "ok" : "FAILED") << "\n";
    return pass;
}

int run_verify(const std::string& suite, std::int64_t games, const std::string& out_path) {
    bool pass = true;
    if (suite == "exact-small-k" || suite == "all") pass = verify_exact_small_k(std::cout) && pass;
    if (suite == "basins" || suite == "all") pass = verify_basins_suite(std::cout, games) && pass;
    if (suite == "greens" || suite == "all") pass = verify_greens_suite(std::cout, games) && pass;
    if (suite != "exact-small-k" && suite != "basins" && suite != "greens" && suite != "all")
        throw std::invalid_argument("--suite must be exact-small-k, basins, greens or all");
    if (!out_path.empty()) {
        // exact distributions for k <= 3, rationals as num/den strings
        nlohmann::ordered_json doc = nlohmann::ordered_json::array();
        for (const int k : {1, 2, 3}) {
            for (const auto kind :
                 {ropg::StatisticKind::equilibrium_count, ropg::StatisticKind::joint}) {
                doc.push_back(nlohmann::ordered_json::parse(
                    ropg::distribution_to_json(ropg::enumerate_exact(k, kind))));
            }
        }
        write_artifact(out_path, doc.dump(2) + "\n");
    }
    return pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random ordinal potential games: best-response basins, incremental "
                 "construction, limit-law experiments"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "sample a uniform game");
    int gen_k = 0;
    std::optional<std::uint64_t> gen_seed;
    std::string gen_format = "csv";
    std::string gen_out;
    gen->add_option("--k", gen_k, "actions per player")->required()->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--format", gen_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    gen->add_option("--out", gen_out, "output path (default stdout)");

    // equilibria
    auto* eq = app.add_subcommand("equilibria", "list the pure Nash equilibria");
    std::string eq_in;
    std::optional<int> eq_k;
    std::optional<std::uint64_t> eq_seed;
    std::string eq_format = "csv";
    std::string eq_out;
    add_game_source(eq, eq_in, eq_k, eq_seed);
    eq->add_option("--format", eq_format)->check(CLI::IsMember({"csv", "json"}));
    eq->add_option("--out", eq_out, "output path (default stdout)");

    // brd
    auto* brd = app.add_subcommand("brd", "run best-response dynamics from a start profile");
    std::string brd_in;
    std::optional<int> brd_k;
    std::optional<std::uint64_t> brd_seed;
    int brd_row = 1, brd_col = 1;
    std::string brd_format = "csv";
    std::string brd_out;
    add_game_source(brd, brd_in, brd_k, brd_seed);
    brd->add_option("--start-row", brd_row, "starting row (1-based)")->required();
    brd->add_option("--start-col", brd_col, "starting column (1-based)")->required();
    brd->add_option("--format", brd_format)->check(CLI::IsMember({"csv", "json"}));
    brd->add_option("--out", brd_out, "output path (default stdout)");

    // basins
    auto* basins = app.add_subcommand("basins", "basin of attraction of every equilibrium");
    std::string basins_in;
    std::optional<int> basins_k;
    std::optional<std::uint64_t> basins_seed;
    std::string basins_format = "csv";
    std::string basins_out;
    add_game_source(basins, basins_in, basins_k, basins_seed);
    basins->add_option("--format", basins_format)->check(CLI::IsMember({"csv", "json"}));
    basins->add_option("--out", basins_out, "output path (default stdout)");

    // incremental
    auto* inc = app.add_subcommand("incremental", "incremental / epsilon-stopped construction");
    int inc_k = 0;
    std::optional<std::uint64_t> inc_seed;
    std::optional<double> inc_epsilon;
    std::optional<std::int64_t> inc_t_max;
    bool inc_trace = false;
    bool inc_no_complete = false;
    std::string inc_format = "csv";
    std::string inc_out;
    inc->add_option("--k", inc_k, "actions per player")->required()->check(CLI::PositiveNumber);
    inc->add_option("--seed", inc_seed, "generator seed");
    inc->add_option("--epsilon", inc_epsilon, "stop at floor(epsilon*k) greens, then complete");
    inc->add_option("--t-max", inc_t_max, "run only t-max steps and emit the process trace");
    inc->add_flag("--trace", inc_trace, "emit the per-step process trace");
    inc->add_flag("--no-complete", inc_no_complete,
                  "epsilon runs: skip the uniform completion of the grid");
    inc->add_option("--format", inc_format)->check(CLI::IsMember({"csv", "json"}));
    inc->add_option("--out", inc_out, "output path (default stdout)");

    // experiment
    auto* exp = app.add_subcommand("experiment", "Monte Carlo estimators of the limit laws");
    std::string exp_target = "basins";
    ropg::ExperimentConfig exp_cfg;
    std::optional<std::uint64_t> exp_seed;
    std::string exp_format = "json";
    std::string exp_out;
    exp->add_option("--target", exp_target, "basins, ranks, worst-eq or incremental")
        ->check(CLI::IsMember({"basins", "ranks", "worst-eq", "incremental"}));
    exp->add_option("--k", exp_cfg.k, "actions per player")->required()->check(CLI::PositiveNumber);
    exp->add_option("--trials", exp_cfg.trials, "number of Monte Carlo trials")->required()->check(CLI::PositiveNumber);
    exp->add_option("--epsilon", exp_cfg.epsilons, "comma-separated epsilon grid")
        ->delimiter(',');
    exp->add_option("--seed", exp_seed, "base seed");
    std::string exp_generator = "uniform";
    exp->add_option("--generator", exp_generator, "uniform or incremental")
        ->check(CLI::IsMember({"uniform", "incremental"}));
    exp->add_option("--threads", exp_cfg.thread_budget,
                    "worker threads (default: ROPG_THREADS env var, else hardware)");
    exp->add_option("--horizon", exp_cfg.fluid_horizon,
                    "incremental target: track processes for t <= horizon*K");
    exp->add_flag("--full-profile-starts", exp_cfg.full_profile_starts,
                  "ranks target: sample the start row too");
    exp->add_option("--format", exp_format)->check(CLI::IsMember({"csv", "json"}));
    exp->add_option("--out", exp_out, "output path (default stdout)");

    // theory
    auto* theory = app.add_subcommand("theory", "emit the phi/Phi grid");
    double theory_grid = 0.005;
    std::string theory_out;
    theory->add_option("--grid", theory_grid, "epsilon step (default 0.005)");
    theory->add_option("--out", theory_out, "output path (default stdout)");

    // plot-data
    auto* plot = app.add_subcommand("plot-data", "emit plot-ready curves");
    std::string plot_curve = "ode";
    double plot_grid = 0.01;
    double plot_s_max = 3.0;
    std::string plot_out;
    plot->add_option("--curve", plot_curve, "ode or phi-Phi");
    plot->add_option("--grid", plot_grid, "step size");
    plot->add_option("--s-max", plot_s_max, "ode: largest rescaled time");
    plot->add_option("--out", plot_out, "output path (default stdout)");

    // verify
    auto* verify = app.add_subcommand("verify", "run the built-in oracles");
    std::string verify_suite = "all";
    std::int64_t verify_games = 1000;
    std::string verify_out;
    verify->add_option("--suite", verify_suite, "exact-small-k, basins, greens or all");
    verify->add_option("--games", verify_games, "games/runs per k for sampled suites");
    verify->add_option("--out", verify_out,
                       "write the exact k<=3 distributions as JSON (num/den rationals)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (gen->parsed()) return run_gen(gen_k, gen_seed, gen_format, gen_out);
        if (eq->parsed()) return run_equilibria(eq_in, eq_k, eq_seed, eq_format, eq_out);
        if (brd->parsed())
            return run_brd(brd_in, brd_k, brd_seed, brd_row, brd_col, brd_format, brd_out);
        if (basins->parsed())
            return run_basins(basins_in, basins_k, basins_seed, basins_format, basins_out);
        if (inc->parsed())
            return run_incremental_cmd(inc_k, inc_seed, inc_epsilon, inc_t_max, inc_trace,
                                       inc_no_complete, inc_format, inc_out);
        if (exp->parsed()) {
            if (exp_generator == "incremental")
                exp_cfg.generator = ropg::GeneratorKind::incremental;
            return run_experiment(exp_target, exp_cfg, exp_seed, exp_format, exp_out);
        }
        if (theory->parsed()) return run_theory(theory_grid, theory_out);
        if (plot->parsed()) return run_plot_data(plot_curve, plot_grid, plot_s_max, plot_out);
        if (verify->parsed()) return run_verify(verify_suite, verify_games, verify_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

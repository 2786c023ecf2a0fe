#include "ropg/oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ropg {

std::vector<std::int32_t> statistic_key(const Potential& p, StatisticKind kind) {
    const GameAnalysis analysis = analyze_game(p);
    switch (kind) {
        case StatisticKind::equilibrium_count:
            return {static_cast<std::int32_t>(analysis.equilibria.count())};
        case StatisticKind::sorted_eq_values:
        case StatisticKind::joint:
            return analysis.equilibria.sorted_values();
        case StatisticKind::sorted_basin_sizes: {
            const BasinMap basins = compute_basins(p, analysis);
            std::vector<std::int32_t> sizes;
            sizes.reserve(basins.basin_sizes.size());
            for (const std::int64_t s : basins.basin_sizes)
                sizes.push_back(static_cast<std::int32_t>(s));
            std::sort(sizes.begin(), sizes.end());
            return sizes;
        }
    }
    throw std::invalid_argument("unknown statistic kind");
}

ExactDistribution enumerate_exact(int k, StatisticKind kind) {
    if (k < 1 || k > 3)
        throw std::invalid_argument("exhaustive enumeration supports k in {1, 2, 3}");
    const int n = k * k;
    std::vector<std::int32_t> values(static_cast<std::size_t>(n));
    std::iota(values.begin(), values.end(), 1);

    std::map<std::vector<std::int32_t>, std::int64_t> counts;
    std::int64_t total = 0;
    std::int64_t equilibria_sum = 0;
    do {
        const Potential p = Potential::unchecked(k, values);
        const std::vector<std::int32_t> key = statistic_key(p, kind);
        ++counts[key];
        ++total;
        // For every kind the key length (or the lone entry) recovers W.
        equilibria_sum += kind == StatisticKind::equilibrium_count
                              ? key[0]
                              : static_cast<std::int64_t>(key.size());
    } while (std::next_permutation(values.begin(), values.end()));

    ExactDistribution dist;
    dist.kind = kind;
    dist.k = k;
    dist.mean_equilibria = Rational(equilibria_sum, total);
    dist.support.reserve(counts.size());
    for (const auto& [key, count] : counts)
        dist.support.emplace_back(key, Rational(count, total));
    return dist;
}

bool verify_basins_all_starts(const Potential& p) {
    const int k = p.k();
    const GameAnalysis analysis = analyze_game(p);
    const BasinMap fast = compute_basins(p, analysis);
    std::vector<std::int64_t> brute_sizes(analysis.equilibria.count(), 0);
    for (int c = 1; c <= k; ++c) {
        int column_rank = 0;
        for (int r = 1; r <= k; ++r) {
            const BRDTrace trace = brd_run(p, analysis, {r, c});
            if (r == 1) {
                column_rank = trace.absorbed_rank;
            } else if (trace.absorbed_rank != column_rank) {
                return false;  // column invariance violated
            }
            ++brute_sizes[trace.absorbed_rank - 1];
        }
        if (fast.column_to_rank[c - 1] != column_rank) return false;
    }
    for (std::size_t i = 0; i < brute_sizes.size(); ++i)
        if (brute_sizes[i] != fast.basin_sizes[i]) return false;
    const std::int64_t covered =
        std::accumulate(brute_sizes.begin(), brute_sizes.end(), std::int64_t{0});
    return covered == static_cast<std::int64_t>(k) * k;
}

std::string distribution_to_json(const ExactDistribution& dist) {
    nlohmann::json doc;
    doc["k"] = dist.k;
    switch (dist.kind) {
        case StatisticKind::equilibrium_count: doc["statistic"] = "W"; break;
        case StatisticKind::sorted_eq_values: doc["statistic"] = "sorted_eq_values"; break;
        case StatisticKind::sorted_basin_sizes: doc["statistic"] = "sorted_basin_sizes"; break;
        case StatisticKind::joint: doc["statistic"] = "joint"; break;
    }
    doc["mean_equilibria"] = to_fraction_string(dist.mean_equilibria);
    nlohmann::json support = nlohmann::json::array();
    for (const auto& [key, prob] : dist.support) {
        nlohmann::json entry;
        entry["value"] = key;
        entry["probability"] = to_fraction_string(prob);
        support.push_back(std::move(entry));
    }
    doc["support"] = std::move(support);
    return doc.dump();
}

}  // namespace ropg

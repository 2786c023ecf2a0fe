#include "ropg/potential.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ropg {

namespace {

void check_k(int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (k > kMaxActions) throw std::invalid_argument("k exceeds supported maximum");
}

}  // namespace

Potential::Potential(int k, std::vector<std::int32_t> values) {
    check_k(k);
    const auto n = static_cast<std::size_t>(k) * static_cast<std::size_t>(k);
    if (values.size() != n) throw std::invalid_argument("potential grid must hold k*k values");
    std::vector<bool> seen(n, false);
    for (const std::int32_t v : values) {
        if (v < 1 || static_cast<std::size_t>(v) > n)
            throw std::invalid_argument("potential values must lie in 1..k^2");
        if (seen[static_cast<std::size_t>(v) - 1])
            throw std::invalid_argument("potential values must be distinct");
        seen[static_cast<std::size_t>(v) - 1] = true;
    }
    k_ = k;
    values_ = std::move(values);
}

Potential Potential::unchecked(int k, std::vector<std::int32_t> values) {
    Potential p;
    p.k_ = k;
    p.values_ = std::move(values);
    return p;
}

EquilibriumSet::EquilibriumSet(std::vector<Equilibrium> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const Equilibrium& a, const Equilibrium& b) { return a.value < b.value; });
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i].rank = static_cast<int>(i) + 1;
}

std::vector<std::int32_t> EquilibriumSet::sorted_values() const {
    std::vector<std::int32_t> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.value);
    return out;
}

Potential sample_uniform_potential(int k, std::uint64_t seed) {
    Rng rng(seed);
    return sample_uniform_potential(k, rng);
}

Potential sample_uniform_potential(int k, Rng& rng) {
    check_k(k);
    std::vector<std::int32_t> values(static_cast<std::size_t>(k) * k);
    std::iota(values.begin(), values.end(), 1);
    shuffle(values, rng);
    return Potential::unchecked(k, std::move(values));
}

EquilibriumSet find_equilibria(const Potential& p) {
    const int k = p.k();
    // A cell is an equilibrium iff it is both its row's and its column's
    // strict minimum; values are distinct, so both minima are unique.
    std::vector<int> row_best_col(k), col_best_row(k);
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
                col_best_row[c] = r;
            }
        }
        row_best_col[r] = best_c;
    }
    std::vector<Equilibrium> found;
    for (int r = 0; r < k; ++r) {
        const int c = row_best_col[r];
        if (col_best_row[c] == r)
            found.push_back({{r + 1, c + 1}, p.at(r + 1, c + 1), 0});
    }
    return EquilibriumSet(std::move(found));
}

Rational expected_num_equilibria(int k) {
    check_k(k);
    const auto kk = static_cast<std::int64_t>(k);
    return Rational(kk * kk, 2 * kk - 1);
}

namespace {

void check_permutation(const std::vector<int>& perm, int k, const char* which) {
    if (static_cast<int>(perm.size()) != k)
        throw std::invalid_argument(std::string(which) + " permutation has wrong length");
    std::vector<bool> seen(static_cast<std::size_t>(k), false);
    for (const int v : perm) {
        if (v < 1 || v > k || seen[static_cast<std::size_t>(v) - 1])
            throw std::invalid_argument(std::string(which) + " permutation is not a bijection of [K]");
        seen[static_cast<std::size_t>(v) - 1] = true;
    }
}

}  // namespace

Potential permute_potential(const Potential& p, const std::vector<int>& row_perm,
                            const std::vector<int>& col_perm) {
    const int k = p.k();
    check_permutation(row_perm, k, "row");
    check_permutation(col_perm, k, "column");
    std::vector<std::int32_t> out(p.values().size());
    for (int r = 1; r <= k; ++r) {
        for (int c = 1; c <= k; ++c) {
            const std::size_t idx =
                static_cast<std::size_t>(row_perm[r - 1] - 1) * k + (col_perm[c - 1] - 1);
            out[idx] = p.at(r, c);
        }
    }
    return Potential::unchecked(k, std::move(out));
}

std::string potential_to_csv(const Potential& p) {
    std::string out;
    const int k = p.k();
    for (int r = 1; r <= k; ++r) {
        for (int c = 1; c <= k; ++c) {
            if (c > 1) out += ',';
            out += std::to_string(p.at(r, c));
        }
        out += '\n';
    }
    return out;
}

Potential potential_from_csv(std::istream& in) {
    std::vector<std::vector<std::int32_t>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::int32_t> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(static_cast<std::int32_t>(std::stol(cell)));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("empty potential CSV");
    const int k = static_cast<int>(rows.size());
    std::vector<std::int32_t> values;
    values.reserve(static_cast<std::size_t>(k) * k);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != k)
            throw std::invalid_argument("potential CSV must be a K x K grid");
        values.insert(values.end(), row.begin(), row.end());
    }
    return Potential(k, std::move(values));
}

std::string potential_to_json(const Potential& p) {
    nlohmann::json grid = nlohmann::json::array();
    const int k = p.k();
    for (int r = 1; r <= k; ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 1; c <= k; ++c) row.push_back(p.at(r, c));
        grid.push_back(std::move(row));
    }
    nlohmann::json doc;
    doc["k"] = k;
    doc["values"] = std::move(grid);
    return doc.dump();
}

Potential potential_from_json(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    const int k = doc.at("k").get<int>();
    std::vector<std::int32_t> values;
    values.reserve(static_cast<std::size_t>(k) * k);
    for (const auto& row : doc.at("values"))
        for (const auto& v : row) values.push_back(v.get<std::int32_t>());
    return Potential(k, std::move(values));
}

}  // namespace ropg

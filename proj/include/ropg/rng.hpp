#pragma once

#include <cstdint>
#include <vector>

namespace ropg {

// One SplitMix64 step. Used to expand seeds and derive per-trial streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Seed for an independent stream: splitmix64 applied to
// base_seed + (stream+1) * golden ratio. This is the documented trial-seed
// derivation rule; it decouples reproducibility from scheduling.
inline std::uint64_t mix_seed(std::uint64_t base_seed, std::uint64_t stream) {
    std::uint64_t s = base_seed + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    return splitmix64(s);
}

// xoshiro256++ seeded via SplitMix64. The algorithm is fixed so that the same
// seed reproduces the same stream on every platform; no std:: distributions
// are used anywhere (their mappings are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, n), unbiased (Lemire's multiply-shift with rejection).
    std::uint64_t below(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform on [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Bernoulli event of probability num/den, evaluated in exact integer
    // arithmetic; requires den > 0.
    bool bernoulli_ratio(std::uint64_t num, std::uint64_t den) {
        return below(den) < num;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4]{};
};

// Fisher-Yates shuffle driven by Rng::below; bit-reproducible.
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace ropg

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "mpfs/errors.hpp"

namespace mpfs {

/// splitmix64 finalizer; mixes a 64-bit value into a well-distributed one.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Combine two values into one stream key (order-sensitive).
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(a) ^ (b + 0x9E3779B97F4A7C15ULL));
}

/// Independent RNG stream for iteration k of a run with the given seed.
/// Every sampler draws from per-iteration streams, so a patch is a pure
/// function of (seed, k) regardless of how many iterations ran before it
/// or on which thread it is generated.
inline std::mt19937_64 iteration_stream(std::uint64_t seed, std::uint64_t k) {
    return std::mt19937_64(mix64(seed, k));
}

/// Draw `count` distinct indices from {0,...,universe-1} uniformly without
/// replacement (partial Fisher-Yates), returned sorted ascending.
inline std::vector<int> sample_without_replacement(int universe, int count,
                                                   std::mt19937_64& rng) {
    if (count < 1) throw ConfigError("sample size must be >= 1");
    if (count > universe)
        throw ConfigError("sample size " + std::to_string(count) +
                          " exceeds universe size " + std::to_string(universe));
    std::vector<int> pool(universe);
    for (int i = 0; i < universe; ++i) pool[i] = i;
    for (int i = 0; i < count; ++i) {
        std::uniform_int_distribution<int> pick(i, universe - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(count);
    std::sort(pool.begin(), pool.end());
    return pool;
}

/// In-place Fisher-Yates shuffle of an index vector.
template <typename T>
void shuffle_indices(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(v[i - 1], v[pick(rng)]);
    }
}

}  // namespace mpfs

#include "mpfs/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mpfs/errors.hpp"
#include "mpfs/rng.hpp"

namespace mpfs {

const char* to_string(SamplerScheme s) {
    switch (s) {
        case SamplerScheme::uniform: return "uniform";
        case SamplerScheme::ee: return "ee";
        case SamplerScheme::prob: return "prob";
    }
    return "?";
}

SamplerScheme sampler_scheme_from_string(const std::string& s) {
    if (s == "uniform") return SamplerScheme::uniform;
    if (s == "ee") return SamplerScheme::ee;
    if (s == "prob") return SamplerScheme::prob;
    throw ConfigError("unknown sampler scheme '" + s + "'");
}

std::vector<int> sample_observations(int N, int n, std::mt19937_64& rng) {
    return sample_without_replacement(N, n, rng);
}

std::vector<int> sample_features_uniform(int M, int m, std::mt19937_64& rng) {
    return sample_without_replacement(M, m, rng);
}

double gamma_schedule(std::int64_t k, int epochs, int groups, int ramp_iters) {
    const std::int64_t burn_in = static_cast<std::int64_t>(epochs) * groups;
    if (k <= burn_in)
        throw ContractError("gamma_schedule called during burn-in");
    if (ramp_iters < 1) throw ConfigError("gamma ramp length must be >= 1");
    const double step = static_cast<double>(k - burn_in) /
                        static_cast<double>(ramp_iters);
    return std::min(1.0, 0.5 * std::exp2(step));
}

namespace {

int group_count_for(int M, int m) {
    return static_cast<int>((M + m - 1) / m);  // ceil(M/m)
}

/// Burn-in block for 1-based iteration k: reshuffle at each epoch start
/// ((k-1) mod G == 0) and hand out consecutive blocks of the shuffled
/// order. The last block of an epoch may be smaller than m when M mod m
/// is nonzero.
std::vector<int> burn_in_block(SamplerState& state, int M, int m, int G,
                               std::mt19937_64& rng) {
    const std::int64_t k = state.iteration;
    const int g = static_cast<int>((k - 1) % G);
    if (g == 0) {
        if (state.epoch_order.empty()) {
            state.epoch_order.resize(M);
            for (int j = 0; j < M; ++j) state.epoch_order[j] = j;
        }
        shuffle_indices(state.epoch_order, rng);
        state.epoch = (k - 1) / G;
    }
    const std::int64_t lo = static_cast<std::int64_t>(g) * m;
    const std::int64_t hi = std::min<std::int64_t>(lo + m, M);
    std::vector<int> block(state.epoch_order.begin() + lo,
                           state.epoch_order.begin() + hi);
    std::sort(block.begin(), block.end());
    return block;
}

/// Uniform draw of `count` elements from `pool` without replacement.
std::vector<int> draw_from_pool(std::vector<int> pool, int count,
                                std::mt19937_64& rng) {
    for (int i = 0; i < count; ++i) {
        std::uniform_int_distribution<int> pick(i, static_cast<int>(pool.size()) - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(count);
    return pool;
}

void check_adaptive_preconditions(const SamplerState& state,
                                  const SamplerConfig& cfg, int M) {
    if (state.iteration < 1)
        throw ContractError("sampler iteration must be >= 1");
    if (cfg.epochs < 1)
        throw ConfigError("adaptive sampling requires at least one burn-in epoch");
    if (cfg.m < 1 || cfg.m > M)
        throw ConfigError("minipatch width m must satisfy 1 <= m <= M");
}

}  // namespace

std::vector<int> sample_features_ee(SamplerState& state,
                                    const SelectionTracker& tracker,
                                    const SamplerConfig& cfg,
                                    std::mt19937_64& rng) {
    const int M = tracker.n_features();
    check_adaptive_preconditions(state, cfg, M);
    const int m = cfg.m;
    const int G = group_count_for(M, m);
    const std::int64_t k = state.iteration;
    const std::int64_t burn_in = static_cast<std::int64_t>(cfg.epochs) * G;

    if (k <= burn_in) return burn_in_block(state, M, m, G, rng);

    state.active_set.clear();
    std::vector<int> complement;
    complement.reserve(M);
    for (int j = 0; j < M; ++j) {
        if (tracker.frequency(j) >= cfg.pi_active)
            state.active_set.push_back(j);
        else
            complement.push_back(j);
    }

    const int ramp = cfg.gamma_ramp_iters > 0 ? cfg.gamma_ramp_iters : 5 * G;
    state.gamma = gamma_schedule(k, cfg.epochs, G, ramp);

    const int active_size = static_cast<int>(state.active_set.size());
    const int exploit_count =
        std::min(m, static_cast<int>(std::floor(state.gamma * active_size)));
    std::vector<int> out = draw_from_pool(state.active_set, exploit_count, rng);

    int explore_count = m - exploit_count;
    if (explore_count > static_cast<int>(complement.size())) {
        // Complement too small: take all of it and backfill from the
        // not-yet-exploited part of the active set to keep the patch width.
        const int shortfall = explore_count - static_cast<int>(complement.size());
        out.insert(out.end(), complement.begin(), complement.end());
        std::vector<int> sorted_exploited(out.begin(), out.begin() + exploit_count);
        std::sort(sorted_exploited.begin(), sorted_exploited.end());
        std::vector<int> leftover;
        for (int j : state.active_set)
            if (!std::binary_search(sorted_exploited.begin(),
                                    sorted_exploited.end(), j))
                leftover.push_back(j);
        std::vector<int> backfill = draw_from_pool(std::move(leftover), shortfall, rng);
        out.insert(out.end(), backfill.begin(), backfill.end());
    } else if (explore_count > 0) {
        std::vector<int> explored =
            draw_from_pool(std::move(complement), explore_count, rng);
        out.insert(out.end(), explored.begin(), explored.end());
    }

    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> sample_features_prob(SamplerState& state,
                                      const SelectionTracker& tracker,
                                      const SamplerConfig& cfg,
                                      std::mt19937_64& rng) {
    const int M = tracker.n_features();
    check_adaptive_preconditions(state, cfg, M);
    const int m = cfg.m;
    const int G = group_count_for(M, m);
    const std::int64_t k = state.iteration;
    const std::int64_t burn_in = static_cast<std::int64_t>(cfg.epochs) * G;

    if (k <= burn_in) return burn_in_block(state, M, m, G, rng);

    std::vector<double> weight = tracker.frequencies();
    double total = 0.0;
    for (double w : weight) total += w;

    state.probabilities.assign(M, 0.0);
    if (total <= 0.0) {
        // No feature has ever been selected; nothing to bias toward.
        return sample_features_uniform(M, m, rng);
    }
    for (int j = 0; j < M; ++j) state.probabilities[j] = weight[j] / total;

    // Iterated weighted draws with renormalization: each draw removes the
    // chosen feature's weight from the pool.
    std::vector<char> taken(M, 0);
    std::vector<int> out;
    out.reserve(m);
    while (static_cast<int>(out.size()) < m) {
        double remaining = 0.0;
        for (int j = 0; j < M; ++j)
            if (!taken[j]) remaining += weight[j];
        if (remaining <= 0.0) break;
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double u = unit(rng) * remaining;
        int chosen = -1;
        for (int j = 0; j < M; ++j) {
            if (taken[j] || weight[j] <= 0.0) continue;
            u -= weight[j];
            chosen = j;
            if (u <= 0.0) break;
        }
        if (chosen < 0) break;  // positive weights exhausted
        taken[chosen] = 1;
        out.push_back(chosen);
    }

    // Fewer than m features carried positive weight: fill the remainder
    // uniformly from the unsampled features.
    if (static_cast<int>(out.size()) < m) {
        std::vector<int> unsampled;
        unsampled.reserve(M - out.size());
        for (int j = 0; j < M; ++j)
            if (!taken[j]) unsampled.push_back(j);
        std::vector<int> fill = draw_from_pool(
            std::move(unsampled), m - static_cast<int>(out.size()), rng);
        out.insert(out.end(), fill.begin(), fill.end());
    }

    std::sort(out.begin(), out.end());
    return out;
}

FeatureSampler::FeatureSampler(const SamplerConfig& cfg, int n_features)
    : cfg_(cfg), n_features_(n_features),
      groups_(group_count_for(n_features, cfg.m)) {
    if (cfg_.m < 1 || cfg_.m > n_features_)
        throw ConfigError("minipatch width m must satisfy 1 <= m <= M");
    if (cfg_.scheme != SamplerScheme::uniform && cfg_.epochs < 1)
        throw ConfigError("adaptive sampling requires epochs >= 1");
}

std::vector<int> FeatureSampler::next(const SelectionTracker& tracker,
                                      std::mt19937_64& rng) {
    ++state_.iteration;
    switch (cfg_.scheme) {
        case SamplerScheme::uniform:
            return sample_features_uniform(n_features_, cfg_.m, rng);
        case SamplerScheme::ee:
            return sample_features_ee(state_, tracker, cfg_, rng);
        case SamplerScheme::prob:
            return sample_features_prob(state_, tracker, cfg_, rng);
    }
    throw ContractError("unreachable sampler scheme");
}

std::int64_t FeatureSampler::burn_in_iters() const {
    if (cfg_.scheme == SamplerScheme::uniform) return 0;
    return static_cast<std::int64_t>(cfg_.epochs) * groups_;
}

}  // namespace mpfs

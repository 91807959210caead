#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mpfs/tracker.hpp"

namespace mpfs {

enum class SamplerScheme { uniform, ee, prob };

struct SamplerConfig {
    int n = 0;  ///< observations per minipatch
    int m = 0;  ///< features per minipatch
    SamplerScheme scheme = SamplerScheme::uniform;
    int epochs = 10;           ///< burn-in epochs E (adaptive schemes)
    double pi_active = 0.1;    ///< active-set threshold (ee)
    int gamma_ramp_iters = 0;  ///< 0 => default 5 * ceil(M/m)
    std::uint64_t seed = 0;
};

const char* to_string(SamplerScheme s);
SamplerScheme sampler_scheme_from_string(const std::string& s);

/// Mutable sampler position. During burn-in, `epoch_order` holds the
/// shuffled feature order whose consecutive blocks form the disjoint
/// partition of the current epoch. The remaining fields are refreshed on
/// each adaptive-stage call and exposed for logging and tests.
struct SamplerState {
    std::int64_t iteration = 0;  ///< iterations issued so far
    std::int64_t epoch = 0;
    std::vector<int> epoch_order;
    std::vector<int> active_set;          ///< ee adaptive stage
    double gamma = 0.0;                   ///< ee adaptive stage
    std::vector<double> probabilities;    ///< prob adaptive stage
};

/// n distinct observation indices from {0,...,N-1}, uniform without
/// replacement, sorted.
std::vector<int> sample_observations(int N, int n, std::mt19937_64& rng);

/// m distinct feature indices from {0,...,M-1}, uniform without
/// replacement, sorted.
std::vector<int> sample_features_uniform(int M, int m, std::mt19937_64& rng);

/// Exploitation fraction for adaptive iteration k (requires k > E*G).
/// Geometric ramp from 0.5 up to exactly 1 at k = E*G + ramp_iters,
/// clamped to 1 afterwards.
double gamma_schedule(std::int64_t k, int epochs, int groups, int ramp_iters);

/// One feature draw of the exploitation-exploration scheme at iteration
/// state.iteration. Burn-in (k <= E*G) walks disjoint partition blocks so
/// that after E*G iterations every feature was sampled exactly E times;
/// afterwards min(m, floor(gamma*|A|)) features are exploited from the
/// active set A = {j : freq_j >= pi_active} and the rest explored from its
/// complement (backfilled from A when the complement runs short).
std::vector<int> sample_features_ee(SamplerState& state,
                                    const SelectionTracker& tracker,
                                    const SamplerConfig& cfg,
                                    std::mt19937_64& rng);

/// One feature draw of the probabilistic scheme: burn-in as above, then m
/// features without replacement by iterated weighted draws proportional to
/// the current selection frequencies (uniform fallback when all are zero,
/// uniform fill when fewer than m features carry positive weight).
std::vector<int> sample_features_prob(SamplerState& state,
                                      const SelectionTracker& tracker,
                                      const SamplerConfig& cfg,
                                      std::mt19937_64& rng);

/// Stateful per-run feature sampler dispatching on the configured scheme.
class FeatureSampler {
public:
    FeatureSampler(const SamplerConfig& cfg, int n_features);

    /// Generate the feature set for the next iteration and advance state.
    std::vector<int> next(const SelectionTracker& tracker, std::mt19937_64& rng);

    const SamplerState& state() const { return state_; }
    int group_count() const { return groups_; }

    /// E*G for adaptive schemes, 0 for the uniform scheme.
    std::int64_t burn_in_iters() const;

private:
    SamplerConfig cfg_;
    int n_features_;
    int groups_;
    SamplerState state_;
};

}  // namespace mpfs

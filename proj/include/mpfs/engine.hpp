#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mpfs/data_matrix.hpp"
#include "mpfs/samplers.hpp"
#include "mpfs/selectors.hpp"
#include "mpfs/thresholding.hpp"
#include "mpfs/tracker.hpp"

namespace mpfs {

enum class ThresholdMode { fixed, kde, oracle };

const char* to_string(ThresholdMode m);

struct EngineConfig {
    SamplerConfig sampler;
    SelectorSpec selector;
    double pi_thr = 0.5;
    ThresholdMode threshold_mode = ThresholdMode::fixed;
    int oracle_cardinality = 0;  ///< required when threshold_mode == oracle
    KdeConfig kde;
    int tau_l = 30;   ///< lower clamp of the ranked-list length
    int tau_u = 90;   ///< upper clamp; must be a multiple of tau_l
    int patience = 100;
    std::int64_t max_iters = 0;  ///< 0 => 20*E*G adaptive, 10000 uniform
    int threads = 1;  ///< uniform-sampler batch parallelism only
};

/// Streak tracker for the stopping criterion.
struct StopState {
    std::vector<int> last_top_list;
    int unchanged_streak = 0;
};

/// One stopping-criterion evaluation. Ranks the top
/// t = min(max(|H|, tau_l), tau_u) features (H = frequencies >= 0.5) by
/// frequency descending with ascending-index tie-breaks, and reports true
/// once that ordered list has stayed identical for `patience` consecutive
/// checks.
bool check_stop(const SelectionTracker& tracker, StopState& state, int tau_l,
                int tau_u, int patience);

struct RunResult {
    std::vector<int> stable_set;
    std::vector<double> frequencies;
    std::int64_t iterations_run = 0;
    double threshold_used = 0.0;
    ThresholdMode threshold_provenance = ThresholdMode::fixed;
    double wall_time_sec = 0.0;
    EngineConfig config_echo;
};

/// Full STAMPS / AdaSTAMPS run: sample minipatch, fit the base selector,
/// fold its support into the tracker, and repeat until the stopping
/// criterion fires (never before burn-in completes for adaptive schemes)
/// or max_iters is reached. The configured threshold rule then maps the
/// final frequencies to the stable set.
///
/// Deterministic given config.sampler.seed: with the uniform scheme,
/// minipatches are processed in parallel batches but every patch and the
/// outcome are pure functions of (seed, k), so results are independent of
/// the thread count.
RunResult run(const DataMatrix& data, const EngineConfig& config,
              std::ostream* log = nullptr);

/// Validate config against data dimensions; throws ConfigError.
/// Returns the resolved max_iters.
std::int64_t validate_config(const DataMatrix& data, const EngineConfig& config);

}  // namespace mpfs

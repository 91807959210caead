#include "mpfs/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "mpfs/errors.hpp"
#include "mpfs/rng.hpp"

namespace mpfs {

const char* to_string(ThresholdMode m) {
    switch (m) {
        case ThresholdMode::fixed: return "fixed";
        case ThresholdMode::kde: return "kde";
        case ThresholdMode::oracle: return "oracle";
    }
    return "?";
}

namespace {

std::vector<int> top_ranked(const std::vector<double>& freq, int t) {
    const int M = static_cast<int>(freq.size());
    t = std::min(t, M);
    std::vector<int> order(M);
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + t, order.end(),
                      [&](int a, int b) {
                          if (freq[a] != freq[b]) return freq[a] > freq[b];
                          return a < b;
                      });
    order.resize(t);
    return order;
}

}  // namespace

bool check_stop(const SelectionTracker& tracker, StopState& state, int tau_l,
                int tau_u, int patience) {
    const std::vector<double> freq = tracker.frequencies();
    int h = 0;
    for (double f : freq)
        if (f >= 0.5) ++h;
    const int t = std::min(std::max(h, tau_l), tau_u);

    std::vector<int> top = top_ranked(freq, t);
    if (top == state.last_top_list)
        state.unchanged_streak = std::min(state.unchanged_streak + 1, patience);
    else
        state.unchanged_streak = 0;
    state.last_top_list = std::move(top);
    return state.unchanged_streak >= patience;
}

std::int64_t validate_config(const DataMatrix& data,
                             const EngineConfig& config) {
    const int N = data.n_obs();
    const int M = data.n_features();
    const auto& s = config.sampler;
    if (s.n < 1 || s.n > N)
        throw ConfigError("minipatch observation count n=" +
                          std::to_string(s.n) + " must satisfy 1 <= n <= N=" +
                          std::to_string(N));
    if (s.m < 1 || s.m > M)
        throw ConfigError("minipatch feature count m=" + std::to_string(s.m) +
                          " must satisfy 1 <= m <= M=" + std::to_string(M));
    if (s.scheme != SamplerScheme::uniform && s.epochs < 1)
        throw ConfigError("adaptive sampling requires epochs >= 1");
    if (s.scheme == SamplerScheme::ee &&
        (!(s.pi_active > 0.0) || !(s.pi_active < 1.0)))
        throw ConfigError("pi_active must lie in (0, 1)");
    if (config.selector.kind == SelectorKind::thresholded_ols) {
        if (s.n <= s.m + 1)
            throw ConfigError(
                "thresholded OLS requires n > m + 1 within each minipatch "
                "(got n=" + std::to_string(s.n) + ", m=" +
                std::to_string(s.m) + ")");
        if (!(config.selector.alpha_sel > 0.0) ||
            !(config.selector.alpha_sel < 1.0))
            throw ConfigError("selector alpha must lie in (0, 1)");
    }
    if (config.selector.kind == SelectorKind::univariate_topk &&
        config.selector.top_k < 1)
        throw ConfigError("univariate selector top_k must be >= 1");
    if (!(config.pi_thr > 0.0) || !(config.pi_thr < 1.0))
        throw ConfigError("pi_thr must lie in (0, 1)");
    if (config.threshold_mode == ThresholdMode::oracle &&
        (config.oracle_cardinality < 1 || config.oracle_cardinality > M))
        throw ConfigError("oracle threshold cardinality must lie in [1, M]");
    if (config.tau_l < 1 || config.tau_u < config.tau_l)
        throw ConfigError("need 1 <= tau_l <= tau_u");
    if (config.tau_u % config.tau_l != 0)
        throw ConfigError("tau_u must be a multiple of tau_l");
    if (config.patience < 1) throw ConfigError("patience must be >= 1");
    if (config.threads < 1) throw ConfigError("threads must be >= 1");
    if (config.max_iters < 0) throw ConfigError("max_iters must be >= 0");

    if (config.max_iters > 0) return config.max_iters;
    if (s.scheme == SamplerScheme::uniform) return 10000;
    const std::int64_t groups = (M + s.m - 1) / s.m;
    return 20 * static_cast<std::int64_t>(s.epochs) * groups;
}

namespace {

struct IterationOutcome {
    Minipatch patch;
    std::vector<int> support;  // global feature indices
};

/// Sample, extract, and select for iteration k. Pure function of
/// (data, config, seed, k) for the uniform scheme; adaptive schemes pass
/// their own feature set in.
IterationOutcome run_iteration(const DataMatrix& data,
                               const EngineConfig& cfg,
                               const SelectorFn& selector, std::int64_t k,
                               std::vector<int> feats) {
    std::mt19937_64 rng = iteration_stream(cfg.sampler.seed, k);
    std::vector<int> obs = sample_observations(data.n_obs(), cfg.sampler.n, rng);
    // Uniform scheme draws features from the same per-iteration stream,
    // after the observation draw.
    if (feats.empty())
        feats = sample_features_uniform(data.n_features(), cfg.sampler.m, rng);
    Minipatch patch(std::move(obs), std::move(feats), k);
    auto [y_sub, X_sub] = extract_minipatch(data, patch);
    std::vector<int> local = selector(y_sub, X_sub, rng);
    std::sort(local.begin(), local.end());
    std::vector<int> support;
    support.reserve(local.size());
    for (int b : local) {
        if (b < 0 || b >= patch.m())
            throw ContractError("base selector returned local index " +
                                std::to_string(b) +
                                " outside minipatch width at iteration " +
                                std::to_string(k));
        support.push_back(patch.feat_idx[b]);
    }
    return {std::move(patch), std::move(support)};
}

void log_iteration(std::ostream* log, std::int64_t k,
                   const FeatureSampler& sampler, const StopState& stop,
                   bool adaptive) {
    if (!log) return;
    *log << "iter=" << k;
    if (adaptive) {
        *log << " |A|=" << sampler.state().active_set.size()
             << " gamma=" << sampler.state().gamma;
    }
    *log << " streak=" << stop.unchanged_streak << " top=[";
    const auto& top = stop.last_top_list;
    for (std::size_t i = 0; i < top.size() && i < 8; ++i) {
        if (i) *log << ",";
        *log << top[i];
    }
    if (top.size() > 8) *log << ",...";
    *log << "]\n";
}

}  // namespace

RunResult run(const DataMatrix& data, const EngineConfig& config,
              std::ostream* log) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::int64_t max_iters = validate_config(data, config);
    const SelectorFn selector = make_selector(config.selector);
    const bool uniform = config.sampler.scheme == SamplerScheme::uniform;

    SelectionTracker tracker(data.n_features());
    FeatureSampler sampler(config.sampler, data.n_features());
    const std::int64_t burn_in = sampler.burn_in_iters();
    StopState stop;
    std::int64_t iterations = 0;
    bool stopped = false;

    if (uniform && config.threads > 1) {
        // Batch-parallel: outcomes are pure functions of (seed, k), so we
        // evaluate a block of iterations concurrently and fold the results
        // into the tracker in iteration order. Identical to the sequential
        // path for any thread count.
        const int batch = std::max(4 * config.threads, 16);
        std::int64_t next_k = 1;
        while (next_k <= max_iters && !stopped) {
            const std::int64_t hi =
                std::min<std::int64_t>(next_k + batch - 1, max_iters);
            const int count = static_cast<int>(hi - next_k + 1);
            std::vector<IterationOutcome> outcomes(count);
            std::vector<std::thread> workers;
            std::atomic<int> cursor{0};
            std::exception_ptr failure;
            std::mutex failure_mutex;
            const int n_workers = std::min(config.threads, count);
            for (int w = 0; w < n_workers; ++w) {
                workers.emplace_back([&] {
                    try {
                        for (int i = cursor.fetch_add(1); i < count;
                             i = cursor.fetch_add(1)) {
                            outcomes[i] = run_iteration(data, config, selector,
                                                        next_k + i, {});
                        }
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                });
            }
            for (auto& w : workers) w.join();
            if (failure) std::rethrow_exception(failure);
            for (int i = 0; i < count && !stopped; ++i) {
                tracker.update(outcomes[i].patch, outcomes[i].support);
                iterations = next_k + i;
                stopped = check_stop(tracker, stop, config.tau_l, config.tau_u,
                                     config.patience);
                log_iteration(log, iterations, sampler, stop, false);
            }
            next_k = iterations + 1;
        }
    } else {
        for (std::int64_t k = 1; k <= max_iters; ++k) {
            std::vector<int> feats;
            if (!uniform) {
                std::mt19937_64 feat_rng =
                    iteration_stream(mix64(config.sampler.seed, 0x5EEDu), k);
                feats = sampler.next(tracker, feat_rng);
            }
            IterationOutcome out =
                run_iteration(data, config, selector, k, std::move(feats));
            tracker.update(out.patch, out.support);
            iterations = k;
            const bool want_stop = check_stop(tracker, stop, config.tau_l,
                                              config.tau_u, config.patience);
            log_iteration(log, k, sampler, stop, !uniform);
            // Adaptive schemes may not terminate before burn-in completes.
            if (want_stop && k >= burn_in) {
                stopped = true;
                break;
            }
        }
    }

    RunResult result;
    result.config_echo = config;
    result.iterations_run = iterations;
    result.frequencies = tracker.frequencies();
    result.threshold_provenance = config.threshold_mode;
    switch (config.threshold_mode) {
        case ThresholdMode::fixed:
            result.threshold_used = config.pi_thr;
            result.stable_set = fixed_select(result.frequencies, config.pi_thr);
            break;
        case ThresholdMode::kde:
            result.threshold_used = kde_threshold(result.frequencies, config.kde);
            result.stable_set =
                fixed_select(result.frequencies, result.threshold_used);
            break;
        case ThresholdMode::oracle:
            result.threshold_used = 0.0;
            result.stable_set =
                oracle_select(result.frequencies, config.oracle_cardinality);
            break;
    }
    result.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return result;
}

}  // namespace mpfs

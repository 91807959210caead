#include "mpfs/synth.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>

#include "mpfs/errors.hpp"
#include "mpfs/rng.hpp"
#include "mpfs/samplers.hpp"
#include "mpfs/selectors.hpp"
#include "mpfs/thresholding.hpp"
#include "mpfs/tracker.hpp"

namespace mpfs {

namespace {

double sample_variance(const Eigen::VectorXd& v) {
    const double mean = v.mean();
    return (v.array() - mean).square().sum() /
           std::max<Eigen::Index>(1, v.size() - 1);
}

}  // namespace

std::pair<DataMatrix, GroundTruth> generate_s1(const ScenarioConfig& config) {
    if (config.N < 2 || config.M < 1)
        throw ConfigError("scenario needs N >= 2 and M >= 1");
    if (config.support_size < 1 || config.support_size > config.M)
        throw ConfigError("support size must lie in [1, M]");
    if (!(config.rho > -1.0) || !(config.rho < 1.0))
        throw ConfigError("rho must lie in (-1, 1)");
    if (!(config.snr > 0.0)) throw ConfigError("snr must be positive");

    const int N = config.N;
    const int M = config.M;
    std::mt19937_64 rng(mix64(config.seed));
    std::normal_distribution<double> gauss(0.0, 1.0);

    // AR(1) recursion per row gives Cov(x_i, x_j) = rho^|i-j| exactly.
    Eigen::MatrixXd X(N, M);
    const double rho = config.rho;
    const double innovation = std::sqrt(1.0 - rho * rho);
    for (int i = 0; i < N; ++i) {
        double prev = gauss(rng);
        X(i, 0) = prev;
        for (int j = 1; j < M; ++j) {
            prev = rho * prev + innovation * gauss(rng);
            X(i, j) = prev;
        }
    }

    GroundTruth truth;
    truth.support = sample_without_replacement(M, config.support_size, rng);

    // Signed magnitudes in [2, 3]; the 1/b scaling is applied afterwards.
    Eigen::VectorXd raw_beta = Eigen::VectorXd::Zero(M);
    std::uniform_real_distribution<double> magnitude(2.0, 3.0);
    for (int j : truth.support) {
        const double mag = magnitude(rng);
        const bool negative = (rng() & 1ULL) != 0;
        raw_beta(j) = negative ? -mag : mag;
    }

    Eigen::VectorXd noise(N);
    for (int i = 0; i < N; ++i) noise(i) = gauss(rng);

    const Eigen::VectorXd raw_signal = X * raw_beta;
    const double signal_var = sample_variance(raw_signal);
    const double noise_var = sample_variance(noise);
    if (signal_var <= 0.0 || noise_var <= 0.0)
        throw DataError("degenerate scenario draw: zero signal or noise variance");

    // Var(X beta) scales as 1/b^2, so one rescaling pass pins the
    // empirical SNR of this instance exactly.
    truth.b_used = std::sqrt(signal_var / (config.snr * noise_var));
    truth.beta = raw_beta / truth.b_used;

    Eigen::VectorXd y = raw_signal / truth.b_used + noise;
    return {DataMatrix(std::move(y), std::move(X)), std::move(truth)};
}

double f1_score(const std::vector<int>& estimated,
                const std::vector<int>& truth) {
    if (truth.empty()) throw ConfigError("f1_score needs a non-empty truth set");
    std::vector<int> est_sorted = estimated;
    std::vector<int> truth_sorted = truth;
    std::sort(est_sorted.begin(), est_sorted.end());
    std::sort(truth_sorted.begin(), truth_sorted.end());
    std::vector<int> overlap;
    std::set_intersection(est_sorted.begin(), est_sorted.end(),
                          truth_sorted.begin(), truth_sorted.end(),
                          std::back_inserter(overlap));
    const double precision =
        est_sorted.empty() ? 0.0
                           : static_cast<double>(overlap.size()) /
                                 static_cast<double>(est_sorted.size());
    const double recall = static_cast<double>(overlap.size()) /
                          static_cast<double>(truth_sorted.size());
    if (precision + recall <= 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

namespace {

/// One pure-noise replicate: returns true when the stable set is non-empty
/// (every selection is a false positive since the true support is empty).
bool fwer_replicate(const FwerConfig& cfg, std::uint64_t replicate_seed) {
    std::mt19937_64 rng(mix64(replicate_seed));
    std::normal_distribution<double> gauss(0.0, 1.0);

    Eigen::MatrixXd X(cfg.N, cfg.M);
    for (int i = 0; i < cfg.N; ++i)
        for (int j = 0; j < cfg.M; ++j) X(i, j) = gauss(rng);
    Eigen::VectorXd y(cfg.N);
    for (int i = 0; i < cfg.N; ++i) y(i) = gauss(rng);
    DataMatrix data(std::move(y), std::move(X));

    const double selector_alpha = cfg.alpha * cfg.pi_thr / cfg.M;
    SelectionTracker tracker(cfg.M);

    const int groups = (cfg.M + cfg.m - 1) / cfg.m;
    const int post = cfg.post_coverage_iters > 0 ? cfg.post_coverage_iters
                                                 : 10 * groups;

    // One complete coverage pass over disjoint feature blocks, then
    // uniform sampling.
    std::vector<int> order(cfg.M);
    for (int j = 0; j < cfg.M; ++j) order[j] = j;
    shuffle_indices(order, rng);

    std::int64_t k = 0;
    auto process = [&](std::vector<int> feats) {
        ++k;
        std::vector<int> obs = sample_observations(cfg.N, cfg.n, rng);
        Minipatch patch(std::move(obs), std::move(feats), k);
        auto [y_sub, X_sub] = extract_minipatch(data, patch);
        std::vector<int> local =
            select_thresholded_ols(y_sub, X_sub, selector_alpha);
        std::vector<int> support;
        support.reserve(local.size());
        for (int b : local) support.push_back(patch.feat_idx[b]);
        tracker.update(patch, support);
    };

    for (int g = 0; g < groups; ++g) {
        const int lo = g * cfg.m;
        const int hi = std::min(lo + cfg.m, cfg.M);
        std::vector<int> block(order.begin() + lo, order.begin() + hi);
        std::sort(block.begin(), block.end());
        process(std::move(block));
    }
    for (int it = 0; it < post; ++it)
        process(sample_features_uniform(cfg.M, cfg.m, rng));

    const std::vector<int> stable =
        fixed_select(tracker.frequencies(), cfg.pi_thr);
    return !stable.empty();
}

}  // namespace

FwerResult fwer_experiment(const FwerConfig& cfg) {
    if (cfg.M < 1 || cfg.N < 2) throw ConfigError("fwer needs M >= 1, N >= 2");
    if (cfg.n < 1 || cfg.n > cfg.N || cfg.m < 1 || cfg.m > cfg.M)
        throw ConfigError("fwer minipatch size out of range");
    if (cfg.n <= cfg.m + 1)
        throw ConfigError("fwer thresholded OLS requires n > m + 1");
    if (!(cfg.alpha > 0.0) || cfg.alpha > 1.0)
        throw ConfigError("alpha must lie in (0, 1]");
    if (cfg.replicates < 1) throw ConfigError("need at least one replicate");
    if (!(cfg.pi_thr > 0.0) || !(cfg.pi_thr < 1.0))
        throw ConfigError("pi_thr must lie in (0, 1)");

    std::atomic<int> false_positives{0};
    std::atomic<int> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const int n_workers = std::max(1, std::min(cfg.threads, cfg.replicates));
    std::vector<std::thread> workers;
    for (int w = 0; w < n_workers; ++w) {
        workers.emplace_back([&] {
            try {
                for (int r = cursor.fetch_add(1); r < cfg.replicates;
                     r = cursor.fetch_add(1)) {
                    if (fwer_replicate(cfg, mix64(cfg.seed, r)))
                        false_positives.fetch_add(1);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& w : workers) w.join();
    if (failure) std::rethrow_exception(failure);

    FwerResult result;
    result.replicates = cfg.replicates;
    result.false_positive_runs = false_positives.load();
    result.empirical_fwer = static_cast<double>(result.false_positive_runs) /
                            cfg.replicates;
    result.alpha_bound = cfg.alpha;
    result.binomial_margin =
        2.0 * std::sqrt(cfg.alpha * (1.0 - cfg.alpha) / cfg.replicates);
    result.selector_alpha = cfg.alpha * cfg.pi_thr / cfg.M;
    result.unreliable = cfg.replicates < 50;
    return result;
}

}  // namespace mpfs

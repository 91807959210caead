#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "mpfs/data_matrix.hpp"

namespace mpfs {

/// Autoregressive Toeplitz regression benchmark: rows are N(0, Sigma) with
/// Sigma_ij = rho^|i-j|, a sparse coefficient vector on a random support,
/// and unit-variance Gaussian noise scaled to hit the requested SNR.
struct ScenarioConfig {
    int N = 0;
    int M = 0;
    int support_size = 20;
    double rho = 0.95;
    double snr = 1.0;
    std::uint64_t seed = 0;
};

struct GroundTruth {
    std::vector<int> support;  ///< sorted true-signal indices
    Eigen::VectorXd beta;      ///< length M; zero off support
    double b_used = 0.0;       ///< scaling: |beta_j| in [2/b, 3/b] on support
};

/// Deterministic given config.seed. Each row follows the AR(1) recursion
/// x_0 ~ N(0,1), x_j = rho*x_{j-1} + sqrt(1-rho^2)*z_j, which realizes the
/// Toeplitz covariance exactly. Signed coefficient magnitudes are uniform
/// in [2, 3] before the 1/b scaling; b is solved so that the empirical
/// Var(X*beta)/Var(noise) on the generated instance equals snr.
std::pair<DataMatrix, GroundTruth> generate_s1(const ScenarioConfig& config);

/// Harmonic mean of precision and recall of `estimated` against `truth`
/// (index sets). Zero when either is empty of overlap; truth must be
/// non-empty.
double f1_score(const std::vector<int>& estimated,
                const std::vector<int>& truth);

/// Empirical familywise-error-rate study on pure-noise data (X and y
/// independent standard normal, empty true support). Each replicate runs
/// the uniform-sampling ensemble with one complete block-coverage pass
/// first, a thresholded-OLS base selector at Bonferroni level
/// alpha*pi_thr/M, and a fixed 0.5 frequency threshold; the outcome is
/// whether any feature lands in the stable set.
struct FwerConfig {
    int M = 100;
    int N = 400;
    int n = 200;
    int m = 10;
    double alpha = 0.05;
    int replicates = 200;
    std::uint64_t seed = 0;
    double pi_thr = 0.5;
    int post_coverage_iters = 0;  ///< 0 => 10 * ceil(M/m)
    int threads = 1;
};

struct FwerResult {
    double empirical_fwer = 0.0;
    double alpha_bound = 0.0;
    double binomial_margin = 0.0;  ///< 2*sqrt(alpha*(1-alpha)/replicates)
    int replicates = 0;
    int false_positive_runs = 0;
    double selector_alpha = 0.0;  ///< per-minipatch Bonferroni family level
    bool unreliable = false;      ///< replicates < 50
};

FwerResult fwer_experiment(const FwerConfig& config);

}  // namespace mpfs

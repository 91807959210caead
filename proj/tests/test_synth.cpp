#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mpfs/errors.hpp"
#include "mpfs/synth.hpp"

using namespace mpfs;

namespace {

double column_correlation(const Eigen::MatrixXd& X, int a, int b) {
    const auto xa = X.col(a).array() - X.col(a).mean();
    const auto xb = X.col(b).array() - X.col(b).mean();
    return (xa * xb).sum() /
           std::sqrt(xa.square().sum() * xb.square().sum());
}

double sample_variance(const Eigen::VectorXd& v) {
    const double mean = v.mean();
    return (v.array() - mean).square().sum() / (v.size() - 1);
}

}  // namespace

TEST_CASE("rho = 0 gives uncorrelated columns") {
    ScenarioConfig cfg;
    cfg.N = 3000;
    cfg.M = 8;
    cfg.support_size = 3;
    cfg.rho = 0.0;
    cfg.snr = 2.0;
    cfg.seed = 1;
    auto [data, truth] = generate_s1(cfg);
    const double bound = 4.0 / std::sqrt(static_cast<double>(cfg.N));
    for (int a = 0; a < cfg.M; ++a)
        for (int b = a + 1; b < cfg.M; ++b)
            CHECK(std::abs(column_correlation(data.X(), a, b)) < bound);
}

TEST_CASE("rho = 0.95 reproduces the Toeplitz lag correlations") {
    ScenarioConfig cfg;
    cfg.N = 5000;
    cfg.M = 6;
    cfg.support_size = 2;
    cfg.rho = 0.95;
    cfg.snr = 5.0;
    cfg.seed = 2;
    auto [data, truth] = generate_s1(cfg);
    for (int j = 0; j + 1 < cfg.M; ++j)
        CHECK(std::abs(column_correlation(data.X(), j, j + 1) - 0.95) < 0.02);
    for (int j = 0; j + 2 < cfg.M; ++j)
        CHECK(std::abs(column_correlation(data.X(), j, j + 2) - 0.9025) < 0.02);
}

TEST_CASE("generated instances hit the requested SNR") {
    ScenarioConfig cfg;
    cfg.N = 800;
    cfg.M = 60;
    cfg.support_size = 10;
    cfg.rho = 0.5;
    cfg.snr = 5.0;
    cfg.seed = 3;
    auto [data, truth] = generate_s1(cfg);

    const Eigen::VectorXd signal = data.X() * truth.beta;
    const Eigen::VectorXd noise = data.y() - signal;
    const double ratio = sample_variance(signal) / sample_variance(noise);
    CHECK(ratio > 4.95);
    CHECK(ratio < 5.05);
    CHECK(ratio == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("coefficients live exactly in the +-[2/b, 3/b] shells") {
    ScenarioConfig cfg;
    cfg.N = 50;
    cfg.M = 30;
    cfg.support_size = 8;
    cfg.rho = 0.9;
    cfg.snr = 1.0;
    cfg.seed = 4;
    auto [data, truth] = generate_s1(cfg);

    CHECK(truth.support.size() == 8);
    CHECK(truth.b_used > 0.0);
    int on_support = 0;
    for (int j = 0; j < cfg.M; ++j) {
        const bool in_support =
            std::binary_search(truth.support.begin(), truth.support.end(), j);
        if (in_support) {
            ++on_support;
            const double magnitude = std::abs(truth.beta(j)) * truth.b_used;
            CHECK(magnitude >= 2.0);
            CHECK(magnitude <= 3.0);
        } else {
            CHECK(truth.beta(j) == 0.0);
        }
    }
    CHECK(on_support == 8);
}

TEST_CASE("generation is deterministic in the seed") {
    ScenarioConfig cfg;
    cfg.N = 100;
    cfg.M = 20;
    cfg.support_size = 4;
    cfg.rho = 0.7;
    cfg.snr = 3.0;
    cfg.seed = 5;
    auto [data_a, truth_a] = generate_s1(cfg);
    auto [data_b, truth_b] = generate_s1(cfg);
    CHECK(truth_a.support == truth_b.support);
    CHECK(truth_a.beta == truth_b.beta);
    CHECK(data_a.X() == data_b.X());
    CHECK(data_a.y() == data_b.y());

    cfg.seed = 6;
    auto [data_c, truth_c] = generate_s1(cfg);
    CHECK(data_a.X() != data_c.X());
}

TEST_CASE("scenario preconditions are enforced") {
    ScenarioConfig cfg;
    cfg.N = 100;
    cfg.M = 20;
    cfg.support_size = 21;  // > M
    cfg.snr = 1.0;
    CHECK_THROWS_AS(generate_s1(cfg), ConfigError);
    cfg.support_size = 4;
    cfg.rho = 1.0;
    CHECK_THROWS_AS(generate_s1(cfg), ConfigError);
    cfg.rho = 0.5;
    cfg.snr = 0.0;
    CHECK_THROWS_AS(generate_s1(cfg), ConfigError);
}

TEST_CASE("f1_score arithmetic") {
    CHECK(f1_score({1, 2, 3}, {1, 2, 3}) == 1.0);
    CHECK(f1_score({4, 5}, {1, 2, 3}) == 0.0);
    CHECK(f1_score({}, {1, 2, 3}) == 0.0);
    // 10 correct of 10 estimated against 20 true: P=1, R=0.5, F1=2/3
    std::vector<int> truth, est;
    for (int j = 0; j < 20; ++j) truth.push_back(j);
    for (int j = 0; j < 10; ++j) est.push_back(j);
    CHECK(f1_score(est, truth) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(f1_score({1}, {}), ConfigError);
}

TEST_CASE("f1_score is invariant under joint relabeling") {
    std::vector<int> est{0, 3, 7};
    std::vector<int> truth{3, 7, 9};
    const double base = f1_score(est, truth);
    // shift every label by 100
    std::vector<int> est_shift, truth_shift;
    for (int j : est) est_shift.push_back(j + 100);
    for (int j : truth) truth_shift.push_back(j + 100);
    CHECK(f1_score(est_shift, truth_shift) == base);
}

TEST_CASE("fwer experiment mechanics and arithmetic") {
    FwerConfig cfg;
    cfg.M = 40;
    cfg.N = 120;
    cfg.n = 60;
    cfg.m = 8;
    cfg.alpha = 0.05;
    cfg.replicates = 20;  // deliberately below the reliability cutoff
    cfg.seed = 77;
    FwerResult result = fwer_experiment(cfg);

    CHECK(result.unreliable);
    CHECK(result.replicates == 20);
    CHECK(result.empirical_fwer >= 0.0);
    CHECK(result.empirical_fwer <= 1.0);
    // per-minipatch selector level alpha * pi_thr / M
    CHECK(result.selector_alpha ==
          doctest::Approx(0.05 * 0.5 / 40).epsilon(1e-12));
    CHECK(result.binomial_margin ==
          doctest::Approx(2.0 * std::sqrt(0.05 * 0.95 / 20)).epsilon(1e-12));
    CHECK(result.false_positive_runs <= 2);  // 2.5e-4 per-test level: rare

    // degenerate alpha = 1 still runs and reports a probability
    cfg.alpha = 1.0;
    cfg.replicates = 5;
    FwerResult loose = fwer_experiment(cfg);
    CHECK(loose.alpha_bound == 1.0);
    CHECK(loose.empirical_fwer <= 1.0);
}

TEST_CASE("fwer replicate parallelism does not change the estimate") {
    FwerConfig cfg;
    cfg.M = 30;
    cfg.N = 100;
    cfg.n = 50;
    cfg.m = 6;
    cfg.alpha = 0.2;
    cfg.replicates = 16;
    cfg.seed = 5;
    cfg.threads = 1;
    FwerResult serial = fwer_experiment(cfg);
    cfg.threads = 4;
    FwerResult parallel = fwer_experiment(cfg);
    CHECK(serial.false_positive_runs == parallel.false_positive_runs);
}

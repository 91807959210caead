// Acceptance suite: one pass/fail line per criterion, exit code = number
// of failed criteria. argv[1] names the CLI binary (used by the
// determinism criterion).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mpfs/engine.hpp"
#include "mpfs/matrix_io.hpp"
#include "mpfs/rng.hpp"
#include "mpfs/samplers.hpp"
#include "mpfs/selectors.hpp"
#include "mpfs/synth.hpp"
#include "mpfs/thresholding.hpp"
#include "mpfs/tracker.hpp"

using namespace mpfs;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& summary,
            const std::string& details) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL",
                criterion, summary.c_str(), details.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

ScenarioConfig desk_scenario(std::uint64_t seed) {
    ScenarioConfig s;
    s.N = 1000;
    s.M = 2000;
    s.support_size = 10;
    s.rho = 0.95;
    s.snr = 5.0;
    s.seed = seed;
    return s;
}

EngineConfig desk_engine(SamplerScheme scheme, int n, int m,
                         std::uint64_t seed) {
    EngineConfig cfg;
    cfg.sampler.scheme = scheme;
    cfg.sampler.n = n;
    cfg.sampler.m = m;
    cfg.sampler.epochs = 10;
    cfg.sampler.pi_active = 0.1;
    cfg.sampler.seed = seed;
    cfg.pi_thr = 0.5;
    return cfg;
}

double mean_of(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return acc / static_cast<double>(v.size());
}

// ---------------------------------------------------------------------
// 1. Desk-scale recovery on the autoregressive benchmark; 2. the
//    exploitation-exploration sampler is not inferior to uniform
//    sampling at an equal iteration budget.
// ---------------------------------------------------------------------
void criteria_1_and_2() {
    const int seeds = 5;
    std::vector<double> f1_oracle, f1_data, f1_ee_capped, f1_uniform;
    for (int s = 0; s < seeds; ++s) {
        const std::uint64_t data_seed = mix64(1001, s);
        auto [data, truth] = generate_s1(desk_scenario(data_seed));

        EngineConfig ee = desk_engine(SamplerScheme::ee, 500, 100,
                                      mix64(2002, s));
        RunResult full = run(data, ee);
        f1_oracle.push_back(
            f1_score(oracle_select(full.frequencies, 10), truth.support));
        f1_data.push_back(f1_score(full.stable_set, truth.support));

        // equal-budget comparison: burn-in (10 * ceil(2000/100) = 200)
        // plus 1000 iterations for ee, the same 1200 total for uniform
        EngineConfig ee_capped = ee;
        ee_capped.max_iters = 1200;
        RunResult capped = run(data, ee_capped);
        f1_ee_capped.push_back(
            f1_score(oracle_select(capped.frequencies, 10), truth.support));

        EngineConfig uni = desk_engine(SamplerScheme::uniform, 500, 100,
                                       mix64(2002, s));
        uni.max_iters = 1200;
        RunResult uniform_run = run(data, uni);
        f1_uniform.push_back(
            f1_score(oracle_select(uniform_run.frequencies, 10),
                     truth.support));
    }

    const double oracle_mean = mean_of(f1_oracle);
    const double data_mean = mean_of(f1_data);
    {
        std::ostringstream d;
        d << "mean oracle F1 = " << oracle_mean << " (need >= 0.9), mean "
          << "data-driven F1 = " << data_mean << " (need >= 0.8) over "
          << seeds << " seeds";
        report(1, oracle_mean >= 0.9 && data_mean >= 0.8,
               "desk-scale S1 recovery with AdaSTAMPS-EE", d.str());
    }
    {
        const double ee_mean = mean_of(f1_ee_capped);
        const double uni_mean = mean_of(f1_uniform);
        std::ostringstream d;
        d << "mean oracle F1 at 1200-iteration budget: ee = " << ee_mean
          << ", uniform = " << uni_mean << ", need ee - uniform >= -0.02";
        report(2, ee_mean - uni_mean >= -0.02,
               "EE is not inferior to uniform at an equal budget", d.str());
    }
}

// ---------------------------------------------------------------------
// 3. Familywise error rate bound on pure noise.
// ---------------------------------------------------------------------
void criterion_3() {
    FwerConfig cfg;
    cfg.M = 100;
    cfg.N = 400;
    cfg.n = 200;
    cfg.m = 10;
    cfg.alpha = 0.05;
    cfg.replicates = 200;
    cfg.seed = 3003;
    FwerResult r = fwer_experiment(cfg);
    const double bound = cfg.alpha + r.binomial_margin;
    std::ostringstream d;
    d << "empirical FWER = " << r.empirical_fwer << " ("
      << r.false_positive_runs << "/" << r.replicates
      << " replicates), bound = " << bound;
    report(3, r.empirical_fwer <= bound,
           "FWER controlled at alpha plus two binomial standard errors",
           d.str());
}

// ---------------------------------------------------------------------
// 4. Burn-in coverage: after E*ceil(M/m) iterations every feature was
//    sampled exactly E times. Zero tolerance.
// ---------------------------------------------------------------------
void criterion_4() {
    std::mt19937_64 meta(4004);
    int bad = 0, trials = 0, non_divisible = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const int M = 3 + static_cast<int>(meta() % 120);
        int m = 1 + static_cast<int>(meta() % M);
        if (rep % 2 == 0) {  // force a remainder block half the time
            while (M % m == 0) m = 1 + static_cast<int>(meta() % M);
        }
        if (M % m != 0) ++non_divisible;
        const int E = 1 + static_cast<int>(meta() % 4);
        const auto scheme =
            (rep % 2 == 0) ? SamplerScheme::ee : SamplerScheme::prob;

        SamplerConfig cfg;
        cfg.m = m;
        cfg.epochs = E;
        cfg.scheme = scheme;
        cfg.seed = meta();
        SelectionTracker tracker(M);
        FeatureSampler sampler(cfg, M);
        for (std::int64_t k = 1; k <= sampler.burn_in_iters(); ++k) {
            auto rng = iteration_stream(cfg.seed, k);
            tracker.update(Minipatch({0}, sampler.next(tracker, rng), k), {});
        }
        ++trials;
        for (int j = 0; j < M; ++j)
            if (tracker.sampled_counts()[j] != E) ++bad;
    }
    std::ostringstream d;
    d << trials << " random (M, m, E) triples (" << non_divisible
      << " with M % m != 0), " << bad << " miscounted features";
    report(4, bad == 0, "burn-in samples every feature exactly E times",
           d.str());
}

// ---------------------------------------------------------------------
// 5. Incremental frequencies equal the batch recomputation exactly.
// ---------------------------------------------------------------------
void criterion_5() {
    std::mt19937_64 rng(5005);
    int mismatches = 0;
    for (int trace_i = 0; trace_i < 100; ++trace_i) {
        const int M = 5 + static_cast<int>(rng() % 40);
        const int steps = 20 + static_cast<int>(rng() % 60);
        std::vector<long> sampled(M, 0), selected(M, 0);
        SelectionTracker tracker(M);
        for (int s = 1; s <= steps; ++s) {
            const int m = 1 + static_cast<int>(rng() % M);
            auto feats = sample_without_replacement(M, m, rng);
            std::vector<int> support;
            for (int j : feats)
                if ((rng() & 3ULL) == 0) support.push_back(j);
            tracker.update(Minipatch({0}, feats, s), support);
            for (int j : feats) ++sampled[j];
            for (int j : support) ++selected[j];
        }
        for (int j = 0; j < M; ++j) {
            const double batch = static_cast<double>(selected[j]) /
                                 std::max<long>(1, sampled[j]);
            if (tracker.frequency(j) != batch) ++mismatches;
        }
    }
    report(5, mismatches == 0,
           "incremental tracker equals the batch frequency formula",
           "100 random traces, " + std::to_string(mismatches) +
               " mismatched entries (exact comparison)");
}

// ---------------------------------------------------------------------
// 6. KDE threshold separates bimodal frequency vectors with cluster gap
//    at least four bandwidths.
// ---------------------------------------------------------------------
void criterion_6() {
    std::mt19937_64 rng(6006);
    std::uniform_real_distribution<double> low_dist(0.0, 0.25);
    std::uniform_real_distribution<double> high_dist(0.55, 1.0);
    std::uniform_int_distribution<int> total_dist(60, 400);
    int separated = 0, cases = 0;
    while (cases < 50) {
        const double a = low_dist(rng);
        const double b = high_dist(rng);
        const int total = total_dist(rng);
        std::uniform_int_distribution<int> small_dist(1,
                                                      std::max(1, total / 20));
        const int q = small_dist(rng);
        const int p = total - q;
        std::vector<double> freqs;
        const bool low_heavy = (rng() & 1) != 0;
        freqs.insert(freqs.end(), low_heavy ? p : q, a);
        freqs.insert(freqs.end(), low_heavy ? q : p, b);

        const double mean = mean_of(freqs);
        double ss = 0.0;
        for (double f : freqs) ss += (f - mean) * (f - mean);
        const double h = std::sqrt(ss / (freqs.size() - 1.0));
        if (b - a < 4.0 * h) continue;

        ++cases;
        const double thr = kde_threshold(freqs);
        if (thr > a && thr < b) ++separated;
    }
    report(6, separated == 50,
           "KDE threshold separates bimodal frequencies with gap >= 4h",
           std::to_string(separated) + "/50 vectors separated");
}

// ---------------------------------------------------------------------
// 7. Thresholded OLS noise control: on pure-noise minipatches the
//    probability of selecting anything stays within the Bonferroni level.
// ---------------------------------------------------------------------
void criterion_7() {
    std::mt19937_64 rng(7007);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = 200, m = 10, patches = 2000;
    const double alpha = 0.05;
    int any_selected = 0;
    for (int t = 0; t < patches; ++t) {
        Eigen::MatrixXd X(n, m);
        Eigen::VectorXd y(n);
        for (int i = 0; i < n; ++i) {
            y(i) = gauss(rng);
            for (int j = 0; j < m; ++j) X(i, j) = gauss(rng);
        }
        if (!select_thresholded_ols(y, X, alpha).empty()) ++any_selected;
    }
    const double rate = static_cast<double>(any_selected) / patches;
    std::ostringstream d;
    d << "any-selection rate = " << rate << " over " << patches
      << " pure-noise patches, bound = " << alpha + 0.01;
    report(7, rate <= alpha + 0.01, "per-minipatch Bonferroni noise control",
           d.str());
}

// ---------------------------------------------------------------------
// 8. Determinism through the CLI: identical flags and seed give identical
//    reports modulo wall time; thread count does not change uniform runs.
// ---------------------------------------------------------------------
json load_report(const fs::path& p) {
    std::ifstream in(p);
    json doc = json::parse(in);
    // wall time is the one legitimately varying field
    doc.at("result").erase("wall_time_sec");
    return doc;
}

void criterion_8(const std::string& cli) {
    const fs::path dir =
        fs::temp_directory_path() / "mpfs_acceptance_determinism";
    fs::create_directories(dir);
    const fs::path data_file = dir / "data.bin";
    {
        ScenarioConfig s;
        s.N = 300;
        s.M = 60;
        s.support_size = 5;
        s.rho = 0.95;
        s.snr = 5.0;
        s.seed = 8008;
        auto [data, truth] = generate_s1(s);
        save_binary(data, data_file.string());
    }

    auto run_cli = [&](const std::string& args, const fs::path& out) {
        const std::string cmd = cli + " select --data " + data_file.string() +
                                " --binary " + args + " --out " +
                                out.string() + " 2>/dev/null";
        return std::system(cmd.c_str()) == 0;
    };

    bool ok = true;
    std::string detail;

    // paper-default adaptive run, twice
    const std::string ee_flags =
        "--sampler ee --epochs 10 --pi-active 0.1 --pi-thr 0.5 "
        "--n 100 --m 20 --tau-l 10 --tau-u 20 --seed 99 --max-iters 600";
    if (!run_cli(ee_flags, dir / "ee1.json") ||
        !run_cli(ee_flags, dir / "ee2.json")) {
        ok = false;
        detail = "CLI invocation failed";
    } else if (load_report(dir / "ee1.json") != load_report(dir / "ee2.json")) {
        ok = false;
        detail = "repeated ee runs differ";
    }

    // uniform run, 1 vs 8 threads
    if (ok) {
        const std::string uni_base =
            "--sampler uniform --n 100 --m 20 --tau-l 10 --tau-u 20 "
            "--seed 99 --max-iters 600 ";
        if (!run_cli(uni_base + "--threads 1", dir / "t1.json") ||
            !run_cli(uni_base + "--threads 8", dir / "t8.json")) {
            ok = false;
            detail = "CLI invocation failed (threads)";
        } else if (load_report(dir / "t1.json").at("result") !=
                   load_report(dir / "t8.json").at("result")) {
            // only the config echo may differ (it echoes --threads)
            ok = false;
            detail = "thread counts 1 and 8 disagree";
        }
    }

    if (ok)
        detail =
            "repeated ee runs identical; uniform --threads 1 == --threads 8 "
            "(wall time excluded)";
    report(8, ok, "CLI runs are deterministic and thread-count invariant",
           detail);
    std::error_code ec;
    fs::remove_all(dir, ec);
}

// ---------------------------------------------------------------------
// 9. Minipatch-size robustness sweep on the desk-scale instance.
// ---------------------------------------------------------------------
void criterion_9() {
    const int support = 10;
    const std::vector<int> m_mults{3, 5, 8, 10};
    const std::vector<int> n_mults{2, 5, 10};
    const int reps = 2;

    int passing_cells = 0;
    std::ostringstream grid;
    for (int m_mult : m_mults) {
        for (int n_mult : n_mults) {
            const int m = m_mult * support;
            const int n = std::min(n_mult * m, 1000);
            std::vector<double> f1s;
            for (int rep = 0; rep < reps; ++rep) {
                const std::uint64_t salt =
                    mix64(9009, 100 * m_mult + 10 * n_mult + rep);
                auto [data, truth] = generate_s1(desk_scenario(salt));
                EngineConfig cfg =
                    desk_engine(SamplerScheme::ee, n, m, mix64(salt, 1));
                RunResult result = run(data, cfg);
                f1s.push_back(f1_score(
                    oracle_select(result.frequencies, support),
                    truth.support));
            }
            const double cell = mean_of(f1s);
            if (cell >= 0.85) ++passing_cells;
            grid << " (m=" << m << ",n=" << n << ")=" << cell;
        }
    }
    std::ostringstream d;
    d << passing_cells << "/12 cells with mean oracle F1 >= 0.85 over "
      << reps << " reps, need >= 10;" << grid.str();
    report(9, passing_cells >= 10, "minipatch-size robustness sweep",
           d.str());
}

}  // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";

    criteria_1_and_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    if (cli.empty())
        report(8, false, "CLI determinism", "no CLI binary path supplied");
    else
        criterion_8(cli);
    criterion_9();

    std::printf("%d of 9 criteria failed\n", g_failures);
    return g_failures;
}

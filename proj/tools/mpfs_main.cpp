// Command-line front end: `select` runs the ensemble on a dataset file,
// `simulate` benchmarks it on synthetic autoregressive data with known
// support, and `fwer` estimates the familywise error rate on pure noise.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "mpfs/engine.hpp"
#include "mpfs/errors.hpp"
#include "mpfs/matrix_io.hpp"
#include "mpfs/report.hpp"
#include "mpfs/rng.hpp"
#include "mpfs/synth.hpp"
#include "mpfs/thresholding.hpp"

namespace {

using nlohmann::json;

struct CommonOpts {
    std::string sampler = "ee";
    int n = 0;
    int m = 0;
    double pi_thr = 0.5;
    std::string threshold = "fixed";
    int epochs = 10;
    double pi_active = 0.1;
    int gamma_ramp = 0;
    int tau_l = 30;
    int tau_u = 90;
    int patience = 100;
    std::int64_t max_iters = 0;
    std::string selector = "ols";
    double alpha = 0.05;
    std::uint64_t seed = 0;
    int threads = 1;
    std::string out_path;
    bool verbose = false;
};

void add_common_options(CLI::App* cmd, CommonOpts& o, bool patch_required) {
    cmd->add_option("--sampler", o.sampler, "Sampling scheme: uniform|ee|prob")
        ->check(CLI::IsMember({"uniform", "ee", "prob"}));
    auto* n_opt = cmd->add_option("--n", o.n, "Observations per minipatch");
    auto* m_opt = cmd->add_option("--m", o.m, "Features per minipatch");
    if (patch_required) {
        n_opt->required();
        m_opt->required();
    }
    cmd->add_option("--pi-thr", o.pi_thr, "Stable-set frequency threshold");
    cmd->add_option("--threshold", o.threshold,
                    "Threshold rule: fixed|kde|oracle:K");
    cmd->add_option("--epochs", o.epochs, "Burn-in epochs (adaptive samplers)");
    cmd->add_option("--pi-active", o.pi_active,
                    "Active-set frequency threshold (ee sampler)");
    cmd->add_option("--gamma-ramp", o.gamma_ramp,
                    "Iterations for the exploitation ramp to reach 1 "
                    "(0 = 5*ceil(M/m))");
    cmd->add_option("--tau-l", o.tau_l, "Stopping rank-list lower clamp");
    cmd->add_option("--tau-u", o.tau_u, "Stopping rank-list upper clamp");
    cmd->add_option("--patience", o.patience,
                    "Consecutive unchanged checks required to stop");
    cmd->add_option("--max-iters", o.max_iters,
                    "Hard iteration cap (0 = scheme default)");
    cmd->add_option("--selector", o.selector, "Base selector: ols|uni:K");
    cmd->add_option("--alpha", o.alpha, "Bonferroni family level for ols");
    cmd->add_option("--seed", o.seed, "RNG seed");
    cmd->add_option("--threads", o.threads,
                    "Worker threads (uniform-sampler batches only)");
    cmd->add_option("--out", o.out_path, "Write the report here instead of stdout");
    cmd->add_flag("--verbose", o.verbose, "Per-iteration progress on stderr");
}

mpfs::EngineConfig build_engine_config(const CommonOpts& o) {
    mpfs::EngineConfig cfg;
    cfg.sampler.scheme = mpfs::sampler_scheme_from_string(o.sampler);
    cfg.sampler.n = o.n;
    cfg.sampler.m = o.m;
    cfg.sampler.epochs = o.epochs;
    cfg.sampler.pi_active = o.pi_active;
    cfg.sampler.gamma_ramp_iters = o.gamma_ramp;
    cfg.sampler.seed = o.seed;
    cfg.pi_thr = o.pi_thr;
    cfg.tau_l = o.tau_l;
    cfg.tau_u = o.tau_u;
    cfg.patience = o.patience;
    cfg.max_iters = o.max_iters;
    cfg.threads = o.threads;

    if (o.threshold == "fixed") {
        cfg.threshold_mode = mpfs::ThresholdMode::fixed;
    } else if (o.threshold == "kde") {
        cfg.threshold_mode = mpfs::ThresholdMode::kde;
    } else if (o.threshold.rfind("oracle:", 0) == 0) {
        cfg.threshold_mode = mpfs::ThresholdMode::oracle;
        try {
            cfg.oracle_cardinality = std::stoi(o.threshold.substr(7));
        } catch (const std::exception&) {
            throw mpfs::ConfigError("--threshold oracle:K needs an integer K");
        }
    } else {
        throw mpfs::ConfigError("--threshold must be fixed, kde, or oracle:K (got '" +
                                o.threshold + "')");
    }

    if (o.selector == "ols") {
        cfg.selector.kind = mpfs::SelectorKind::thresholded_ols;
        cfg.selector.alpha_sel = o.alpha;
    } else if (o.selector.rfind("uni:", 0) == 0) {
        cfg.selector.kind = mpfs::SelectorKind::univariate_topk;
        try {
            cfg.selector.top_k = std::stoi(o.selector.substr(4));
        } catch (const std::exception&) {
            throw mpfs::ConfigError("--selector uni:K needs an integer K");
        }
    } else {
        throw mpfs::ConfigError("--selector must be ols or uni:K (got '" +
                                o.selector + "')");
    }
    return cfg;
}

void emit_report(const json& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << report.dump(2) << std::endl;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw mpfs::DataError("cannot open '" + out_path + "' for writing");
    out << report.dump(2) << '\n';
    if (!out) throw mpfs::DataError("write to '" + out_path + "' failed");
}

double mean_of(const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x;
    return v.empty() ? 0.0 : acc / static_cast<double>(v.size());
}

double stdev_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double mu = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - mu) * (x - mu);
    return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

int run_select(const CommonOpts& o, const std::string& data_path,
               const std::string& response, bool binary) {
    mpfs::DataMatrix data = binary ? mpfs::load_binary(data_path)
                                   : mpfs::load_text(data_path, response);
    mpfs::EngineConfig cfg = build_engine_config(o);
    mpfs::RunResult result =
        mpfs::run(data, cfg, o.verbose ? &std::cerr : nullptr);
    json body{{"config", mpfs::config_to_json(cfg)},
              {"result", mpfs::result_to_json(result, data)}};
    emit_report(mpfs::make_report("select", std::move(body)), o.out_path);
    return 0;
}

struct SimulateOpts {
    int N = 1000;
    int M = 2000;
    int support = 20;
    double rho = 0.95;
    double snr = 5.0;
    int reps = 1;
    bool sweep = false;
    std::vector<int> sweep_m_mult{3, 5, 8, 10};
    std::vector<int> sweep_n_mult{2, 5, 10};
    std::string dump_data;
};

json simulate_cell(const CommonOpts& o, const SimulateOpts& s,
                   mpfs::EngineConfig cfg, std::uint64_t cell_salt,
                   const std::string& dump_path) {
    std::vector<double> f1_dd, f1_oracle;
    json reps = json::array();
    for (int rep = 0; rep < s.reps; ++rep) {
        mpfs::ScenarioConfig scenario;
        scenario.N = s.N;
        scenario.M = s.M;
        scenario.support_size = s.support;
        scenario.rho = s.rho;
        scenario.snr = s.snr;
        scenario.seed = mpfs::mix64(o.seed, mpfs::mix64(cell_salt, 2 * rep));
        auto [data, truth] = mpfs::generate_s1(scenario);
        if (rep == 0 && !dump_path.empty()) mpfs::save_binary(data, dump_path);

        cfg.sampler.seed =
            mpfs::mix64(o.seed, mpfs::mix64(cell_salt, 2 * rep + 1));
        mpfs::RunResult result =
            mpfs::run(data, cfg, o.verbose ? &std::cerr : nullptr);

        const std::vector<int> oracle_set =
            mpfs::oracle_select(result.frequencies, s.support);
        const double f1_data = mpfs::f1_score(result.stable_set, truth.support);
        const double f1_orc = mpfs::f1_score(oracle_set, truth.support);
        f1_dd.push_back(f1_data);
        f1_oracle.push_back(f1_orc);

        reps.push_back(json{
            {"rep", rep},
            {"truth_support", truth.support},
            {"b_used", truth.b_used},
            {"f1_data_driven", f1_data},
            {"f1_oracle", f1_orc},
            {"stable_set", result.stable_set},
            {"iterations_run", result.iterations_run},
            {"threshold_used", result.threshold_used},
            {"wall_time_sec", result.wall_time_sec},
        });
    }
    return json{{"replicates", reps},
                {"aggregate",
                 {{"f1_data_driven_mean", mean_of(f1_dd)},
                  {"f1_data_driven_stdev", stdev_of(f1_dd)},
                  {"f1_oracle_mean", mean_of(f1_oracle)},
                  {"f1_oracle_stdev", stdev_of(f1_oracle)}}}};
}

int run_simulate(const CommonOpts& o, const SimulateOpts& s) {
    json body{{"scenario",
               {{"N", s.N},
                {"M", s.M},
                {"support_size", s.support},
                {"rho", s.rho},
                {"snr", s.snr},
                {"reps", s.reps},
                {"seed", o.seed}}}};

    if (!s.sweep) {
        mpfs::EngineConfig cfg = build_engine_config(o);
        json cell = simulate_cell(o, s, cfg, 0, s.dump_data);
        body["config"] = mpfs::config_to_json(cfg);
        body["replicates"] = cell["replicates"];
        body["aggregate"] = cell["aggregate"];
        emit_report(mpfs::make_report("simulate", std::move(body)), o.out_path);
        return 0;
    }

    // Minipatch-size sweep: m as multiples of the true support size and n
    // as multiples of m.
    json rows = json::array();
    std::uint64_t cell_id = 0;
    for (int m_mult : s.sweep_m_mult) {
        for (int n_mult : s.sweep_n_mult) {
            ++cell_id;
            CommonOpts cell_opts = o;
            cell_opts.m = m_mult * s.support;
            cell_opts.n = std::min(n_mult * cell_opts.m, s.N);
            json row{{"m_mult", m_mult},
                     {"n_mult", n_mult},
                     {"m", cell_opts.m},
                     {"n", cell_opts.n}};
            if (cell_opts.m > s.M) {
                row["skipped"] = "m exceeds M";
                rows.push_back(std::move(row));
                continue;
            }
            if (cell_opts.n <= cell_opts.m + 1 && o.selector == "ols") {
                row["skipped"] = "n too small for thresholded OLS";
                rows.push_back(std::move(row));
                continue;
            }
            mpfs::EngineConfig cfg = build_engine_config(cell_opts);
            json cell = simulate_cell(cell_opts, s, cfg, cell_id, "");
            row["aggregate"] = cell["aggregate"];
            rows.push_back(std::move(row));
            if (o.verbose)
                std::cerr << "sweep cell m=" << cell_opts.m
                          << " n=" << cell_opts.n << " done\n";
        }
    }
    body["sweep"] = rows;
    emit_report(mpfs::make_report("simulate", std::move(body)), o.out_path);
    return 0;
}

struct FwerOpts {
    int M = 100;
    int N = 400;
    int n = 200;
    int m = 10;
    double alpha = 0.05;
    int reps = 200;
    std::uint64_t seed = 0;
    std::string out_path;
};

int run_fwer(const FwerOpts& f) {
    mpfs::FwerConfig cfg;
    cfg.M = f.M;
    cfg.N = f.N;
    cfg.n = f.n;
    cfg.m = f.m;
    cfg.alpha = f.alpha;
    cfg.replicates = f.reps;
    cfg.seed = f.seed;
    mpfs::FwerResult result = mpfs::fwer_experiment(cfg);
    json body{{"config",
               {{"M", f.M},
                {"N", f.N},
                {"n", f.n},
                {"m", f.m},
                {"alpha", f.alpha},
                {"replicates", f.reps},
                {"seed", f.seed},
                {"pi_thr", cfg.pi_thr}}},
              {"result", mpfs::fwer_to_json(result)}};
    if (result.unreliable)
        std::cerr << "warning: fewer than 50 replicates; the FWER estimate is "
                     "unreliable\n";
    emit_report(mpfs::make_report("fwer", std::move(body)), f.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minipatch ensemble feature selection"};
    app.require_subcommand(1);

    // select
    auto* select_cmd =
        app.add_subcommand("select", "Select stable features from a dataset");
    CommonOpts select_opts;
    std::string data_path;
    std::string response;
    bool binary = false;
    select_cmd->add_option("--data", data_path, "Dataset path")->required();
    auto* resp_opt = select_cmd->add_option(
        "--response", response, "Header name of the response column (text data)");
    auto* bin_flag = select_cmd->add_flag(
        "--binary", binary, "Dataset is in the binary matrix format");
    resp_opt->excludes(bin_flag);
    add_common_options(select_cmd, select_opts, true);

    // simulate
    auto* sim_cmd = app.add_subcommand(
        "simulate", "Run on synthetic autoregressive data with known support");
    CommonOpts sim_common;
    SimulateOpts sim_opts;
    sim_cmd->add_option("--N", sim_opts.N, "Observations");
    sim_cmd->add_option("--M", sim_opts.M, "Features");
    sim_cmd->add_option("--support", sim_opts.support, "True support size");
    sim_cmd->add_option("--rho", sim_opts.rho, "AR(1) correlation");
    sim_cmd->add_option("--snr", sim_opts.snr, "Signal-to-noise ratio");
    sim_cmd->add_option("--reps", sim_opts.reps, "Replicates");
    sim_cmd->add_flag("--sweep", sim_opts.sweep,
                      "Sweep minipatch sizes instead of a single run");
    sim_cmd->add_option("--sweep-m-mult", sim_opts.sweep_m_mult,
                        "m multipliers of the support size (sweep mode)");
    sim_cmd->add_option("--sweep-n-mult", sim_opts.sweep_n_mult,
                        "n multipliers of m (sweep mode)");
    sim_cmd->add_option("--dump-data", sim_opts.dump_data,
                        "Write replicate 0's dataset to this binary file");
    add_common_options(sim_cmd, sim_common, false);

    // fwer
    auto* fwer_cmd = app.add_subcommand(
        "fwer", "Empirical familywise-error-rate study on pure noise");
    FwerOpts fwer_opts;
    fwer_cmd->add_option("--M", fwer_opts.M, "Features");
    fwer_cmd->add_option("--N", fwer_opts.N, "Observations");
    fwer_cmd->add_option("--n", fwer_opts.n, "Observations per minipatch");
    fwer_cmd->add_option("--m", fwer_opts.m, "Features per minipatch");
    fwer_cmd->add_option("--alpha", fwer_opts.alpha, "Target FWER level");
    fwer_cmd->add_option("--reps", fwer_opts.reps, "Replicates");
    fwer_cmd->add_option("--seed", fwer_opts.seed, "RNG seed");
    fwer_cmd->add_option("--out", fwer_opts.out_path,
                         "Write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad flags are configuration errors
    }

    try {
        if (select_cmd->parsed()) {
            if (!binary && response.empty())
                throw mpfs::ConfigError(
                    "--response NAME is required for text data "
                    "(or pass --binary)");
            return run_select(select_opts, data_path, response, binary);
        }
        if (sim_cmd->parsed()) {
            if (!sim_opts.sweep && (sim_common.n < 1 || sim_common.m < 1))
                throw mpfs::ConfigError(
                    "--n and --m are required unless --sweep is given");
            return run_simulate(sim_common, sim_opts);
        }
        if (fwer_cmd->parsed()) return run_fwer(fwer_opts);
    } catch (const mpfs::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const mpfs::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

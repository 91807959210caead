#include "mpfs/report.hpp"

#include "mpfs/errors.hpp"

namespace mpfs {

using nlohmann::json;

json config_to_json(const EngineConfig& config) {
    json sampler = {
        {"scheme", to_string(config.sampler.scheme)},
        {"n", config.sampler.n},
        {"m", config.sampler.m},
        {"seed", config.sampler.seed},
    };
    if (config.sampler.scheme != SamplerScheme::uniform) {
        sampler["epochs"] = config.sampler.epochs;
        sampler["gamma_ramp_iters"] = config.sampler.gamma_ramp_iters;
    }
    if (config.sampler.scheme == SamplerScheme::ee)
        sampler["pi_active"] = config.sampler.pi_active;

    json selector = {{"kind", to_string(config.selector.kind)}};
    if (config.selector.kind == SelectorKind::thresholded_ols)
        selector["alpha_sel"] = config.selector.alpha_sel;
    if (config.selector.kind == SelectorKind::univariate_topk)
        selector["top_k"] = config.selector.top_k;

    json threshold = {{"mode", to_string(config.threshold_mode)}};
    if (config.threshold_mode == ThresholdMode::fixed)
        threshold["pi_thr"] = config.pi_thr;
    if (config.threshold_mode == ThresholdMode::kde) {
        threshold["grid_points"] = config.kde.grid_points;
        threshold["fallback_thr"] = config.kde.fallback_thr;
    }
    if (config.threshold_mode == ThresholdMode::oracle)
        threshold["cardinality"] = config.oracle_cardinality;

    return json{
        {"sampler", sampler},
        {"selector", selector},
        {"threshold", threshold},
        {"stopping",
         {{"tau_l", config.tau_l},
          {"tau_u", config.tau_u},
          {"patience", config.patience},
          {"max_iters", config.max_iters}}},
        {"threads", config.threads},
    };
}

json result_to_json(const RunResult& result, const DataMatrix& data) {
    json names = json::array();
    for (int j : result.stable_set) names.push_back(data.feature_name(j));
    return json{
        {"stable_set", result.stable_set},
        {"stable_feature_names", names},
        {"frequencies", result.frequencies},
        {"iterations_run", result.iterations_run},
        {"threshold_used", result.threshold_used},
        {"threshold_provenance", to_string(result.threshold_provenance)},
        {"wall_time_sec", result.wall_time_sec},
    };
}

ParsedResult parse_result(const json& doc) {
    ParsedResult out;
    try {
        out.stable_set = doc.at("stable_set").get<std::vector<int>>();
        out.frequencies = doc.at("frequencies").get<std::vector<double>>();
        out.iterations_run = doc.at("iterations_run").get<std::int64_t>();
        out.threshold_used = doc.at("threshold_used").get<double>();
        out.threshold_provenance =
            doc.at("threshold_provenance").get<std::string>();
        out.wall_time_sec = doc.at("wall_time_sec").get<double>();
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed result document: ") + e.what());
    }
    return out;
}

json fwer_to_json(const FwerResult& result) {
    json out{
        {"empirical_fwer", result.empirical_fwer},
        {"alpha_bound", result.alpha_bound},
        {"binomial_margin", result.binomial_margin},
        {"replicates", result.replicates},
        {"false_positive_runs", result.false_positive_runs},
        {"selector_alpha", result.selector_alpha},
    };
    if (result.unreliable)
        out["warning"] =
            "fewer than 50 replicates: the empirical FWER estimate is "
            "unreliable";
    return out;
}

json make_report(const std::string& mode, json body) {
    json out{{"schema", kReportSchema}, {"mode", mode}};
    for (auto& [key, value] : body.items()) out[key] = std::move(value);
    return out;
}

}  // namespace mpfs

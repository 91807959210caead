#pragma once

#include <json.hpp>
#include <string>

#include "mpfs/data_matrix.hpp"
#include "mpfs/engine.hpp"
#include "mpfs/synth.hpp"

namespace mpfs {

/// Schema identifier stamped into every report document.
inline constexpr const char* kReportSchema = "mpfs.report.v1";

nlohmann::json config_to_json(const EngineConfig& config);

/// Serialize a run outcome. Feature names come from `data` when available
/// and fall back to generated ones.
nlohmann::json result_to_json(const RunResult& result, const DataMatrix& data);

/// Inverse of result_to_json for the RunResult-equivalent fields; used to
/// verify that reports round-trip.
struct ParsedResult {
    std::vector<int> stable_set;
    std::vector<double> frequencies;
    std::int64_t iterations_run = 0;
    double threshold_used = 0.0;
    std::string threshold_provenance;
    double wall_time_sec = 0.0;
};

ParsedResult parse_result(const nlohmann::json& result_doc);

nlohmann::json fwer_to_json(const FwerResult& result);

/// Top-level document wrapper: {"schema":..., "mode":..., ...body}.
nlohmann::json make_report(const std::string& mode, nlohmann::json body);

}  // namespace mpfs

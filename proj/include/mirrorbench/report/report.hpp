#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "mirrorbench/orchestrate/store.hpp"

namespace mirrorbench::report {

inline constexpr const char* kReportSchemaId = "mirrorbench-report/1";

// Assembles the run report solely from persisted rows: run metadata, unit
// grid, per-unit aggregates with calibration controls, telemetry totals by
// role, and scorecards. Keys are emitted in sorted order so identical stores
// yield byte-identical reports. Throws ValidationError for unknown runs or
// runs with no completed unit.
nlohmann::json build_report(const std::string& run_id, orchestrate::RunStore& store);

void write_report(const nlohmann::json& report, const std::string& path);

}  // namespace mirrorbench::report

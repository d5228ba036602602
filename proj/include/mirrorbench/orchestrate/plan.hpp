#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mirrorbench/orchestrate/config.hpp"

namespace mirrorbench::orchestrate {

inline constexpr const char* kPlannerVersion = "1.0.0";

enum class UnitStatus { kPending, kRunning, kCompleted };

const char* unit_status_name(UnitStatus status);

// One (user-proxy, dataset, metric, seed) work granule.
struct Unit {
    std::string unit_id;  // "<proxy>|<dataset>|<metric>|<seed>"
    std::string user_proxy;
    std::string dataset;
    std::string metric;
    std::int64_t seed = 0;
    std::optional<std::string> judge;
    UnitStatus status = UnitStatus::kPending;
};

std::string make_unit_id(const std::string& proxy, const std::string& dataset,
                         const std::string& metric, std::int64_t seed);

// Facts about a dataset the compat filter needs.
struct DatasetFacts {
    std::size_t episode_count = 0;
};

// True iff the triple can execute: judge metrics need a configured judge,
// lexical metrics need an anchor source, and the dataset must be non-empty.
bool compat(const ProxyConfig& proxy, const DatasetConfig& dataset, const DatasetFacts& facts,
            const MetricConfig& metric);

// Frozen, hash-stamped enumeration of units enabling deterministic re-runs.
struct PlanManifest {
    std::string run_id;
    std::string created_at;
    std::string config_hash;
    std::vector<Unit> units;
    nlohmann::json driver_params;
    std::map<std::string, std::string> component_versions;
};

// Enumerates all compatible tuples, ordered lexicographically by unit_id.
// Throws ValidationError when no unit survives filtering.
PlanManifest plan(const JobConfig& config, const std::map<std::string, DatasetFacts>& facts,
                  const std::string& run_id, const std::string& created_at);

nlohmann::json manifest_to_json(const PlanManifest& manifest);
PlanManifest manifest_from_json(const nlohmann::json& doc);
void save_manifest(const PlanManifest& manifest, const std::string& path);
PlanManifest load_manifest(const std::string& path);

}  // namespace mirrorbench::orchestrate

#include "mirrorbench/orchestrate/plan.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "mirrorbench/common/errors.hpp"
#include "mirrorbench/rollout/prompts.hpp"

namespace mirrorbench::orchestrate {

using nlohmann::json;

const char* unit_status_name(UnitStatus status) {
    switch (status) {
        case UnitStatus::kPending: return "pending";
        case UnitStatus::kRunning: return "running";
        case UnitStatus::kCompleted: return "completed";
    }
    return "pending";
}

std::string make_unit_id(const std::string& proxy, const std::string& dataset,
                         const std::string& metric, std::int64_t seed) {
    return proxy + "|" + dataset + "|" + metric + "|" + std::to_string(seed);
}

bool compat(const ProxyConfig& proxy, const DatasetConfig& dataset, const DatasetFacts& facts,
            const MetricConfig& metric) {
    (void)proxy;
    (void)dataset;
    if (facts.episode_count == 0) return false;
    const MetricInfo& info = metric_registry().at(metric.name);
    if (info.is_judge && !metric.client.has_value()) return false;
    if (info.needs_anchor) {
        switch (metric.anchor_mode) {
            case AnchorMode::kAuto:
                break;
            case AnchorMode::kFile:
                if (!std::filesystem::exists(metric.anchor_path)) return false;
                break;
            case AnchorMode::kNone:
                return false;
        }
    }
    return true;
}

PlanManifest plan(const JobConfig& config, const std::map<std::string, DatasetFacts>& facts,
                  const std::string& run_id, const std::string& created_at) {
    PlanManifest manifest;
    manifest.run_id = run_id;
    manifest.created_at = created_at;
    manifest.config_hash = config_hash(config);

    for (const ProxyConfig& proxy : config.user_proxies) {
        for (const DatasetConfig& dataset : config.datasets) {
            const auto facts_it = facts.find(dataset.name);
            if (facts_it == facts.end()) {
                throw ValidationError("planner has no facts for dataset " + dataset.name);
            }
            for (const MetricConfig& metric : config.metrics) {
                if (!compat(proxy, dataset, facts_it->second, metric)) continue;
                for (const std::int64_t seed : config.run.seeds) {
                    Unit unit;
                    unit.unit_id = make_unit_id(proxy.name, dataset.name, metric.name, seed);
                    unit.user_proxy = proxy.name;
                    unit.dataset = dataset.name;
                    unit.metric = metric.name;
                    unit.seed = seed;
                    if (metric.client.has_value()) unit.judge = metric.client->model;
                    manifest.units.push_back(std::move(unit));
                }
            }
        }
    }
    if (manifest.units.empty()) {
        throw ValidationError("plan produced no executable units");
    }
    std::sort(manifest.units.begin(), manifest.units.end(),
              [](const Unit& a, const Unit& b) { return a.unit_id < b.unit_id; });

    manifest.driver_params = json{{"assistant_model", config.driver.assistant.model},
                                  {"temperature", config.driver.temperature},
                                  {"max_tokens", config.driver.max_tokens},
                                  {"episode_budget_s", config.driver.episode_budget_s}};
    manifest.component_versions["planner"] = kPlannerVersion;
    manifest.component_versions["prompt_pack"] = rollout::PromptPack::builtin().version();
    return manifest;
}

json manifest_to_json(const PlanManifest& manifest) {
    json units = json::array();
    for (const Unit& unit : manifest.units) {
        json u{{"unit_id", unit.unit_id},
               {"user_proxy", unit.user_proxy},
               {"dataset", unit.dataset},
               {"metric", unit.metric},
               {"seed", unit.seed},
               {"status", unit_status_name(unit.status)}};
        if (unit.judge.has_value()) u["judge"] = *unit.judge;
        units.push_back(std::move(u));
    }
    json versions = json::object();
    for (const auto& [name, version] : manifest.component_versions) versions[name] = version;
    return json{{"run_id", manifest.run_id},
                {"created_at", manifest.created_at},
                {"config_hash", manifest.config_hash},
                {"units", units},
                {"driver_params", manifest.driver_params},
                {"component_versions", versions}};
}

PlanManifest manifest_from_json(const json& doc) {
    PlanManifest manifest;
    manifest.run_id = doc.at("run_id").get<std::string>();
    manifest.created_at = doc.at("created_at").get<std::string>();
    manifest.config_hash = doc.at("config_hash").get<std::string>();
    for (const auto& u : doc.at("units")) {
        Unit unit;
        unit.unit_id = u.at("unit_id").get<std::string>();
        unit.user_proxy = u.at("user_proxy").get<std::string>();
        unit.dataset = u.at("dataset").get<std::string>();
        unit.metric = u.at("metric").get<std::string>();
        unit.seed = u.at("seed").get<std::int64_t>();
        if (u.contains("judge")) unit.judge = u.at("judge").get<std::string>();
        manifest.units.push_back(std::move(unit));
    }
    manifest.driver_params = doc.value("driver_params", json::object());
    if (doc.contains("component_versions")) {
        for (const auto& [name, version] : doc.at("component_versions").items()) {
            manifest.component_versions[name] = version.get<std::string>();
        }
    }
    return manifest;
}

void save_manifest(const PlanManifest& manifest, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw StoreError("cannot write manifest: " + path);
    out << manifest_to_json(manifest).dump(2) << '\n';
}

PlanManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StoreError("cannot open manifest: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError("malformed manifest " + path + ": " + e.what());
    }
    return manifest_from_json(doc);
}

}  // namespace mirrorbench::orchestrate

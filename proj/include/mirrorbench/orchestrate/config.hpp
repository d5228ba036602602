#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mirrorbench/lexdiv/diversity.hpp"
#include "mirrorbench/lexdiv/tokenizer.hpp"

namespace mirrorbench::orchestrate {

struct ClientConfig {
    std::string provider;  // "http" | "mock"
    std::string model;
    std::string base_url;     // http only
    std::string path;         // http only; default /v1/chat/completions
    std::string api_key_env;  // http only
};

struct ProxyConfig {
    std::string name;
    ClientConfig client;
};

struct DatasetConfig {
    std::string name;
    std::string path;  // canonical episode JSONL
    std::optional<std::size_t> limit;
};

enum class AnchorMode { kAuto, kFile, kNone };

struct MetricConfig {
    std::string name;  // gteval | pi | rnr | mattr | yules_k | hdd
    // Judge metrics.
    std::optional<ClientConfig> client;
    std::size_t num_judge_samples = 1;
    bool compute_controls = false;
    // Lexical metrics.
    lexdiv::LexConfig lex;
    lexdiv::TokenizerSpec tokenizer = lexdiv::TokenizerSpec::whitespace_fallback();
    AnchorMode anchor_mode = AnchorMode::kAuto;
    std::string anchor_path;
    bool include_unstable = false;
    bool bootstrap = false;  // percentile bootstrap CI in extras
};

struct TaskDriverConfig {
    ClientConfig assistant;
    double temperature = 0.0;
    std::uint64_t max_tokens = 2048;
    double episode_budget_s = 300.0;
};

struct RunBlock {
    std::string backend = "sync";  // sync | async
    std::size_t max_concurrency = 4;
    std::vector<std::int64_t> seeds;
    bool cache = true;
    std::string logging = "info";
    // When set, every other proxy's metric rows get a two-sided Welch t-test
    // p-value against this proxy's per-episode values.
    std::string baseline_proxy;
};

struct JobConfig {
    RunBlock run;
    std::vector<ProxyConfig> user_proxies;
    std::vector<DatasetConfig> datasets;
    std::vector<MetricConfig> metrics;
    TaskDriverConfig driver;
    std::map<std::string, std::map<std::string, double>> scorecards;
    std::string prompt_pack_dir;  // optional override directory
};

// Metric registry metadata used for validation and compatibility filtering.
struct MetricInfo {
    bool is_judge = false;
    bool needs_reference = false;  // excluded when the episode lacks a reference
    bool needs_anchor = false;     // lexical metrics
};

const std::map<std::string, MetricInfo>& metric_registry();
bool is_known_provider(const std::string& name);

// Parses the YAML job configuration. Unknown keys anywhere are errors, so
// manifest hashes stay trustworthy. Validates component names against the
// registries and the "at least one proxy/dataset/metric/seed" invariant.
JobConfig load_job_config(const std::string& yaml_path);
JobConfig parse_job_config(const std::string& yaml_text);

// Canonical JSON rendering of the config (sorted keys, explicit defaults);
// the digest of this rendering is the config_hash.
nlohmann::json canonical_config_json(const JobConfig& config);
std::string config_hash(const JobConfig& config);

}  // namespace mirrorbench::orchestrate

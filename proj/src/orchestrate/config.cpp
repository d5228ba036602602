#include "mirrorbench/orchestrate/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

#include "mirrorbench/common/errors.hpp"
#include "mirrorbench/common/hash.hpp"
#include "mirrorbench/judge/judges.hpp"

namespace mirrorbench::orchestrate {

using nlohmann::json;

const std::map<std::string, MetricInfo>& metric_registry() {
    static const std::map<std::string, MetricInfo> registry = {
        {"gteval", {true, true, false}},
        {"pi", {true, true, false}},
        {"rnr", {true, false, false}},
        {"mattr", {false, true, true}},
        {"yules_k", {false, true, true}},
        {"hdd", {false, true, true}},
    };
    return registry;
}

bool is_known_provider(const std::string& name) {
    return name == "http" || name == "mock";
}

namespace {

void require_keys(const YAML::Node& node, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!node.IsMap()) throw ConfigError(where + ": expected a mapping");
    for (const auto& entry : node) {
        const std::string key = entry.first.as<std::string>();
        if (allowed.count(key) == 0) {
            throw ConfigError(where + ": unknown key '" + key + "'");
        }
    }
}

ClientConfig parse_client(const YAML::Node& node, const std::string& where) {
    require_keys(node, where, {"provider", "model", "base_url", "path", "api_key_env"});
    ClientConfig client;
    if (!node["provider"] || !node["model"]) {
        throw ConfigError(where + ": client needs provider and model");
    }
    client.provider = node["provider"].as<std::string>();
    client.model = node["model"].as<std::string>();
    if (!is_known_provider(client.provider)) {
        throw ConfigError(where + ": unknown provider '" + client.provider + "'");
    }
    if (node["base_url"]) client.base_url = node["base_url"].as<std::string>();
    if (node["path"]) client.path = node["path"].as<std::string>();
    if (node["api_key_env"]) client.api_key_env = node["api_key_env"].as<std::string>();
    if (client.provider == "http" && client.base_url.empty()) {
        throw ConfigError(where + ": http provider requires base_url");
    }
    return client;
}

lexdiv::TokenizerSpec parse_tokenizer(const YAML::Node& node, const std::string& where) {
    require_keys(node, where, {"kind", "vocab", "version"});
    lexdiv::TokenizerSpec spec;
    const std::string kind = node["kind"] ? node["kind"].as<std::string>()
                                          : std::string("whitespace_fallback");
    if (kind == "whitespace_fallback") {
        spec.kind = lexdiv::TokenizerKind::kWhitespaceFallback;
    } else if (kind == "bpe_vocab") {
        spec.kind = lexdiv::TokenizerKind::kBpeVocab;
        if (!node["vocab"]) throw ConfigError(where + ": bpe_vocab requires vocab");
        spec.vocab = node["vocab"].as<std::string>();
    } else {
        throw ConfigError(where + ": unknown tokenizer kind '" + kind + "'");
    }
    if (node["version"]) spec.version = node["version"].as<std::string>();
    return spec;
}

}  // namespace

JobConfig parse_job_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("YAML parse error: ") + e.what());
    }
    require_keys(root, "config",
                 {"run", "user_proxies", "datasets", "metrics", "task_drivers", "scorecards",
                  "prompt_pack_dir"});

    JobConfig config;

    if (root["run"]) {
        const YAML::Node run = root["run"];
        require_keys(run, "run",
                     {"backend", "max_concurrency", "seeds", "cache", "logging",
                      "baseline_proxy"});
        if (run["backend"]) config.run.backend = run["backend"].as<std::string>();
        if (config.run.backend != "sync" && config.run.backend != "async") {
            throw ConfigError("run.backend must be sync or async");
        }
        if (run["max_concurrency"]) {
            config.run.max_concurrency = run["max_concurrency"].as<std::size_t>();
            if (config.run.max_concurrency == 0) {
                throw ConfigError("run.max_concurrency must be >= 1");
            }
        }
        if (run["seeds"]) {
            for (const auto& seed : run["seeds"]) {
                config.run.seeds.push_back(seed.as<std::int64_t>());
            }
        }
        if (run["cache"]) config.run.cache = run["cache"].as<bool>();
        if (run["logging"]) config.run.logging = run["logging"].as<std::string>();
        if (run["baseline_proxy"]) {
            config.run.baseline_proxy = run["baseline_proxy"].as<std::string>();
        }
    }
    if (config.run.seeds.empty()) {
        throw ConfigError("run.seeds must list at least one seed");
    }

    if (!root["user_proxies"] || !root["user_proxies"].IsSequence() ||
        root["user_proxies"].size() == 0) {
        throw ConfigError("user_proxies must list at least one proxy");
    }
    for (const auto& node : root["user_proxies"]) {
        require_keys(node, "user_proxies[]", {"name", "client"});
        if (!node["name"] || !node["client"]) {
            throw ConfigError("user_proxies[]: name and client are required");
        }
        ProxyConfig proxy;
        proxy.name = node["name"].as<std::string>();
        proxy.client = parse_client(node["client"], "user_proxies." + proxy.name + ".client");
        config.user_proxies.push_back(std::move(proxy));
    }

    if (!root["datasets"] || !root["datasets"].IsSequence() || root["datasets"].size() == 0) {
        throw ConfigError("datasets must list at least one dataset");
    }
    for (const auto& node : root["datasets"]) {
        require_keys(node, "datasets[]", {"name", "path", "limit"});
        if (!node["name"] || !node["path"]) {
            throw ConfigError("datasets[]: name and path are required");
        }
        DatasetConfig dataset;
        dataset.name = node["name"].as<std::string>();
        dataset.path = node["path"].as<std::string>();
        if (node["limit"]) dataset.limit = node["limit"].as<std::size_t>();
        config.datasets.push_back(std::move(dataset));
    }

    if (!root["metrics"] || !root["metrics"].IsSequence() || root["metrics"].size() == 0) {
        throw ConfigError("metrics must list at least one metric");
    }
    for (const auto& node : root["metrics"]) {
        require_keys(node, "metrics[]",
                     {"name", "client", "num_judge_samples", "compute_controls", "window",
                      "sample_size", "min_tokens", "tokenizer", "anchors", "include_unstable",
                      "bootstrap"});
        if (!node["name"]) throw ConfigError("metrics[]: name is required");
        MetricConfig metric;
        metric.name = node["name"].as<std::string>();
        const auto info = metric_registry().find(metric.name);
        if (info == metric_registry().end()) {
            throw ConfigError("unknown metric '" + metric.name + "'");
        }
        metric.num_judge_samples = judge::default_judge_samples(metric.name);
        if (node["client"]) {
            metric.client = parse_client(node["client"], "metrics." + metric.name + ".client");
        }
        if (node["num_judge_samples"]) {
            metric.num_judge_samples = node["num_judge_samples"].as<std::size_t>();
            if (metric.num_judge_samples == 0) {
                throw ConfigError("metrics." + metric.name + ".num_judge_samples must be >= 1");
            }
        }
        if (node["compute_controls"]) {
            metric.compute_controls = node["compute_controls"].as<bool>();
        }
        if (node["window"]) metric.lex.window = node["window"].as<std::size_t>();
        if (node["sample_size"]) metric.lex.sample_size = node["sample_size"].as<std::size_t>();
        if (node["min_tokens"]) metric.lex.min_tokens = node["min_tokens"].as<std::size_t>();
        if (metric.lex.window == 0 || metric.lex.sample_size == 0 || metric.lex.min_tokens == 0) {
            throw ConfigError("metrics." + metric.name + ": lexical parameters must be >= 1");
        }
        if (node["tokenizer"]) {
            metric.tokenizer =
                parse_tokenizer(node["tokenizer"], "metrics." + metric.name + ".tokenizer");
        }
        if (node["anchors"]) {
            const std::string anchors = node["anchors"].as<std::string>();
            if (anchors == "auto") {
                metric.anchor_mode = AnchorMode::kAuto;
            } else if (anchors == "none") {
                metric.anchor_mode = AnchorMode::kNone;
            } else {
                metric.anchor_mode = AnchorMode::kFile;
                metric.anchor_path = anchors;
            }
        }
        if (node["include_unstable"]) {
            metric.include_unstable = node["include_unstable"].as<bool>();
        }
        if (node["bootstrap"]) metric.bootstrap = node["bootstrap"].as<bool>();
        // A judge metric without a client is tolerated here; compat() filters
        // those units out of the plan.
        config.metrics.push_back(std::move(metric));
    }

    if (!root["task_drivers"]) {
        throw ConfigError("task_drivers.mirror_conversation is required");
    }
    require_keys(root["task_drivers"], "task_drivers", {"mirror_conversation"});
    const YAML::Node driver = root["task_drivers"]["mirror_conversation"];
    if (!driver) throw ConfigError("task_drivers.mirror_conversation is required");
    require_keys(driver, "task_drivers.mirror_conversation",
                 {"assistant", "temperature", "max_tokens", "episode_budget_s"});
    if (!driver["assistant"] || !driver["assistant"]["client"]) {
        throw ConfigError("task_drivers.mirror_conversation.assistant.client is required");
    }
    require_keys(driver["assistant"], "task_drivers.mirror_conversation.assistant", {"client"});
    config.driver.assistant =
        parse_client(driver["assistant"]["client"], "task_drivers.assistant.client");
    if (driver["temperature"]) config.driver.temperature = driver["temperature"].as<double>();
    if (driver["max_tokens"]) config.driver.max_tokens = driver["max_tokens"].as<std::uint64_t>();
    if (driver["episode_budget_s"]) {
        config.driver.episode_budget_s = driver["episode_budget_s"].as<double>();
    }

    if (root["scorecards"]) {
        if (!root["scorecards"].IsMap()) throw ConfigError("scorecards: expected a mapping");
        for (const auto& entry : root["scorecards"]) {
            const std::string name = entry.first.as<std::string>();
            if (!entry.second.IsMap()) {
                throw ConfigError("scorecards." + name + ": expected metric->weight mapping");
            }
            std::map<std::string, double> weights;
            for (const auto& w : entry.second) {
                const std::string metric = w.first.as<std::string>();
                if (metric_registry().count(metric) == 0) {
                    throw ConfigError("scorecards." + name + ": unknown metric '" + metric + "'");
                }
                weights[metric] = w.second.as<double>();
            }
            config.scorecards[name] = std::move(weights);
        }
    }

    if (root["prompt_pack_dir"]) {
        config.prompt_pack_dir = root["prompt_pack_dir"].as<std::string>();
    }
    return config;
}

JobConfig load_job_config(const std::string& yaml_path) {
    std::ifstream in(yaml_path);
    if (!in) throw ConfigError("cannot open config file: " + yaml_path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_job_config(buffer.str());
}

namespace {

json client_json(const ClientConfig& client) {
    return json{{"provider", client.provider},
                {"model", client.model},
                {"base_url", client.base_url},
                {"path", client.path},
                {"api_key_env", client.api_key_env}};
}

}  // namespace

json canonical_config_json(const JobConfig& config) {
    json proxies = json::array();
    for (const ProxyConfig& proxy : config.user_proxies) {
        proxies.push_back({{"name", proxy.name}, {"client", client_json(proxy.client)}});
    }
    json datasets = json::array();
    for (const DatasetConfig& dataset : config.datasets) {
        json d{{"name", dataset.name}, {"path", dataset.path}};
        if (dataset.limit.has_value()) d["limit"] = *dataset.limit;
        datasets.push_back(std::move(d));
    }
    json metrics = json::array();
    for (const MetricConfig& metric : config.metrics) {
        json m{{"name", metric.name},
               {"num_judge_samples", metric.num_judge_samples},
               {"compute_controls", metric.compute_controls},
               {"window", metric.lex.window},
               {"sample_size", metric.lex.sample_size},
               {"min_tokens", metric.lex.min_tokens},
               {"tokenizer", metric.tokenizer.id()},
               {"anchor_mode", metric.anchor_mode == AnchorMode::kAuto
                                   ? "auto"
                                   : (metric.anchor_mode == AnchorMode::kNone ? "none" : "file")},
               {"anchor_path", metric.anchor_path},
               {"include_unstable", metric.include_unstable},
               {"bootstrap", metric.bootstrap}};
        if (metric.client.has_value()) m["client"] = client_json(*metric.client);
        metrics.push_back(std::move(m));
    }
    json scorecards = json::object();
    for (const auto& [name, weights] : config.scorecards) {
        json w = json::object();
        for (const auto& [metric, weight] : weights) w[metric] = weight;
        scorecards[name] = std::move(w);
    }
    return json{{"run",
                 {{"backend", config.run.backend},
                  {"max_concurrency", config.run.max_concurrency},
                  {"seeds", config.run.seeds},
                  {"cache", config.run.cache},
                  {"logging", config.run.logging},
                  {"baseline_proxy", config.run.baseline_proxy}}},
                {"user_proxies", proxies},
                {"datasets", datasets},
                {"metrics", metrics},
                {"task_drivers",
                 {{"mirror_conversation",
                   {{"assistant", client_json(config.driver.assistant)},
                    {"temperature", config.driver.temperature},
                    {"max_tokens", config.driver.max_tokens},
                    {"episode_budget_s", config.driver.episode_budget_s}}}}},
                {"scorecards", scorecards},
                {"prompt_pack_dir", config.prompt_pack_dir}};
}

std::string config_hash(const JobConfig& config) {
    return hash::sha256_hex(canonical_config_json(config).dump());
}

}  // namespace mirrorbench::orchestrate

#include "mirrorbench/rollout/driver.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

#include "mirrorbench/common/errors.hpp"
#include "mirrorbench/common/strings.hpp"
#include "mirrorbench/core/episode_io.hpp"

namespace mirrorbench::rollout {

using nlohmann::json;

namespace {

// Strips role prefixes the proxy was told not to emit. Returns true when a
// prefix was removed.
bool sanitize_proxy_text(std::string& text) {
    bool sanitized = false;
    std::string trimmed = strings::trim(text);
    for (const char* prefix : {"User:", "user:", "USER:", "Human:", "human:", "HUMAN:"}) {
        if (strings::starts_with(trimmed, prefix)) {
            trimmed = strings::trim(trimmed.substr(std::string(prefix).size()));
            sanitized = true;
            break;
        }
    }
    text = trimmed;
    return sanitized;
}

core::TelemetryRecord make_record(core::TelemetryRole role, const std::string& model,
                                  const model::ModelResponse& response) {
    core::TelemetryRecord record;
    record.role = role;
    record.model = model;
    record.input_tokens = response.usage.input_tokens;
    record.output_tokens = response.usage.output_tokens;
    record.latency_s = response.latency_s;
    record.cached = response.cached;
    return record;
}

}  // namespace

core::RolloutArtifact run_episode(const core::Episode& episode, const RolloutConfig& config,
                                  model::ModelClient& proxy_client,
                                  model::ModelClient& assistant_client, const PromptPack& pack,
                                  const Clock& clock) {
    const std::string proxy_system =
        render_user_proxy_system(episode.goal, pack.get(kUserProxySystem));
    const std::string assistant_system =
        render_assistant_system(episode.reference, pack.get(kAssistantSystem));

    const std::size_t pairs = episode.reference.length();
    const double started = clock.monotonic_seconds();

    std::vector<core::Turn> synthetic;
    std::vector<core::TelemetryRecord> telemetry;
    bool sanitized_any = false;
    core::RolloutStatus status = core::RolloutStatus::kSuccess;

    for (std::size_t t = 0; t < pairs; ++t) {
        if (clock.monotonic_seconds() - started > config.episode_budget_s) {
            status = core::RolloutStatus::kTimeout;
            break;
        }
        // Proxy turn: system + role-inverted synthetic history.
        model::ModelRequest proxy_request;
        proxy_request.model = config.user_proxy_model;
        proxy_request.temperature = config.temperature;
        proxy_request.max_tokens = config.max_tokens;
        proxy_request.seed_hint = config.seed_hint;
        proxy_request.cache_namespace = "rollout";
        proxy_request.messages.push_back({model::ChatRole::kSystem, proxy_system});
        for (const core::Turn& turn : synthetic) {
            proxy_request.messages.push_back(
                {turn.role == core::Role::kUser ? model::ChatRole::kAssistant
                                                : model::ChatRole::kUser,
                 turn.text});
        }
        std::string proxy_text;
        try {
            const model::ModelResponse response = proxy_client.complete(proxy_request);
            telemetry.push_back(make_record(core::TelemetryRole::kUserProxy,
                                            config.user_proxy_model, response));
            proxy_text = response.text;
        } catch (const TransportError&) {
            status = core::RolloutStatus::kFailure;
            break;
        }
        sanitized_any |= sanitize_proxy_text(proxy_text);
        if (proxy_text.empty()) {
            status = core::RolloutStatus::kFailure;
            break;
        }

        // Assistant turn: system (with embedded reference) + natural-role
        // synthetic history including the fresh proxy utterance.
        model::ModelRequest assistant_request;
        assistant_request.model = config.assistant_model;
        assistant_request.temperature = config.temperature;
        assistant_request.max_tokens = config.max_tokens;
        assistant_request.seed_hint = config.seed_hint;
        assistant_request.cache_namespace = "rollout";
        assistant_request.messages.push_back({model::ChatRole::kSystem, assistant_system});
        for (const core::Turn& turn : synthetic) {
            assistant_request.messages.push_back(
                {turn.role == core::Role::kUser ? model::ChatRole::kUser
                                                : model::ChatRole::kAssistant,
                 turn.text});
        }
        assistant_request.messages.push_back({model::ChatRole::kUser, proxy_text});
        std::string assistant_text;
        try {
            const model::ModelResponse response = assistant_client.complete(assistant_request);
            telemetry.push_back(make_record(core::TelemetryRole::kAssistant,
                                            config.assistant_model, response));
            assistant_text = strings::trim(response.text);
        } catch (const TransportError&) {
            status = core::RolloutStatus::kFailure;
            break;
        }
        if (assistant_text.empty()) {
            status = core::RolloutStatus::kFailure;
            break;
        }

        synthetic.push_back({core::Role::kUser, proxy_text, synthetic.size() + 1});
        synthetic.push_back({core::Role::kAssistant, assistant_text, synthetic.size() + 1});
    }

    std::optional<core::Dialogue> dialogue;
    if (!synthetic.empty()) {
        dialogue = core::Dialogue::create(std::move(synthetic));
    }
    core::RolloutArtifact artifact = core::RolloutArtifact::create(
        episode, std::move(dialogue), std::move(telemetry), status);
    artifact.sanitized_prefixes = sanitized_any;
    artifact.prompt_pack_version = pack.version();
    return artifact;
}

void save_artifact(const core::RolloutArtifact& artifact, const std::string& path) {
    json turns = json::array();
    if (artifact.synthetic.has_value()) {
        for (const core::Turn& turn : artifact.synthetic->turns()) {
            turns.push_back({{"role", core::role_name(turn.role)}, {"text", turn.text}});
        }
    }
    json records = json::array();
    for (const core::TelemetryRecord& record : artifact.telemetry) {
        json row{{"role", core::telemetry_role_name(record.role)},
                 {"input_tokens", record.input_tokens},
                 {"output_tokens", record.output_tokens},
                 {"latency_s", record.latency_s},
                 {"model", record.model},
                 {"cached", record.cached}};
        if (record.cost_usd.has_value()) row["cost_usd"] = *record.cost_usd;
        records.push_back(std::move(row));
    }
    const json doc{{"episode_id", artifact.episode.episode_id},
                   {"episode", core::episode_to_json(artifact.episode)},
                   {"status", core::rollout_status_name(artifact.status)},
                   {"synthetic_turns", turns},
                   {"telemetry", records},
                   {"sanitized_prefixes", artifact.sanitized_prefixes},
                   {"prompt_pack_version", artifact.prompt_pack_version}};
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw StoreError("cannot write artifact: " + path);
    out << doc.dump(2) << '\n';
}

core::RolloutArtifact load_artifact(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StoreError("cannot open artifact: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ValidationError("malformed artifact " + path + ": " + e.what());
    }
    core::Episode episode = core::episode_from_json(doc.at("episode"));
    std::optional<core::Dialogue> synthetic;
    const auto& turns = doc.at("synthetic_turns");
    if (!turns.empty()) {
        std::vector<core::Turn> list;
        for (const auto& t : turns) {
            list.push_back({t.at("role").get<std::string>() == "user" ? core::Role::kUser
                                                                      : core::Role::kAssistant,
                            t.at("text").get<std::string>(), list.size() + 1});
        }
        synthetic = core::Dialogue::create(std::move(list));
    }
    std::vector<core::TelemetryRecord> telemetry;
    for (const auto& row : doc.at("telemetry")) {
        core::TelemetryRecord record;
        const std::string role = row.at("role").get<std::string>();
        if (role == "assistant") record.role = core::TelemetryRole::kAssistant;
        else if (role == "judge") record.role = core::TelemetryRole::kJudge;
        else if (role == "goal_generator") record.role = core::TelemetryRole::kGoalGenerator;
        else record.role = core::TelemetryRole::kUserProxy;
        record.input_tokens = row.at("input_tokens").get<std::uint64_t>();
        record.output_tokens = row.at("output_tokens").get<std::uint64_t>();
        record.latency_s = row.at("latency_s").get<double>();
        record.model = row.at("model").get<std::string>();
        record.cached = row.value("cached", false);
        if (row.contains("cost_usd")) record.cost_usd = row.at("cost_usd").get<double>();
        telemetry.push_back(std::move(record));
    }
    core::RolloutArtifact artifact = core::RolloutArtifact::create(
        std::move(episode), std::move(synthetic), std::move(telemetry),
        core::rollout_status_from_name(doc.at("status").get<std::string>()));
    artifact.sanitized_prefixes = doc.value("sanitized_prefixes", false);
    artifact.prompt_pack_version = doc.value("prompt_pack_version", std::string{});
    return artifact;
}

}  // namespace mirrorbench::rollout

#include "mirrorbench/core/episode_io.hpp"

#include <fstream>

#include "mirrorbench/common/errors.hpp"

namespace mirrorbench::core {

using nlohmann::json;

json episode_to_json(const Episode& episode) {
    json goal = {{"text", episode.goal.text},
                 {"source", episode.goal.source == GoalSource::kGiven ? "given" : "generated"}};
    if (episode.goal.generator_model.has_value()) {
        goal["generator_model"] = *episode.goal.generator_model;
    }
    json turns = json::array();
    for (const Turn& turn : episode.reference.turns()) {
        turns.push_back({{"role", role_name(turn.role)}, {"text", turn.text}});
    }
    json meta = json::object();
    for (const auto& [key, value] : episode.meta) meta[key] = value;
    return json{{"episode_id", episode.episode_id},
                {"goal", goal},
                {"turns", turns},
                {"meta", meta}};
}

Episode episode_from_json(const json& value) {
    if (!value.is_object() || !value.contains("episode_id") || !value.contains("turns")) {
        throw ValidationError("episode record missing episode_id or turns");
    }
    std::vector<Turn> turns;
    for (const auto& t : value.at("turns")) {
        Turn turn;
        const std::string role = t.at("role").get<std::string>();
        if (role == "user") {
            turn.role = Role::kUser;
        } else if (role == "assistant") {
            turn.role = Role::kAssistant;
        } else {
            throw ValidationError("unknown turn role: " + role);
        }
        turn.text = t.at("text").get<std::string>();
        turns.push_back(std::move(turn));
    }
    GoalSpec goal;
    if (value.contains("goal")) {
        const auto& g = value.at("goal");
        goal.text = g.value("text", std::string{});
        goal.source = g.value("source", std::string{"given"}) == "generated"
                          ? GoalSource::kGenerated
                          : GoalSource::kGiven;
        if (g.contains("generator_model")) {
            goal.generator_model = g.at("generator_model").get<std::string>();
        }
    }
    std::map<std::string, std::string> meta;
    if (value.contains("meta")) {
        for (const auto& [key, v] : value.at("meta").items()) {
            meta[key] = v.is_string() ? v.get<std::string>() : v.dump();
        }
    }
    return Episode{value.at("episode_id").get<std::string>(), Dialogue::create(std::move(turns)),
                   std::move(goal), std::move(meta)};
}

std::vector<Episode> read_episodes_jsonl(const std::string& path,
                                         std::optional<std::size_t> limit) {
    std::ifstream in(path);
    if (!in) throw StoreError("cannot open episode file: " + path);
    std::vector<Episode> episodes;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        try {
            episodes.push_back(episode_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw ValidationError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (limit.has_value() && episodes.size() >= *limit) break;
    }
    return episodes;
}

void write_episodes_jsonl(const std::string& path, const std::vector<Episode>& episodes) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw StoreError("cannot write episode file: " + path);
    for (const Episode& episode : episodes) {
        out << episode_to_json(episode).dump() << '\n';
    }
}

}  // namespace mirrorbench::core

#include "mirrorbench/data/adapters.hpp"

#include <fstream>

#include "mirrorbench/common/errors.hpp"
#include "mirrorbench/data/goal_generator.hpp"

namespace mirrorbench::data {

using nlohmann::json;

std::vector<RawConversation> read_raw_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StoreError("cannot open raw corpus: " + path);
    std::vector<RawConversation> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::exception& e) {
            throw ValidationError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        RawConversation conv;
        if (doc.contains("source_id")) {
            conv.source_id = doc.at("source_id").get<std::string>();
        } else if (doc.contains("id")) {
            const auto& id = doc.at("id");
            conv.source_id = id.is_string() ? id.get<std::string>() : id.dump();
        } else {
            conv.source_id = "line-" + std::to_string(line_no);
        }
        const char* message_key =
            doc.contains("messages") ? "messages" : (doc.contains("conversation") ? "conversation"
                                                                                  : nullptr);
        if (message_key == nullptr) {
            throw ValidationError(path + ":" + std::to_string(line_no) +
                                  ": record has no messages/conversation field");
        }
        for (const auto& m : doc.at(message_key)) {
            RawMessage message;
            message.role = m.value("role", std::string{"user"});
            message.text = m.contains("text") ? m.at("text").get<std::string>()
                                              : m.value("content", std::string{});
            conv.messages.push_back(std::move(message));
        }
        for (const char* lang_key : {"language", "lang", "language_tag"}) {
            if (doc.contains(lang_key) && doc.at(lang_key).is_string()) {
                conv.language_tag = doc.at(lang_key).get<std::string>();
                break;
            }
        }
        for (const auto& [key, value] : doc.items()) {
            if (key == "messages" || key == "conversation" || key == "source_id" || key == "id" ||
                key == "language" || key == "lang" || key == "language_tag") {
                continue;
            }
            conv.extras[key] = value.is_string() ? value.get<std::string>() : value.dump();
        }
        out.push_back(std::move(conv));
    }
    return out;
}

PrepareReport prepare_dataset(const std::vector<RawConversation>& raw,
                              const PrepareOptions& options) {
    PrepareReport report;

    std::vector<EpisodeCandidate> candidates;
    for (const RawConversation& conv : raw) {
        NormalizeResult result = normalize(conv, options.normalize);
        if (std::holds_alternative<RejectReason>(result)) {
            ++report.rejections[reject_reason_name(std::get<RejectReason>(result))];
            continue;
        }
        candidates.push_back(std::move(std::get<EpisodeCandidate>(result)));
    }
    if (candidates.empty()) {
        throw ValidationError("no conversations survived normalization for dataset " +
                              options.dataset_id);
    }

    const auto strata = stratify(candidates, options.rule);
    SampleResult sampled = sample(strata, options.cap, options.min_per_stratum, options.seed);
    report.plan = sampled.plan;

    for (const std::size_t index : sampled.selected) {
        EpisodeCandidate& candidate = candidates[index];
        const std::string stratum = stratum_key(options.rule, candidate);
        core::GoalSpec goal;
        if (candidate.upstream_goal.has_value()) {
            goal.text = *candidate.upstream_goal;
            goal.source = core::GoalSource::kGiven;
        } else if (options.goal_client != nullptr && options.prompts != nullptr) {
            try {
                goal = generate_goal(candidate.dialogue, options.goal_model,
                                     *options.goal_client, *options.prompts);
            } catch (const std::exception&) {
                ++report.goal_missing;
                continue;
            }
        } else {
            ++report.goal_missing;
            continue;
        }
        core::Episode episode{options.dataset_id + "/" + candidate.source_id,
                              std::move(candidate.dialogue), std::move(goal),
                              std::move(candidate.extras)};
        episode.meta["dataset"] = options.dataset_id;
        episode.meta["stratum"] = stratum;
        episode.meta["source_id"] = candidate.source_id;
        report.episodes.push_back(std::move(episode));
    }
    return report;
}

json prepare_report_json(const PrepareReport& report, const PrepareOptions& options) {
    json allocations = json::object();
    for (const auto& [key, count] : report.plan.allocations) allocations[key] = count;
    json rejections = json::object();
    for (const auto& [key, count] : report.rejections) rejections[key] = count;
    return json{{"dataset_id", options.dataset_id},
                {"rule", strat_rule_name(options.rule.kind)},
                {"cap", report.plan.cap},
                {"min_per_stratum", report.plan.min_per_stratum},
                {"seed", report.plan.seed},
                {"allocations", allocations},
                {"rejections", rejections},
                {"goal_missing", report.goal_missing},
                {"episodes", report.episodes.size()}};
}

}  // namespace mirrorbench::data

#pragma once

#include <nlohmann/json.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mirrorbench/core/types.hpp"

namespace mirrorbench::core {

// Canonical episode exchange format: one JSON object per line with fields
// {episode_id, goal:{text,source[,generator_model]}, turns:[{role,text}], meta:{...}}.

nlohmann::json episode_to_json(const Episode& episode);
Episode episode_from_json(const nlohmann::json& value);

// Reads up to `limit` episodes (all when limit is nullopt). Throws StoreError
// on unreadable files, ValidationError on malformed records.
std::vector<Episode> read_episodes_jsonl(const std::string& path,
                                         std::optional<std::size_t> limit = std::nullopt);

void write_episodes_jsonl(const std::string& path, const std::vector<Episode>& episodes);

}  // namespace mirrorbench::core

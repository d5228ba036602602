#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "mirrorbench/model/client.hpp"
#include "mirrorbench/storage/database.hpp"

namespace mirrorbench::model {

inline constexpr std::int64_t kDefaultCacheTtlSeconds = 30LL * 24 * 3600;  // 30 days

struct CacheStats {
    std::uint64_t total = 0;
    std::uint64_t unexpired = 0;
    std::map<std::string, std::uint64_t> by_namespace;  // unexpired per namespace
};

// Content-addressed response cache living in one table of the run-store
// database. Expired entries are never returned.
class ResponseCache {
public:
    explicit ResponseCache(std::shared_ptr<storage::Database> db);

    std::optional<ModelResponse> get(const std::string& key, const std::string& ns,
                                     std::int64_t now_unix);

    void put(const std::string& key, const std::string& ns, const ModelResponse& response,
             std::int64_t now_unix, std::int64_t ttl_seconds = kDefaultCacheTtlSeconds);

    CacheStats stats(std::int64_t now_unix);

    // Removes every entry by default; expired_only restricts to TTL cleanup.
    std::uint64_t purge(std::int64_t now_unix, bool expired_only = false);

private:
    std::shared_ptr<storage::Database> db_;
};

}  // namespace mirrorbench::model

#include "mirrorbench/model/cache.hpp"

#include <nlohmann/json.hpp>

#include "mirrorbench/common/hash.hpp"

namespace mirrorbench::model {

using nlohmann::json;

ResponseCache::ResponseCache(std::shared_ptr<storage::Database> db) : db_(std::move(db)) {
    db_->exec(
        "CREATE TABLE IF NOT EXISTS cache ("
        " key TEXT NOT NULL,"
        " namespace TEXT NOT NULL,"
        " response TEXT NOT NULL,"
        " created_at INTEGER NOT NULL,"
        " ttl INTEGER NOT NULL,"
        " PRIMARY KEY (key, namespace))");
    // The key encoding travels with the store so cache files stay portable.
    db_->exec(
        "CREATE TABLE IF NOT EXISTS store_meta (k TEXT PRIMARY KEY, v TEXT NOT NULL)");
    db_->with_lock([&] {
        storage::Statement stmt(db_->handle(),
                                "INSERT OR IGNORE INTO store_meta (k, v) VALUES (?, ?)");
        stmt.bind(1, std::string("cache_key_encoding"));
        stmt.bind(2, std::string(hash::kEncodingId));
        stmt.step();
    });
}

std::optional<ModelResponse> ResponseCache::get(const std::string& key, const std::string& ns,
                                                std::int64_t now_unix) {
    return db_->with_lock([&]() -> std::optional<ModelResponse> {
        storage::Statement stmt(
            db_->handle(),
            "SELECT response, created_at, ttl FROM cache WHERE key = ? AND namespace = ?");
        stmt.bind(1, key);
        stmt.bind(2, ns);
        if (!stmt.step()) return std::nullopt;
        const std::int64_t created = stmt.column_int(1);
        const std::int64_t ttl = stmt.column_int(2);
        if (now_unix >= created + ttl) return std::nullopt;
        const json doc = json::parse(stmt.column_text(0));
        ModelResponse response;
        response.text = doc.at("text").get<std::string>();
        response.usage.input_tokens = doc.at("input_tokens").get<std::uint64_t>();
        response.usage.output_tokens = doc.at("output_tokens").get<std::uint64_t>();
        response.usage.estimated = doc.value("estimated", false);
        response.latency_s = doc.at("latency_s").get<double>();
        response.cached = true;
        return response;
    });
}

void ResponseCache::put(const std::string& key, const std::string& ns,
                        const ModelResponse& response, std::int64_t now_unix,
                        std::int64_t ttl_seconds) {
    const json doc{{"text", response.text},
                   {"input_tokens", response.usage.input_tokens},
                   {"output_tokens", response.usage.output_tokens},
                   {"estimated", response.usage.estimated},
                   {"latency_s", response.latency_s}};
    db_->with_lock([&] {
        storage::Statement stmt(db_->handle(),
                                "INSERT OR REPLACE INTO cache (key, namespace, response, "
                                "created_at, ttl) VALUES (?, ?, ?, ?, ?)");
        stmt.bind(1, key);
        stmt.bind(2, ns);
        stmt.bind(3, doc.dump());
        stmt.bind(4, now_unix);
        stmt.bind(5, ttl_seconds);
        stmt.step();
    });
}

CacheStats ResponseCache::stats(std::int64_t now_unix) {
    return db_->with_lock([&] {
        CacheStats stats;
        {
            storage::Statement stmt(db_->handle(), "SELECT COUNT(*) FROM cache");
            if (stmt.step()) stats.total = static_cast<std::uint64_t>(stmt.column_int(0));
        }
        storage::Statement stmt(db_->handle(),
                                "SELECT namespace, COUNT(*) FROM cache WHERE created_at + ttl "
                                "> ? GROUP BY namespace");
        stmt.bind(1, now_unix);
        while (stmt.step()) {
            const std::uint64_t count = static_cast<std::uint64_t>(stmt.column_int(1));
            stats.by_namespace[stmt.column_text(0)] = count;
            stats.unexpired += count;
        }
        return stats;
    });
}

std::uint64_t ResponseCache::purge(std::int64_t now_unix, bool expired_only) {
    return db_->with_lock([&]() -> std::uint64_t {
        if (expired_only) {
            storage::Statement stmt(db_->handle(),
                                    "DELETE FROM cache WHERE created_at + ttl <= ?");
            stmt.bind(1, now_unix);
            stmt.step();
        } else {
            storage::Statement stmt(db_->handle(), "DELETE FROM cache");
            stmt.step();
        }
        storage::Statement changes(db_->handle(), "SELECT changes()");
        changes.step();
        return static_cast<std::uint64_t>(changes.column_int(0));
    });
}

}  // namespace mirrorbench::model

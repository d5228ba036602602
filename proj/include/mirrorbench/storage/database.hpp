#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

struct sqlite3;
struct sqlite3_stmt;

namespace mirrorbench::storage {

// Prepared statement handle. Bind indexes are 1-based, column indexes 0-based.
class Statement {
public:
    Statement(sqlite3* db, const std::string& sql);
    ~Statement();
    Statement(const Statement&) = delete;
    Statement& operator=(const Statement&) = delete;

    Statement& bind(int index, const std::string& value);
    Statement& bind(int index, std::int64_t value);
    Statement& bind(int index, double value);
    Statement& bind_null(int index);

    // True while a row is available.
    bool step();

    std::string column_text(int index) const;
    std::int64_t column_int(int index) const;
    double column_double(int index) const;
    bool column_is_null(int index) const;

private:
    sqlite3* db_;
    sqlite3_stmt* stmt_ = nullptr;
};

// Single-connection wrapper with WAL enabled and serialized access. All
// persistence in a run funnels through one Database instance.
class Database {
public:
    explicit Database(const std::string& path);
    ~Database();
    Database(const Database&) = delete;
    Database& operator=(const Database&) = delete;

    void exec(const std::string& sql);

    // Runs `fn` with the connection locked; statements made inside share the
    // lock, so multi-statement updates are atomic with respect to other users.
    template <typename Fn>
    auto with_lock(Fn&& fn) -> decltype(fn()) {
        std::lock_guard lock(mutex_);
        return fn();
    }

    // Transaction helper; rolls back when fn throws.
    void transaction(const std::function<void()>& fn);

    sqlite3* handle() { return db_; }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    sqlite3* db_ = nullptr;
    std::recursive_mutex mutex_;
};

}  // namespace mirrorbench::storage

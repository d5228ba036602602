#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mirrorbench/model/cache.hpp"
#include "mirrorbench/storage/database.hpp"

namespace mirrorbench::orchestrate {

// Row types mirror the run database schema: runs, units, episodes, metrics,
// telemetry, scorecards. JSON-valued columns are stored as TEXT.

struct RunRow {
    std::string run_id;
    std::string created_at;  // ISO-8601
    std::string status;      // created | running | completed | failed
    std::string engine;      // sync | async
    std::string planner_version;
    std::string summary_json;
    std::string notes;
};

struct UnitRow {
    std::string run_id;
    std::string unit_id;
    std::string user_proxy;
    std::string dataset;
    std::string metric;
    std::int64_t seed = 0;
    std::optional<std::string> judge;
    std::string status;  // pending | running | completed
};

struct EpisodeRow {
    std::string run_id;
    std::string unit_id;
    std::string episode_id;
    std::string status;  // success | failure | timeout
    double duration_s = 0.0;
    std::string artifact_path;
    std::string summary;
    std::string metric_values;   // JSON
    std::string telemetry_json;  // JSON
};

struct MetricRow {
    std::string run_id;
    std::string unit_id;
    std::string metric;
    double mean = 0.0;
    double standard_deviation = 0.0;
    double confidence_interval = 0.0;
    std::optional<double> p_value;
    std::int64_t sample_size = 0;
    std::string extras;  // JSON
};

struct TelemetryRow {
    std::string run_id;
    std::string unit_id;
    std::string key;
    std::string value;
};

struct ScorecardRow {
    std::string run_id;
    std::string name;
    double score = 0.0;
    std::string weights;          // JSON
    std::string missing_metrics;  // JSON list
    std::string extras;           // JSON
};

// Single-file run store. One writer at a time; the response cache shares the
// same database file.
class RunStore {
public:
    explicit RunStore(const std::string& path);

    std::shared_ptr<model::ResponseCache> cache() { return cache_; }
    std::shared_ptr<storage::Database> database() { return db_; }
    const std::string& path() const { return db_->path(); }

    void upsert_run(const RunRow& row);
    std::optional<RunRow> get_run(const std::string& run_id);
    std::vector<RunRow> list_runs();
    void set_run_status(const std::string& run_id, const std::string& status);
    void set_run_summary(const std::string& run_id, const std::string& summary_json);

    void upsert_unit(const UnitRow& row);
    std::vector<UnitRow> units_for_run(const std::string& run_id);
    void set_unit_status(const std::string& run_id, const std::string& unit_id,
                         const std::string& status);

    void upsert_episode(const EpisodeRow& row);
    std::vector<EpisodeRow> episodes_for_unit(const std::string& run_id,
                                              const std::string& unit_id);
    void delete_episodes_for_unit(const std::string& run_id, const std::string& unit_id);

    void upsert_metric(const MetricRow& row);
    std::vector<MetricRow> metrics_for_run(const std::string& run_id);

    void upsert_telemetry(const TelemetryRow& row);
    std::vector<TelemetryRow> telemetry_for_run(const std::string& run_id);

    void upsert_scorecard(const ScorecardRow& row);
    std::vector<ScorecardRow> scorecards_for_run(const std::string& run_id);

    // Last-run pointer, a single-row table for CLI convenience.
    void set_last_run(const std::string& run_id);
    std::optional<std::string> last_run();

    // Removes a run and every dependent row.
    void delete_run(const std::string& run_id);

private:
    std::shared_ptr<storage::Database> db_;
    std::shared_ptr<model::ResponseCache> cache_;
};

}  // namespace mirrorbench::orchestrate

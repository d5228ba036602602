#include "mirrorbench/orchestrate/store.hpp"

namespace mirrorbench::orchestrate {

namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS runs (
  run_id TEXT PRIMARY KEY,
  created_at TEXT NOT NULL,
  status TEXT NOT NULL,
  engine TEXT NOT NULL,
  planner_version TEXT NOT NULL,
  summary_json TEXT NOT NULL DEFAULT '',
  notes TEXT NOT NULL DEFAULT ''
);
CREATE TABLE IF NOT EXISTS units (
  run_id TEXT NOT NULL,
  unit_id TEXT NOT NULL,
  user_proxy TEXT NOT NULL,
  dataset TEXT NOT NULL,
  metric TEXT NOT NULL,
  seed INTEGER NOT NULL,
  judge TEXT,
  status TEXT NOT NULL,
  PRIMARY KEY (run_id, unit_id)
);
CREATE TABLE IF NOT EXISTS episodes (
  run_id TEXT NOT NULL,
  unit_id TEXT NOT NULL,
  episode_id TEXT NOT NULL,
  status TEXT NOT NULL,
  duration_s REAL NOT NULL,
  artifact_path TEXT NOT NULL,
  summary TEXT NOT NULL DEFAULT '',
  metric_values TEXT NOT NULL DEFAULT '{}',
  telemetry_json TEXT NOT NULL DEFAULT '[]',
  PRIMARY KEY (run_id, unit_id, episode_id)
);
CREATE TABLE IF NOT EXISTS metrics (
  run_id TEXT NOT NULL,
  unit_id TEXT NOT NULL,
  metric TEXT NOT NULL,
  mean REAL NOT NULL,
  standard_deviation REAL NOT NULL,
  confidence_interval REAL NOT NULL,
  p_value REAL,
  sample_size INTEGER NOT NULL,
  extras TEXT NOT NULL DEFAULT '{}',
  PRIMARY KEY (run_id, unit_id, metric)
);
CREATE TABLE IF NOT EXISTS telemetry (
  run_id TEXT NOT NULL,
  unit_id TEXT NOT NULL,
  key TEXT NOT NULL,
  value TEXT NOT NULL,
  PRIMARY KEY (run_id, unit_id, key)
);
CREATE TABLE IF NOT EXISTS scorecards (
  run_id TEXT NOT NULL,
  name TEXT NOT NULL,
  score REAL NOT NULL,
  weights TEXT NOT NULL DEFAULT '{}',
  missing_metrics TEXT NOT NULL DEFAULT '[]',
  extras TEXT NOT NULL DEFAULT '{}',
  PRIMARY KEY (run_id, name)
);
CREATE TABLE IF NOT EXISTS last_run (
  id INTEGER PRIMARY KEY CHECK (id = 1),
  run_id TEXT NOT NULL
);
)sql";

}  // namespace

RunStore::RunStore(const std::string& path)
    : db_(std::make_shared<storage::Database>(path)),
      cache_(std::make_shared<model::ResponseCache>(db_)) {
    db_->exec(kSchema);
}

void RunStore::upsert_run(const RunRow& row) {
    db_->with_lock([&] {
        storage::Statement stmt(db_->handle(),
                                "INSERT OR REPLACE INTO runs (run_id, created_at, status, engine, "
                                "planner_version, summary_json, notes) VALUES (?,?,?,?,?,?,?)");
        stmt.bind(1, row.run_id).bind(2, row.created_at).bind(3, row.status);
        stmt.bind(4, row.engine).bind(5, row.planner_version).bind(6, row.summary_json);
        stmt.bind(7, row.notes);
        stmt.step();
    });
}

std::optional<RunRow> RunStore::get_run(const std::string& run_id) {
    return db_->with_lock([&]() -> std::optional<RunRow> {
        storage::Statement stmt(db_->handle(),
                                "SELECT run_id, created_at, status, engine, planner_version, "
                                "summary_json, notes FROM runs WHERE run_id = ?");
        stmt.bind(1, run_id);
        if (!stmt.step()) return std::nullopt;
        RunRow row;
        row.run_id = stmt.column_text(0);
        row.created_at = stmt.column_text(1);
        row.status = stmt.column_text(2);
        row.engine = stmt.column_text(3);
        row.planner_version = stmt.column_text(4);
        row.summary_json = stmt.column_text(5);
        row.notes = stmt.column_text(6);
        return row;
    });
}

std::vector<RunRow> RunStore::list_runs() {
    return db_->with_lock([&] {
        std::vector<RunRow> rows;
        storage::Statement stmt(db_->handle(),
                                "SELECT run_id, created_at, status, engine, planner_version, "
                                "summary_json, notes FROM runs ORDER BY created_at, run_id");
        while (stmt.step()) {
            RunRow row;
            row.run_id = stmt.column_text(0);
            row.created_at = stmt.column_text(1);
            row.status = stmt.column_text(2);
            row.engine = stmt.column_text(3);
            row.planner_version = stmt.column_text(4);
            row.summary_json = stmt.column_text(5);
            row.notes = stmt.column_text(6);
            rows.push_back(std::move(row));
        }
        return rows;
    });
}

void RunStore::set_run_status(const std::string& run_id, const std::string& status) {
    db_->with_lock([&] {
        storage::Statement stmt(db_->handle(), "UPDATE runs SET status = ? WHERE run_id = ?");
        stmt.bind(1, status).bind(2, run_id);
        stmt.step();
    });
}

void RunStore::set_run_summary(const std::string& run_id, const std::string& summary_json) {
    db_->with_lock([&] {
        storage::Statement stmt(db_->handle(),
                                "UPDATE runs SET summary_json = ? WHERE run_id = ?");
        stmt.bind(1, summary_json).bind(2, run_id);
        stmt.step();
    });
}

void RunStore::upsert_unit(const UnitRow& row) {
    db_->with_lock([&] {
        storage::Statement stmt(db_->handle(),
                                "INSERT OR REPLACE INTO units (run_id, unit_id, user_proxy, "
                                "dataset, metric, seed, judge, status) VALUES (?,?,?,?,?,?,?,?)");
        stmt.bind(1, row.run_id).bind(2, row.unit_id).bind(3, row.user_proxy);
        stmt.bind(4, row.dataset).bind(5, row.metric).bind(6, row.seed);
        if (row.judge.has_value()) {
            stmt.bind(7, *row.judge);
        } else {
            stmt.bind_null(7);
        }
        stmt.bind(8, row.status);
        stmt.step();
    });
}

std::vector<UnitRow> RunStore::units_for_run(const std::string& run_id) {
    return db_->with_lock([&] {
        std::vector<UnitRow> rows;
        storage::Statement stmt(db_->handle(),
                                "SELECT run_id, unit_id, user_proxy, dataset, metric, seed, "
                                "judge, status FROM units WHERE run_id = ? ORDER BY unit_id");
        stmt.bind(1, run_id);
        while (stmt.step()) {
            UnitRow row;
            row.run_id = stmt.column_text(0);
            row.unit_id = stmt.column_text(1);
            row.user_proxy = stmt.column_text(2);
            row.dataset = stmt.column_text(3);
            row.metric = stmt.column_text(4);
            row.seed = stmt.column_int(5);
            if (!stmt.column_is_null(6)) row.judge = stmt.column_text(6);
            row.status = stmt.column_text(7);
            rows.push_back(std::move(row));
        }
        return rows;
    });
}

void RunStore::set_unit_status(const std::string& run_id, const std::string& unit_id,
                               const std::string& status) {
    db_->with_lock([&] {
        storage::Statement stmt(db_->handle(),
                                "UPDATE units SET status = ? WHERE run_id = ? AND unit_id = ?");
        stmt.bind(1, status).bind(2, run_id).bind(3, unit_id);
        stmt.step();
    });
}

void RunStore::upsert_episode(const EpisodeRow& row) {
    db_->with_lock([&] {
        storage::Statement stmt(
            db_->handle(),
            "INSERT OR REPLACE INTO episodes (run_id, unit_id, episode_id, status, duration_s, "
            "artifact_path, summary, metric_values, telemetry_json) VALUES (?,?,?,?,?,?,?,?,?)");
        stmt.bind(1, row.run_id).bind(2, row.unit_id).bind(3, row.episode_id);
        stmt.bind(4, row.status).bind(5, row.duration_s).bind(6, row.artifact_path);
        stmt.bind(7, row.summary).bind(8, row.metric_values).bind(9, row.telemetry_json);
        stmt.step();
    });
}

std::vector<EpisodeRow> RunStore::episodes_for_unit(const std::string& run_id,
                                                    const std::string& unit_id) {
    return db_->with_lock([&] {
        std::vector<EpisodeRow> rows;
        storage::Statement stmt(
            db_->handle(),
            "SELECT run_id, unit_id, episode_id, status, duration_s, artifact_path, summary, "
            "metric_values, telemetry_json FROM episodes WHERE run_id = ? AND unit_id = ? "
            "ORDER BY episode_id");
        stmt.bind(1, run_id).bind(2, unit_id);
        while (stmt.step()) {
            EpisodeRow row;
            row.run_id = stmt.column_text(0);
            row.unit_id = stmt.column_text(1);
            row.episode_id = stmt.column_text(2);
            row.status = stmt.column_text(3);
            row.duration_s = stmt.column_double(4);
            row.artifact_path = stmt.column_text(5);
            row.summary = stmt.column_text(6);
            row.metric_values = stmt.column_text(7);
            row.telemetry_json = stmt.column_text(8);
            rows.push_back(std::move(row));
        }
        return rows;
    });
}

void RunStore::delete_episodes_for_unit(const std::string& run_id, const std::string& unit_id) {
    db_->with_lock([&] {
        storage::Statement stmt(db_->handle(),
                                "DELETE FROM episodes WHERE run_id = ? AND unit_id = ?");
        stmt.bind(1, run_id).bind(2, unit_id);
        stmt.step();
    });
}

void RunStore::upsert_metric(const MetricRow& row) {
    db_->with_lock([&] {
        storage::Statement stmt(
            db_->handle(),
            "INSERT OR REPLACE INTO metrics (run_id, unit_id, metric, mean, standard_deviation, "
            "confidence_interval, p_value, sample_size, extras) VALUES (?,?,?,?,?,?,?,?,?)");
        stmt.bind(1, row.run_id).bind(2, row.unit_id).bind(3, row.metric);
        stmt.bind(4, row.mean).bind(5, row.standard_deviation).bind(6, row.confidence_interval);
        if (row.p_value.has_value()) {
            stmt.bind(7, *row.p_value);
        } else {
            stmt.bind_null(7);
        }
        stmt.bind(8, row.sample_size).bind(9, row.extras);
        stmt.step();
    });
}

std::vector<MetricRow> RunStore::metrics_for_run(const std::string& run_id) {
    return db_->with_lock([&] {
        std::vector<MetricRow> rows;
        storage::Statement stmt(
            db_->handle(),
            "SELECT run_id, unit_id, metric, mean, standard_deviation, confidence_interval, "
            "p_value, sample_size, extras FROM metrics WHERE run_id = ? ORDER BY unit_id, metric");
        stmt.bind(1, run_id);
        while (stmt.step()) {
            MetricRow row;
            row.run_id = stmt.column_text(0);
            row.unit_id = stmt.column_text(1);
            row.metric = stmt.column_text(2);
            row.mean = stmt.column_double(3);
            row.standard_deviation = stmt.column_double(4);
            row.confidence_interval = stmt.column_double(5);
            if (!stmt.column_is_null(6)) row.p_value = stmt.column_double(6);
            row.sample_size = stmt.column_int(7);
            row.extras = stmt.column_text(8);
            rows.push_back(std::move(row));
        }
        return rows;
    });
}

void RunStore::upsert_telemetry(const TelemetryRow& row) {
    db_->with_lock([&] {
        storage::Statement stmt(db_->handle(),
                                "INSERT OR REPLACE INTO telemetry (run_id, unit_id, key, value) "
                                "VALUES (?,?,?,?)");
        stmt.bind(1, row.run_id).bind(2, row.unit_id).bind(3, row.key).bind(4, row.value);
        stmt.step();
    });
}

std::vector<TelemetryRow> RunStore::telemetry_for_run(const std::string& run_id) {
    return db_->with_lock([&] {
        std::vector<TelemetryRow> rows;
        storage::Statement stmt(db_->handle(),
                                "SELECT run_id, unit_id, key, value FROM telemetry WHERE "
                                "run_id = ? ORDER BY unit_id, key");
        stmt.bind(1, run_id);
        while (stmt.step()) {
            rows.push_back(TelemetryRow{stmt.column_text(0), stmt.column_text(1),
                                        stmt.column_text(2), stmt.column_text(3)});
        }
        return rows;
    });
}

void RunStore::upsert_scorecard(const ScorecardRow& row) {
    db_->with_lock([&] {
        storage::Statement stmt(
            db_->handle(),
            "INSERT OR REPLACE INTO scorecards (run_id, name, score, weights, missing_metrics, "
            "extras) VALUES (?,?,?,?,?,?)");
        stmt.bind(1, row.run_id).bind(2, row.name).bind(3, row.score);
        stmt.bind(4, row.weights).bind(5, row.missing_metrics).bind(6, row.extras);
        stmt.step();
    });
}

std::vector<ScorecardRow> RunStore::scorecards_for_run(const std::string& run_id) {
    return db_->with_lock([&] {
        std::vector<ScorecardRow> rows;
        storage::Statement stmt(db_->handle(),
                                "SELECT run_id, name, score, weights, missing_metrics, extras "
                                "FROM scorecards WHERE run_id = ? ORDER BY name");
        stmt.bind(1, run_id);
        while (stmt.step()) {
            ScorecardRow row;
            row.run_id = stmt.column_text(0);
            row.name = stmt.column_text(1);
            row.score = stmt.column_double(2);
            row.weights = stmt.column_text(3);
            row.missing_metrics = stmt.column_text(4);
            row.extras = stmt.column_text(5);
            rows.push_back(std::move(row));
        }
        return rows;
    });
}

void RunStore::set_last_run(const std::string& run_id) {
    db_->with_lock([&] {
        storage::Statement stmt(db_->handle(),
                                "INSERT OR REPLACE INTO last_run (id, run_id) VALUES (1, ?)");
        stmt.bind(1, run_id);
        stmt.step();
    });
}

std::optional<std::string> RunStore::last_run() {
    return db_->with_lock([&]() -> std::optional<std::string> {
        storage::Statement stmt(db_->handle(), "SELECT run_id FROM last_run WHERE id = 1");
        if (!stmt.step()) return std::nullopt;
        return stmt.column_text(0);
    });
}

void RunStore::delete_run(const std::string& run_id) {
    db_->transaction([&] {
        for (const char* table :
             {"scorecards", "telemetry", "metrics", "episodes", "units", "runs"}) {
            storage::Statement stmt(db_->handle(),
                                    std::string("DELETE FROM ") + table + " WHERE run_id = ?");
            stmt.bind(1, run_id);
            stmt.step();
        }
        storage::Statement stmt(db_->handle(), "DELETE FROM last_run WHERE run_id = ?");
        stmt.bind(1, run_id);
        stmt.step();
    });
}

}  // namespace mirrorbench::orchestrate

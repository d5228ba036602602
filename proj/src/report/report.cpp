#include "mirrorbench/report/report.hpp"

#include <fstream>
#include <map>

#include "mirrorbench/common/errors.hpp"

namespace mirrorbench::report {

using nlohmann::json;

json build_report(const std::string& run_id, orchestrate::RunStore& store) {
    const auto run = store.get_run(run_id);
    if (!run.has_value()) throw ValidationError("unknown run: " + run_id);

    const auto units = store.units_for_run(run_id);
    const auto metric_rows = store.metrics_for_run(run_id);
    const auto scorecard_rows = store.scorecards_for_run(run_id);

    std::size_t completed = 0;
    std::size_t pending = 0;
    for (const auto& unit : units) {
        if (unit.status == "completed") {
            ++completed;
        } else {
            ++pending;
        }
    }
    if (completed == 0) {
        throw ValidationError("run " + run_id + " has no completed units to report");
    }

    json unit_grid = json::array();
    json aggregates = json::object();
    struct RoleTotals {
        std::uint64_t input_tokens = 0;
        std::uint64_t output_tokens = 0;
        double latency_s = 0.0;
        double cost_usd = 0.0;
        std::uint64_t calls = 0;
    };
    std::map<std::string, RoleTotals> totals_by_role;

    for (const auto& unit : units) {
        json entry{{"unit_id", unit.unit_id},
                   {"user_proxy", unit.user_proxy},
                   {"dataset", unit.dataset},
                   {"metric", unit.metric},
                   {"seed", unit.seed},
                   {"status", unit.status}};
        if (unit.judge.has_value()) entry["judge"] = *unit.judge;
        unit_grid.push_back(std::move(entry));
        if (unit.status != "completed") continue;

        for (const auto& row : metric_rows) {
            if (row.unit_id != unit.unit_id) continue;
            json agg{{"metric", row.metric},
                     {"mean", row.mean},
                     {"standard_deviation", row.standard_deviation},
                     {"ci_95_half_width", row.confidence_interval},
                     {"sample_size", row.sample_size}};
            if (row.p_value.has_value()) agg["p_value"] = *row.p_value;
            const json extras = json::parse(row.extras, nullptr, false);
            if (!extras.is_discarded() && !extras.empty()) {
                agg["extras"] = extras;
                // Calibration controls surfaced beside the raw score.
                if (extras.contains("mu_hh")) agg["mu_hh"] = extras.at("mu_hh");
                if (extras.contains("mu_pp")) agg["mu_pp"] = extras.at("mu_pp");
                if (extras.contains("calibrated_mean")) {
                    agg["calibrated_mean"] = extras.at("calibrated_mean");
                }
            }
            aggregates[unit.unit_id] = std::move(agg);
        }

        // Telemetry totals come from the per-episode rows, so they add up
        // exactly.
        for (const auto& episode : store.episodes_for_unit(run_id, unit.unit_id)) {
            const json records = json::parse(episode.telemetry_json, nullptr, false);
            if (records.is_discarded()) continue;
            for (const auto& record : records) {
                RoleTotals& t = totals_by_role[record.value("role", std::string{"unknown"})];
                t.input_tokens += record.value("input_tokens", std::uint64_t{0});
                t.output_tokens += record.value("output_tokens", std::uint64_t{0});
                t.latency_s += record.value("latency_s", 0.0);
                t.cost_usd += record.value("cost_usd", 0.0);
                ++t.calls;
            }
        }
    }

    json telemetry = json::object();
    RoleTotals grand;
    for (const auto& [role, t] : totals_by_role) {
        telemetry[role] = json{{"calls", t.calls},
                               {"input_tokens", t.input_tokens},
                               {"output_tokens", t.output_tokens},
                               {"latency_s", t.latency_s},
                               {"cost_usd", t.cost_usd}};
        grand.calls += t.calls;
        grand.input_tokens += t.input_tokens;
        grand.output_tokens += t.output_tokens;
        grand.latency_s += t.latency_s;
        grand.cost_usd += t.cost_usd;
    }
    telemetry["total"] = json{{"calls", grand.calls},
                              {"input_tokens", grand.input_tokens},
                              {"output_tokens", grand.output_tokens},
                              {"latency_s", grand.latency_s},
                              {"cost_usd", grand.cost_usd}};

    json scorecards = json::array();
    for (const auto& row : scorecard_rows) {
        json card{{"name", row.name}, {"score", row.score}};
        const json weights = json::parse(row.weights, nullptr, false);
        if (!weights.is_discarded()) card["weights"] = weights;
        const json missing = json::parse(row.missing_metrics, nullptr, false);
        if (!missing.is_discarded()) card["missing_metrics"] = missing;
        const json extras = json::parse(row.extras, nullptr, false);
        if (!extras.is_discarded()) card["extras"] = extras;
        scorecards.push_back(std::move(card));
    }

    json report{{"schema", kReportSchemaId},
                {"run",
                 {{"run_id", run->run_id},
                  {"created_at", run->created_at},
                  {"status", run->status},
                  {"engine", run->engine},
                  {"planner_version", run->planner_version}}},
                {"units", unit_grid},
                {"aggregates", aggregates},
                {"telemetry", telemetry},
                {"scorecards", scorecards}};
    if (pending > 0) {
        report["partial"] = true;
        report["pending_units"] = pending;
    }
    return report;
}

void write_report(const json& report, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw StoreError("cannot write report: " + path);
    out << report.dump(2) << '\n';
}

}  // namespace mirrorbench::report

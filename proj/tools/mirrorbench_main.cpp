// mirrorbench CLI: plan, dryrun, run, report, runs, cache, prepare, correlate.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "mirrorbench/common/errors.hpp"
#include "mirrorbench/core/episode_io.hpp"
#include "mirrorbench/data/adapters.hpp"
#include "mirrorbench/model/providers.hpp"
#include "mirrorbench/orchestrate/config.hpp"
#include "mirrorbench/orchestrate/controller.hpp"
#include "mirrorbench/orchestrate/plan.hpp"
#include "mirrorbench/orchestrate/store.hpp"
#include "mirrorbench/report/correlate.hpp"
#include "mirrorbench/report/report.hpp"

namespace mb = mirrorbench;
using nlohmann::json;

namespace {

struct GlobalArgs {
    std::string store_path = "mirrorbench.db";
};

std::string resolve_run_id(mb::orchestrate::RunStore& store, const std::string& name) {
    if (name == "last") {
        const auto last = store.last_run();
        if (!last.has_value()) throw mb::ValidationError("no last run recorded");
        return *last;
    }
    return name;
}

void print_units(const mb::orchestrate::PlanManifest& manifest) {
    std::printf("run %s  config %s  units %zu\n", manifest.run_id.c_str(),
                manifest.config_hash.substr(0, 12).c_str(), manifest.units.size());
    for (const auto& unit : manifest.units) {
        std::printf("  %s\n", unit.unit_id.c_str());
    }
}

int cmd_plan(const GlobalArgs& globals, const std::string& config_path,
             const std::optional<std::string>& run_id, const std::string& output) {
    mb::orchestrate::JobConfig config = mb::orchestrate::load_job_config(config_path);
    mb::orchestrate::RunStore store(globals.store_path);
    mb::orchestrate::ControllerOptions options;
    options.run_id = run_id;
    mb::orchestrate::RunController controller(store, config, options);
    const mb::orchestrate::PlanManifest manifest = controller.make_plan();
    if (!output.empty()) {
        mb::orchestrate::save_manifest(manifest, output);
    }
    print_units(manifest);
    std::printf("manifest: %s\n",
                output.empty() ? controller.manifest_path().c_str() : output.c_str());
    return 0;
}

int cmd_dryrun(const std::string& config_path) {
    mb::orchestrate::JobConfig config = mb::orchestrate::load_job_config(config_path);
    std::map<std::string, mb::orchestrate::DatasetFacts> facts;
    for (const auto& dataset : config.datasets) {
        mb::orchestrate::DatasetFacts f;
        try {
            f.episode_count = mb::core::read_episodes_jsonl(dataset.path, dataset.limit).size();
        } catch (const mb::StoreError&) {
            f.episode_count = 0;
        }
        facts[dataset.name] = f;
    }
    const auto manifest = mb::orchestrate::plan(config, facts, "dryrun", "");
    print_units(manifest);
    return 0;
}

int cmd_run(const GlobalArgs& globals, const std::string& config_path,
            const std::optional<std::string>& run_id) {
    mb::orchestrate::JobConfig config = mb::orchestrate::load_job_config(config_path);
    mb::orchestrate::RunStore store(globals.store_path);
    mb::orchestrate::ControllerOptions options;
    options.run_id = run_id;
    options.episode_hook = [](std::size_t done) {
        if (done % 10 == 0) std::printf("  ... %zu episode rows\n", done);
    };
    mb::orchestrate::RunController controller(store, config, options);
    const auto manifest = controller.make_plan();
    std::printf("planned %zu units\n", manifest.units.size());
    const std::string id = controller.run(manifest);
    std::printf("run completed: %s\n", id.c_str());
    return 0;
}

int cmd_report_json(const GlobalArgs& globals, const std::string& run, const std::string& output) {
    mb::orchestrate::RunStore store(globals.store_path);
    const std::string run_id = resolve_run_id(store, run);
    const json report = mb::report::build_report(run_id, store);
    if (output.empty()) {
        std::printf("%s\n", report.dump(2).c_str());
    } else {
        mb::report::write_report(report, output);
        std::printf("report written: %s\n", output.c_str());
    }
    return 0;
}

int cmd_runs_inspect(const GlobalArgs& globals, const std::string& run) {
    mb::orchestrate::RunStore store(globals.store_path);
    const std::string run_id = resolve_run_id(store, run);
    const auto row = store.get_run(run_id);
    if (!row.has_value()) throw mb::ValidationError("unknown run: " + run_id);
    std::printf("run %s\n  created_at %s\n  status %s\n  engine %s\n  planner %s\n",
                row->run_id.c_str(), row->created_at.c_str(), row->status.c_str(),
                row->engine.c_str(), row->planner_version.c_str());
    if (!row->summary_json.empty()) std::printf("  summary %s\n", row->summary_json.c_str());
    for (const auto& unit : store.units_for_run(run_id)) {
        std::printf("  unit %-50s %s\n", unit.unit_id.c_str(), unit.status.c_str());
    }
    for (const auto& metric : store.metrics_for_run(run_id)) {
        std::printf("  metric %-40s mean %.6f sd %.6f ci %.6f n %lld\n", metric.unit_id.c_str(),
                    metric.mean, metric.standard_deviation, metric.confidence_interval,
                    static_cast<long long>(metric.sample_size));
    }
    return 0;
}

int cmd_runs_delete(const GlobalArgs& globals, const std::string& run) {
    mb::orchestrate::RunStore store(globals.store_path);
    const std::string run_id = resolve_run_id(store, run);
    store.delete_run(run_id);
    std::printf("deleted run %s\n", run_id.c_str());
    return 0;
}

int cmd_cache_stats(const GlobalArgs& globals) {
    mb::orchestrate::RunStore store(globals.store_path);
    mb::SystemClock clock;
    const auto stats = store.cache()->stats(clock.now_unix_seconds());
    std::printf("cache entries: %llu total, %llu unexpired\n",
                static_cast<unsigned long long>(stats.total),
                static_cast<unsigned long long>(stats.unexpired));
    for (const auto& [ns, count] : stats.by_namespace) {
        std::printf("  %-12s %llu\n", ns.c_str(), static_cast<unsigned long long>(count));
    }
    return 0;
}

int cmd_cache_purge(const GlobalArgs& globals, bool expired_only) {
    mb::orchestrate::RunStore store(globals.store_path);
    mb::SystemClock clock;
    const auto removed = store.cache()->purge(clock.now_unix_seconds(), expired_only);
    std::printf("purged %llu cache entries\n", static_cast<unsigned long long>(removed));
    return 0;
}

int cmd_prepare(const std::string& input, const std::string& dataset_id, const std::string& rule,
                std::size_t cap, std::size_t min_per_stratum, std::uint64_t seed,
                const std::string& bounds, const std::string& output, const std::string& plan_out,
                const std::string& goal_provider, const std::string& goal_model) {
    mb::data::PrepareOptions options;
    options.dataset_id = dataset_id;
    options.rule.dataset_id = dataset_id;
    options.rule.kind = mb::data::strat_rule_from_name(rule);
    if (!bounds.empty()) {
        const auto comma = bounds.find(',');
        if (comma == std::string::npos) {
            throw mb::ConfigError("--bounds expects '<short_max>,<medium_max>'");
        }
        options.rule.short_max = std::stoul(bounds.substr(0, comma));
        options.rule.medium_max = std::stoul(bounds.substr(comma + 1));
    }
    options.cap = cap;
    options.min_per_stratum = min_per_stratum;
    options.seed = seed;

    const auto pack = mb::rollout::PromptPack::builtin();
    auto clock = std::make_shared<mb::SystemClock>();
    std::optional<mb::model::ModelClient> goal_client;
    if (!goal_provider.empty()) {
        mb::orchestrate::ClientConfig client_cfg;
        client_cfg.provider = goal_provider;
        client_cfg.model = goal_model;
        if (!mb::orchestrate::is_known_provider(goal_provider)) {
            throw mb::ConfigError("unknown goal provider: " + goal_provider);
        }
        goal_client.emplace(mb::orchestrate::default_provider_factory()(client_cfg),
                            mb::model::RetryPolicy{}, nullptr, clock);
        options.goal_client = &*goal_client;
        options.goal_model = goal_model;
        options.prompts = &pack;
    }

    const auto raw = mb::data::read_raw_jsonl(input);
    const auto report = mb::data::prepare_dataset(raw, options);
    mb::core::write_episodes_jsonl(output, report.episodes);
    const json plan_doc = mb::data::prepare_report_json(report, options);
    if (!plan_out.empty()) {
        std::ofstream out(plan_out, std::ios::trunc);
        if (!out) throw mb::StoreError("cannot write sampling plan: " + plan_out);
        out << plan_doc.dump(2) << '\n';
    }
    std::printf("prepared %zu episodes -> %s\n", report.episodes.size(), output.c_str());
    std::printf("%s\n", plan_doc.dump(2).c_str());
    return 0;
}

int cmd_correlate(const std::string& pairs_path, std::size_t permutations, std::uint64_t seed) {
    std::ifstream in(pairs_path);
    if (!in) throw mb::StoreError("cannot open pairs file: " + pairs_path);
    json doc;
    in >> doc;
    const json& array = doc.is_object() && doc.contains("pairs") ? doc.at("pairs") : doc;
    std::vector<std::pair<double, double>> pairs;
    for (const auto& entry : array) {
        pairs.emplace_back(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
    mb::report::CorrelateOptions options;
    options.permutations = permutations;
    options.seed = seed;
    const auto result = mb::report::correlate(pairs, options);
    const auto show = [](const char* name, const std::optional<double>& value,
                         const std::optional<double>& p) {
        if (value.has_value()) {
            std::printf("%-12s %+.6f", name, *value);
            if (p.has_value()) std::printf("  (p=%.5f)", *p);
            std::printf("\n");
        } else {
            std::printf("%-12s undefined (zero variance)\n", name);
        }
    };
    std::printf("n = %zu\n", result.n);
    show("pearson_r", result.pearson_r, result.p_pearson);
    show("spearman_rho", result.spearman_rho, result.p_spearman);
    show("kendall_tau", result.kendall_tau, result.p_kendall);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MirrorBench: human-likeness benchmarking for user-proxy agents"};
    app.require_subcommand(1);
    GlobalArgs globals;
    app.add_option("--store", globals.store_path, "run store database path");

    // plan
    std::string config_path;
    std::string plan_output;
    std::string run_id_flag;
    auto* plan_cmd = app.add_subcommand("plan", "validate config and write the plan manifest");
    plan_cmd->add_option("-c,--config", config_path, "job config YAML")->required();
    plan_cmd->add_option("--output", plan_output, "manifest output path");
    plan_cmd->add_option("--run-id", run_id_flag, "fixed run id");

    // dryrun
    auto* dryrun_cmd = app.add_subcommand("dryrun", "plan and print the unit grid, no execution");
    dryrun_cmd->add_option("-c,--config", config_path, "job config YAML")->required();

    // run
    auto* run_cmd = app.add_subcommand("run", "plan and execute");
    run_cmd->add_option("-c,--config", config_path, "job config YAML")->required();
    run_cmd->add_option("--run-id", run_id_flag,
                        "fixed run id (reuse to resume an interrupted run)");

    // report json
    std::string report_run = "last";
    std::string report_output;
    auto* report_cmd = app.add_subcommand("report", "emit run reports");
    auto* report_json_cmd = report_cmd->add_subcommand("json", "JSON report");
    report_json_cmd->add_option("run", report_run, "run id or 'last'");
    report_json_cmd->add_option("--output", report_output, "write to file instead of stdout");

    // runs inspect/delete
    std::string runs_target = "last";
    auto* runs_cmd = app.add_subcommand("runs", "inspect or delete runs");
    auto* runs_inspect_cmd = runs_cmd->add_subcommand("inspect", "show run details");
    runs_inspect_cmd->add_option("run", runs_target, "run id or 'last'");
    auto* runs_delete_cmd = runs_cmd->add_subcommand("delete", "delete a run's rows");
    runs_delete_cmd->add_option("run", runs_target, "run id or 'last'")->required();

    // cache stats/purge
    bool purge_expired_only = false;
    auto* cache_cmd = app.add_subcommand("cache", "response cache maintenance");
    auto* cache_stats_cmd = cache_cmd->add_subcommand("stats", "entry counts by namespace");
    auto* cache_purge_cmd = cache_cmd->add_subcommand("purge", "remove cache entries");
    cache_purge_cmd->add_flag("--expired-only", purge_expired_only,
                              "remove only TTL-expired entries");

    // prepare
    std::string prep_input;
    std::string prep_dataset;
    std::string prep_rule = "turn_buckets";
    std::size_t prep_cap = 200;
    std::size_t prep_min = 0;
    std::uint64_t prep_seed = 0;
    std::string prep_bounds;
    std::string prep_output;
    std::string prep_plan;
    std::string prep_goal_provider;
    std::string prep_goal_model;
    auto* prepare_cmd =
        app.add_subcommand("prepare", "normalize, stratify, and sample a raw corpus");
    prepare_cmd->add_option("--input", prep_input, "raw corpus JSONL")->required();
    prepare_cmd->add_option("--dataset", prep_dataset, "dataset id")->required();
    prepare_cmd->add_option("--rule", prep_rule,
                            "turn_buckets | topic_and_facet | topic_and_clarification_count");
    prepare_cmd->add_option("--cap", prep_cap, "max sampled episodes");
    prepare_cmd->add_option("--min-per-stratum", prep_min, "minimum allocation per stratum");
    prepare_cmd->add_option("--seed", prep_seed, "sampling seed");
    prepare_cmd->add_option("--bounds", prep_bounds, "turn bucket bounds '<short>,<medium>'");
    prepare_cmd->add_option("--output", prep_output, "episode JSONL output")->required();
    prepare_cmd->add_option("--plan", prep_plan, "sampling plan JSON output");
    prepare_cmd->add_option("--goal-provider", prep_goal_provider,
                            "provider for goal synthesis (http | mock)");
    prepare_cmd->add_option("--goal-model", prep_goal_model, "goal generator model id");

    // correlate
    std::string corr_pairs;
    std::size_t corr_permutations = 10000;
    std::uint64_t corr_seed = 0;
    auto* correlate_cmd =
        app.add_subcommand("correlate", "judge-human correlation over (judge, human) pairs");
    correlate_cmd->add_option("--pairs", corr_pairs, "JSON file of [judge, human] pairs")
        ->required();
    correlate_cmd->add_option("--permutations", corr_permutations, "permutation test size");
    correlate_cmd->add_option("--seed", corr_seed, "permutation seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const std::optional<std::string> run_id =
            run_id_flag.empty() ? std::nullopt : std::make_optional(run_id_flag);
        if (plan_cmd->parsed()) return cmd_plan(globals, config_path, run_id, plan_output);
        if (dryrun_cmd->parsed()) return cmd_dryrun(config_path);
        if (run_cmd->parsed()) return cmd_run(globals, config_path, run_id);
        if (report_cmd->parsed() && report_json_cmd->parsed()) {
            return cmd_report_json(globals, report_run, report_output);
        }
        if (runs_cmd->parsed() && runs_inspect_cmd->parsed()) {
            return cmd_runs_inspect(globals, runs_target);
        }
        if (runs_cmd->parsed() && runs_delete_cmd->parsed()) {
            return cmd_runs_delete(globals, runs_target);
        }
        if (cache_cmd->parsed() && cache_stats_cmd->parsed()) return cmd_cache_stats(globals);
        if (cache_cmd->parsed() && cache_purge_cmd->parsed()) {
            return cmd_cache_purge(globals, purge_expired_only);
        }
        if (prepare_cmd->parsed()) {
            return cmd_prepare(prep_input, prep_dataset, prep_rule, prep_cap, prep_min,
                               prep_seed, prep_bounds, prep_output, prep_plan,
                               prep_goal_provider, prep_goal_model);
        }
        if (correlate_cmd->parsed()) return cmd_correlate(corr_pairs, corr_permutations,
                                                          corr_seed);
        std::fprintf(stderr, "error: missing subcommand\n");
        return 2;
    } catch (const mb::ConfigError& e) {
        std::fprintf(stderr, "{\"error\":\"config\",\"message\":%s}\n",
                     json(e.what()).dump().c_str());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "{\"error\":\"runtime\",\"message\":%s}\n",
                     json(e.what()).dump().c_str());
        return 1;
    }
}

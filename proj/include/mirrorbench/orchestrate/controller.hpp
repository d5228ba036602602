#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "mirrorbench/common/clock.hpp"
#include "mirrorbench/model/pricing.hpp"
#include "mirrorbench/model/providers.hpp"
#include "mirrorbench/orchestrate/config.hpp"
#include "mirrorbench/orchestrate/plan.hpp"
#include "mirrorbench/orchestrate/store.hpp"
#include "mirrorbench/rollout/prompts.hpp"

namespace mirrorbench::orchestrate {

using ProviderFactory =
    std::function<std::shared_ptr<model::Provider>(const ClientConfig&)>;

ProviderFactory default_provider_factory();

struct ControllerOptions {
    std::shared_ptr<Clock> clock = std::make_shared<SystemClock>();
    ProviderFactory provider_factory = default_provider_factory();
    // Fixed run id for deterministic replays; otherwise a time-ordered random
    // id is generated.
    std::optional<std::string> run_id;
    // Directory for rollout artifacts and auto-computed anchors; defaults to
    // "<store>.artifacts" next to the store file.
    std::string artifacts_dir;
    model::PricingTable pricing = model::builtin_pricing();
    // Called after each persisted episode row (progress reporting and fault
    // injection in tests). Receives the number of episode rows written so far
    // in this run; may throw to abort.
    std::function<void(std::size_t)> episode_hook;
};

// Plans and executes a run against a store. One active run per store.
class RunController {
public:
    RunController(RunStore& store, JobConfig config, ControllerOptions options = {});

    // Enumerates units and persists the manifest before any execution.
    PlanManifest make_plan();

    // Executes the manifest: pending and running units are (re)executed,
    // completed units are skipped, so interrupted runs resume cleanly.
    // Returns the run id.
    std::string run(const PlanManifest& manifest);

    // Convenience: plan + run.
    std::string plan_and_run();

    const std::string& manifest_path() const { return manifest_path_; }

private:
    void apply_baseline_p_values(const std::string& run_id);
    void write_scorecards(const std::string& run_id);

    RunStore& store_;
    JobConfig config_;
    ControllerOptions options_;
    rollout::PromptPack pack_;
    std::string manifest_path_;
};

std::string generate_run_id(const Clock& clock);

}  // namespace mirrorbench::orchestrate

#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "mirrorbench/core/types.hpp"
#include "mirrorbench/model/client.hpp"
#include "mirrorbench/model/providers.hpp"

namespace mirrorbench::testing {

// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        std::string tmpl = (std::filesystem::temp_directory_path() / "mb-test-XXXXXX").string();
        std::vector<char> buf(tmpl.begin(), tmpl.end());
        buf.push_back('\0');
        if (mkdtemp(buf.data()) == nullptr) throw std::runtime_error("mkdtemp failed");
        path_ = buf.data();
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::string& path() const { return path_; }
    std::string file(const std::string& name) const {
        return (std::filesystem::path(path_) / name).string();
    }

private:
    std::string path_;
};

// Provider driven by a handler lambda, with optional scripted failures.
class ScriptedProvider final : public model::Provider {
public:
    using Handler = std::function<model::ModelResponse(const model::ModelRequest&)>;

    explicit ScriptedProvider(Handler handler) : handler_(std::move(handler)) {}

    // Fails the next `count` sends before delegating to the handler.
    void fail_next(std::size_t count, bool transient) {
        failures_ = count;
        transient_ = transient;
    }

    std::size_t calls() const { return calls_.load(); }

    model::ModelResponse send(const model::ModelRequest& request) override {
        calls_.fetch_add(1);
        {
            std::lock_guard lock(mutex_);
            if (failures_ > 0) {
                --failures_;
                throw model::ProviderError{"scripted failure", transient_};
            }
        }
        return handler_(request);
    }
    std::string name() const override { return "scripted"; }

private:
    Handler handler_;
    std::mutex mutex_;
    std::size_t failures_ = 0;
    bool transient_ = true;
    std::atomic<std::size_t> calls_{0};
};

// Wraps another provider and records every request it forwards.
class RecordingProvider final : public model::Provider {
public:
    explicit RecordingProvider(std::shared_ptr<model::Provider> inner)
        : inner_(std::move(inner)) {}

    model::ModelResponse send(const model::ModelRequest& request) override {
        {
            std::lock_guard lock(mutex_);
            requests_.push_back(request);
        }
        return inner_->send(request);
    }
    std::string name() const override { return "recording(" + inner_->name() + ")"; }

    std::vector<model::ModelRequest> requests() const {
        std::lock_guard lock(mutex_);
        return requests_;
    }

private:
    std::shared_ptr<model::Provider> inner_;
    mutable std::mutex mutex_;
    std::vector<model::ModelRequest> requests_;
};

inline model::ModelResponse text_response(const std::string& text, std::uint64_t in_tokens = 10,
                                          std::uint64_t out_tokens = 5) {
    model::ModelResponse response;
    response.text = text;
    response.usage.input_tokens = in_tokens;
    response.usage.output_tokens = out_tokens;
    return response;
}

// Builds an alternating dialogue from texts, first turn user.
inline core::Dialogue make_dialogue(const std::vector<std::string>& texts) {
    std::vector<core::Turn> turns;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        turns.push_back({i % 2 == 0 ? core::Role::kUser : core::Role::kAssistant, texts[i],
                         i + 1});
    }
    return core::Dialogue::create(std::move(turns));
}

inline core::Episode make_episode(const std::string& id, const std::vector<std::string>& texts,
                                  const std::string& goal_text = "Ask about laptops") {
    core::GoalSpec goal;
    goal.text = goal_text;
    goal.source = core::GoalSource::kGiven;
    return core::Episode{id, make_dialogue(texts), goal, {{"dataset", "test"}}};
}

}  // namespace mirrorbench::testing

#include <doctest.h>

#include "helpers.hpp"
#include "mirrorbench/common/errors.hpp"
#include "mirrorbench/core/episode_io.hpp"
#include "mirrorbench/core/types.hpp"

using namespace mirrorbench;
using mirrorbench::testing::make_dialogue;
using mirrorbench::testing::make_episode;
using mirrorbench::testing::TempDir;

namespace {

std::vector<core::Turn> turns_of(const std::vector<core::Role>& roles) {
    std::vector<core::Turn> turns;
    for (std::size_t i = 0; i < roles.size(); ++i) {
        turns.push_back({roles[i], "text" + std::to_string(i), i + 1});
    }
    return turns;
}

}  // namespace

TEST_CASE("validate_alternation accepts a minimal valid dialogue") {
    const auto check =
        core::validate_alternation(turns_of({core::Role::kUser, core::Role::kAssistant}));
    CHECK(check.ok);
}

TEST_CASE("validate_alternation reports the first violating index") {
    const auto check = core::validate_alternation(
        turns_of({core::Role::kUser, core::Role::kUser, core::Role::kAssistant}));
    CHECK_FALSE(check.ok);
    CHECK(check.violating_index == 2);
    CHECK(check.reason == "expected assistant");
}

TEST_CASE("validate_alternation rejects assistant-first dialogues") {
    const auto check =
        core::validate_alternation(turns_of({core::Role::kAssistant, core::Role::kUser}));
    CHECK_FALSE(check.ok);
    CHECK(check.violating_index == 1);
    CHECK(check.reason == "must start with user");
}

TEST_CASE("validate_alternation rejects empty and unpaired dialogues") {
    CHECK_FALSE(core::validate_alternation({}).ok);
    const auto trailing = core::validate_alternation(
        turns_of({core::Role::kUser, core::Role::kAssistant, core::Role::kUser}));
    CHECK_FALSE(trailing.ok);
    CHECK(trailing.violating_index == 3);
}

TEST_CASE("validate_alternation rejects whitespace-only turn text") {
    std::vector<core::Turn> turns{{core::Role::kUser, "  \t ", 1},
                                  {core::Role::kAssistant, "ok", 2}};
    const auto check = core::validate_alternation(turns);
    CHECK_FALSE(check.ok);
    CHECK(check.violating_index == 1);
}

TEST_CASE("Dialogue::create throws on invalid sequences") {
    CHECK_THROWS_AS(core::Dialogue::create(turns_of({core::Role::kAssistant})), ValidationError);
    const auto dialogue = make_dialogue({"hi", "hello"});
    CHECK(dialogue.length() == 1);
}

TEST_CASE("user_side_text joins trimmed user turns with single spaces") {
    CHECK(core::user_side_text(make_dialogue({"hi", "hello"})) == "hi");
    CHECK(core::user_side_text(make_dialogue({"a", "x", "b", "y"})) == "a b");
    CHECK(core::user_side_text(make_dialogue({"  pad  ", "x"})) == "pad");
}

TEST_CASE("user_side_text has exactly L-1 joining spaces for single-token turns") {
    for (std::size_t pairs = 1; pairs <= 6; ++pairs) {
        std::vector<std::string> texts;
        for (std::size_t i = 0; i < pairs; ++i) {
            texts.push_back("u" + std::to_string(i));
            texts.push_back("a" + std::to_string(i));
        }
        const std::string joined = core::user_side_text(make_dialogue(texts));
        const std::size_t spaces =
            static_cast<std::size_t>(std::count(joined.begin(), joined.end(), ' '));
        CHECK(spaces == pairs - 1);
    }
}

TEST_CASE("successful artifacts enforce turn parity at construction") {
    const auto episode = make_episode("test/1", {"q1", "r1", "q2", "r2"});
    const auto short_synthetic = make_dialogue({"s1", "t1"});
    CHECK_THROWS_AS(core::RolloutArtifact::create(episode, short_synthetic, {},
                                                  core::RolloutStatus::kSuccess),
                    ValidationError);
    // Same transcript is fine as a failure artifact.
    const auto artifact = core::RolloutArtifact::create(episode, short_synthetic, {},
                                                        core::RolloutStatus::kFailure);
    CHECK(artifact.status == core::RolloutStatus::kFailure);

    const auto full = make_dialogue({"s1", "t1", "s2", "t2"});
    const auto ok =
        core::RolloutArtifact::create(episode, full, {}, core::RolloutStatus::kSuccess);
    CHECK(ok.synthetic->length() == episode.reference.length());
}

TEST_CASE("episode JSONL round-trips all fields") {
    TempDir dir;
    core::Episode episode = make_episode("demo/42", {"what laptops?", "several options"});
    episode.goal.source = core::GoalSource::kGenerated;
    episode.goal.generator_model = "mock-goal";
    episode.meta["stratum"] = "short";

    const std::string path = dir.file("episodes.jsonl");
    core::write_episodes_jsonl(path, {episode});
    const auto loaded = core::read_episodes_jsonl(path);
    REQUIRE(loaded.size() == 1);
    CHECK(loaded[0].episode_id == "demo/42");
    CHECK(loaded[0].goal.text == episode.goal.text);
    CHECK(loaded[0].goal.source == core::GoalSource::kGenerated);
    CHECK(loaded[0].goal.generator_model == "mock-goal");
    CHECK(loaded[0].meta.at("stratum") == "short");
    CHECK(loaded[0].reference.length() == 1);
    CHECK(loaded[0].reference.user_turn(0).text == "what laptops?");
}

TEST_CASE("episode reader honors the limit and rejects malformed lines") {
    TempDir dir;
    std::vector<core::Episode> episodes;
    for (int i = 0; i < 5; ++i) {
        episodes.push_back(make_episode("demo/" + std::to_string(i), {"q", "a"}));
    }
    const std::string path = dir.file("episodes.jsonl");
    core::write_episodes_jsonl(path, episodes);
    CHECK(core::read_episodes_jsonl(path, 3).size() == 3);
    CHECK(core::read_episodes_jsonl(path).size() == 5);

    CHECK_THROWS_AS(core::read_episodes_jsonl(dir.file("missing.jsonl")), StoreError);
}

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/read_path.hpp"
#include "core/sim_time.hpp"
#include "core/temporal.hpp"

namespace atant {

struct expected_store {
    std::vector<std::string> keywords;
    std::optional<std::string> expected_classification;
    std::optional<std::vector<std::string>> expected_type_tags;
};

struct story_batch {
    int batch_index = 0;
    sim_time simulated_timestamp{};
    std::vector<std::string> turns;
    std::vector<expected_store> expected_stores;
};

struct temporal_expectation {
    temporal_kind type = temporal_kind::none;
    temporal_direction direction = temporal_direction::none;
};

struct emotion_expectation {
    bool detected = false;
    emotion_direction direction = emotion_direction::neutral;
};

struct verification_question {
    std::string question_id;
    std::string query_text;
    std::vector<std::string> expected_keywords;
    std::optional<std::string> expected_query_type;
    std::optional<temporal_expectation> temporal;
    std::optional<emotion_expectation> emotion;
    sim_time ask_at{};
    bool trap = false;
};

struct story_meta {
    std::string story_id;
    std::string category;
    std::string simulated_duration;
    std::string title;
};

struct story {
    story_meta meta;
    std::vector<story_batch> batches;
    std::vector<verification_question> questions;
};

inline const std::vector<std::string>& story_categories() {
    static const std::vector<std::string> c = {"career",   "relationships", "health",
                                              "learning", "daily_life",    "life_events"};
    return c;
}

struct lint_finding {
    enum class severity { error, warning };
    severity sev = severity::error;
    std::string path;  // "batches[2].turns", "questions[0].ask_at", ...
    std::string message;
};

std::string_view to_string(lint_finding::severity s);

/// Parse one story document. Structural problems (wrong type, missing
/// required field, bad timestamp) throw a parse error naming the field
/// path; unknown keys are appended to `warnings` when given.
story parse_story(const nlohmann::ordered_json& doc, std::vector<lint_finding>* warnings = nullptr);

/// Canonical form: fixed key order, optional fields omitted when
/// absent, timestamps in canonical ISO-8601. serialize(parse(file)) is
/// byte-identical for files already in this form.
nlohmann::ordered_json story_to_json(const story& s);
std::string serialize_story(const story& s);

/// All invariant checks as lint findings; empty means the story is
/// well-formed. Never throws.
std::vector<lint_finding> validate_story(const story& s);

/// Load every *.json story under `path` (or the single file), sorted
/// by story_id. Any error-severity finding aborts with a validation
/// error naming the file and field; warnings accumulate in `findings`.
/// An empty directory yields an empty list plus a warning.
std::vector<story> load_corpus(const std::filesystem::path& path,
                               std::vector<lint_finding>* findings = nullptr);

/// Lint the whole corpus without stopping at the first problem:
/// parse failures become error findings and the walk continues, so
/// one pass reports everything. Throws only when `path` is unreadable.
std::vector<lint_finding> lint_corpus(const std::filesystem::path& path);

struct corpus_summary {
    size_t stories = 0;
    size_t batches = 0;
    size_t turns = 0;
    size_t questions = 0;
    std::map<std::string, size_t> per_category;  // category -> story count
};

corpus_summary corpus_stats(const std::vector<story>& stories);

}  // namespace atant

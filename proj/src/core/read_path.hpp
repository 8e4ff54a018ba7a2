#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/lexicon.hpp"
#include "core/store.hpp"

namespace atant {

enum class query_label {
    fact_lookup,
    current_state,
    temporal,
    reconstruction,
    emotional,
    general_knowledge
};

std::string_view to_string(query_label l);
std::optional<query_label> query_label_from(std::string_view s);

struct query_classification {
    query_label label = query_label::fact_lookup;
};

/// Deterministic query labeling. Queries without any personal referent
/// are general knowledge (the trap on the read side); "tell me about"
/// forms are reconstruction; feel-words emotional; when/what-day forms
/// temporal; still/now/currently/anymore current-state; the rest plain
/// fact lookup.
query_classification classify_query(std::string_view query_text);

inline constexpr int kDefaultK = 5;

enum class match_basis { predicted_query, slot_match, keyword_overlap };
std::string_view to_string(match_basis b);
std::optional<match_basis> match_basis_from(std::string_view s);

/// One scored retrieval candidate. Scores are rationals over a common
/// per-query denominator: tier*den + overlap over den, where the tier
/// is 3 for an exact predicted-query hit, 2 for a subject slot match,
/// 1 for bare keyword overlap. Tiers therefore never interleave.
struct candidate {
    std::string trace_id;
    long long score_num = 0;
    long long score_den = 1;
    match_basis basis = match_basis::keyword_overlap;
};

struct candidate_set {
    std::vector<candidate> candidates;  // (score desc, trace_id asc), length <= k
    int k = kDefaultK;
};

/// Score the context's traces against a query. Only traces in
/// `context` are eligible unless `cross_context` is set (the
/// no-scope-isolation control variant).
candidate_set match_structural(std::string_view query_text, const std::string& context,
                               const trace_store& store, int k = kDefaultK,
                               bool cross_context = false);

/// Collapse candidates to the traces an answer should draw on.
/// Lookup-style queries follow the top candidate's supersession chain
/// to its active trace. Reconstruction gathers every candidate sharing
/// the top subject plus that subject's emotion-tagged and superseded
/// traces, so the answer is a connected set. Emotional queries keep the
/// active emotion-bearing traces on the top subject. Returns stored-at
/// order; empty candidates give an empty list.
std::vector<std::string> converge(const trace_store& store, const candidate_set& candidates,
                                  const query_classification& cls);

struct answer {
    std::string text;
    std::vector<std::string> traces_used;
    bool refused = false;  // refused answers carry exactly the no-fact marker
};

inline constexpr std::string_view kNoFactMarker = "NO_PERSONAL_FACT";

/// Render converged traces through fixed templates, one sentence per
/// trace in the given order. General-knowledge queries and empty trace
/// lists refuse with the marker. Resolved times append the weekday, ISO
/// date and a direction word relative to `ask_at`.
answer assemble_answer(const trace_store& store, const std::vector<std::string>& trace_ids,
                       const query_classification& cls, const sim_time& ask_at);

struct temporal_judgment {
    temporal_kind kind = temporal_kind::none;
    temporal_direction direction = temporal_direction::none;
};

/// Kind from the first converged trace carrying a resolved time;
/// direction by local-calendar-day comparison against ask_at (same day
/// = present). No resolved time anywhere yields the none pair.
temporal_judgment judge_temporal(const trace_store& store,
                                 const std::vector<std::string>& trace_ids,
                                 const sim_time& ask_at);

enum class emotion_direction { positive, negative, neutral };
std::string_view to_string(emotion_direction d);
std::optional<emotion_direction> emotion_direction_from(std::string_view s);

struct emotion_judgment {
    bool detected = false;
    emotion_direction direction = emotion_direction::neutral;
};

/// Valence scan over the converged traces' source text plus the query
/// itself: detected on any lexicon hit, direction from the sign of the
/// summed weights, ties neutral.
emotion_judgment judge_emotion(const trace_store& store,
                               const std::vector<std::string>& trace_ids,
                               std::string_view query_text, const valence_lexicon& affect);

}  // namespace atant

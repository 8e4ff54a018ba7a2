#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/lexicon.hpp"
#include "core/store.hpp"

namespace atant {

enum class input_label { personal_fact, update, question, general_knowledge, emotional, mixed };

std::string_view to_string(input_label l);
std::optional<input_label> input_label_from(std::string_view s);

struct input_classification {
    input_label label = input_label::general_knowledge;
};

/// Deterministic grammar-first label for one utterance.
///
/// Question forms (interrogatives, trailing '?') with a personal
/// referent are `question`, without one `general_knowledge`. Statements
/// with correction markers ("actually", "no wait", update verbs like
/// "moved to" / "rescheduled") are `update`; this dominates affect, so
/// an update with a feeling tacked on still routes through slot
/// replacement. Otherwise affect-only clauses give `emotional`,
/// fact-only `personal_fact`, both `mixed`, and statements with no
/// personal referent `general_knowledge`.
input_classification classify_input(std::string_view utterance, const predicate_lexicon& preds,
                                    const valence_lexicon& affect);

/// Prior traces consulted during extraction. `pronoun_window` is the
/// bounded antecedent window (current + previous batch, oldest first);
/// `history` is the full context record (oldest first) and is only used
/// for anchors that may be arbitrarily old: cancellation targets and
/// "after/before X" sequence references.
struct ingest_context {
    std::span<const fact_trace* const> pronoun_window;
    std::span<const fact_trace* const> history;
};

/// Pattern-rule extraction: one unstored trace per assertion.
///
/// Sentences split on ./!/?/;, clauses on commas and "and"/"but" when
/// both sides carry a verb (so "My brother and I" stays one subject
/// phrase and yields one trace per conjunct). Pronoun subjects resolve
/// to the nearest compatible antecedent; unresolved third-person
/// pronouns drop the clause. Temporal suffixes are carved off objects
/// and resolved against `batch_time`; "after/before <anchor>" phrases
/// inherit the anchor trace's resolved time. Cancellation clauses
/// ("not ... anymore", "was cancelled") emit a trace with object
/// "cancelled" for the anchored slot.
std::vector<fact_trace> extract_facts(std::string_view utterance, const std::string& context,
                                      const sim_time& batch_time, const predicate_lexicon& preds,
                                      const valence_lexicon& affect, const ingest_context& prior);

/// Template-generated questions a stored trace should answer; always at
/// least one, deterministic order, duplicates removed.
std::vector<std::string> predict_queries(const fact_trace& trace);

/// Category tags from gazetteers and shape rules, sorted and unique.
/// Objects nothing matches fall back to the generic "object" tag, so
/// the set is never empty.
std::vector<std::string> tag_types(const fact_trace& trace, const valence_lexicon& affect);

struct write_options {
    bool supersession = true;  // false = negative-control variant: updates pile up
};

struct ingest_result {
    input_classification classification;
    std::vector<std::string> stored_ids;      // ids written this turn, in order
    std::vector<std::string> superseded_ids;  // prior ids replaced this turn
};

/// classify -> extract -> tag -> predict -> put/supersede.
///
/// Questions and general knowledge store nothing. Updates and
/// cancellations replace the latest active trace with the same
/// (subject, predicate) slot when one exists; everything else appends.
ingest_result ingest_turn(std::string_view utterance, const std::string& context,
                          const sim_time& batch_time, trace_store& store,
                          const predicate_lexicon& preds, const valence_lexicon& affect,
                          const ingest_context& prior, const write_options& opts = {});

}  // namespace atant

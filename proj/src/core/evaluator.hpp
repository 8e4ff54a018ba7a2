#pragma once

#include <string>
#include <vector>

#include "core/corpus.hpp"
#include "core/sut.hpp"

namespace atant {

/// Normative answer check: every expected keyword must occur as a
/// substring of the answer after case folding and whitespace
/// normalization. No word-boundary requirement.
bool keyword_verify(std::string_view answer_text, const std::vector<std::string>& expected);

enum class cp_status { pass, fail, not_assessed };
std::string_view to_string(cp_status s);

struct checkpoint_result {
    int checkpoint = 0;  // 1..10
    cp_status status = cp_status::not_assessed;
    std::string detail;  // expected-vs-observed, or why not assessed
};

/// CP1-CP4 verdicts for one expected store of one batch.
struct store_check {
    int batch_index = 0;
    int store_index = 0;
    std::vector<checkpoint_result> cp_results;
};

struct question_result {
    std::string question_id;
    std::string answer_text;
    std::vector<std::string> traces_used;
    bool have_traces_used = false;
    bool cp8_pass = false;
    std::vector<checkpoint_result> cp_results;  // CP5..CP10
};

struct story_result {
    std::string story_id;
    std::string context;
    std::vector<store_check> store_checks;
    std::vector<question_result> questions;
    bool errored = false;
    std::string error;
    bool restarted = false;
};

/// Ingest all batches under `context`, scoring CP1-CP4 against the
/// snapshot diff per batch (when the hooks exist). Leaves write-path
/// results and any error state in `out`.
void run_ingest_phase(sut& s, const story& st, const std::string& context, story_result& out);

/// Ask every question, scoring CP5-CP10. A failed system call fails
/// the current and all remaining questions closed (CP8 fail). Assumes
/// begin_context was already issued for this story.
void run_question_phase(sut& s, const story& st, story_result& out);

/// Full single-story evaluation: ingest phase, optional restart,
/// question phase.
story_result run_story(sut& s, const story& st, const std::string& context,
                       bool restart_between_phases);

/// Result for a story whose system never became usable (e.g. the
/// process would not start): every planned assessment fails closed.
story_result failed_story(const story& st, const std::string& context, const std::string& why);

}  // namespace atant

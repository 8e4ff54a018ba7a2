#include "core/evaluator.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "core/error.hpp"
#include "core/text.hpp"

namespace atant {

bool keyword_verify(std::string_view answer_text, const std::vector<std::string>& expected) {
    return std::all_of(expected.begin(), expected.end(),
                       [&](const std::string& kw) { return text::contains_fold(answer_text, kw); });
}

std::string_view to_string(cp_status s) {
    switch (s) {
        case cp_status::pass: return "pass";
        case cp_status::fail: return "fail";
        case cp_status::not_assessed: return "not_assessed";
    }
    return "not_assessed";
}

namespace {

checkpoint_result cp(int n, cp_status s, std::string detail = {}) {
    return {n, s, std::move(detail)};
}

std::string join_list(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
        if (!out.empty()) out += ", ";
        out += s;
    }
    return out;
}

/// Everything a stored fact exposes to keyword matching.
std::string storage_text(const fact_trace& t) {
    return t.subject + " " + t.predicate + " " + t.object + " " + t.source_text;
}

std::vector<const fact_trace*> matching_traces(const std::vector<const fact_trace*>& pool,
                                               const std::vector<std::string>& keywords) {
    std::vector<const fact_trace*> hits;
    for (const fact_trace* t : pool) {
        if (keyword_verify(storage_text(*t), keywords)) hits.push_back(t);
    }
    return hits;
}

/// CP1-CP4 for one expected store, given the traces the batch added.
store_check check_store(sut& s, const expected_store& exp, int batch_index, int store_index,
                        const std::vector<const fact_trace*>& new_traces, bool have_snapshots) {
    store_check out;
    out.batch_index = batch_index;
    out.store_index = store_index;

    if (!have_snapshots) {
        out.cp_results.push_back(cp(1, cp_status::not_assessed, "storage snapshot unavailable"));
        out.cp_results.push_back(cp(2, cp_status::not_assessed, "storage snapshot unavailable"));
        out.cp_results.push_back(cp(3, cp_status::not_assessed, "storage snapshot unavailable"));
        out.cp_results.push_back(cp(4, cp_status::not_assessed, "storage snapshot unavailable"));
        return out;
    }

    auto hits = matching_traces(new_traces, exp.keywords);

    // CP2: some newly stored fact carries every expected keyword.
    if (hits.empty()) {
        out.cp_results.push_back(
            exp.expected_classification
                ? cp(1, cp_status::fail, "no stored fact matched the expected keywords")
                : cp(1, cp_status::not_assessed, "no expected classification"));
        out.cp_results.push_back(cp(2, cp_status::fail,
                                    "keywords [" + join_list(exp.keywords) + "] not all present in any of " +
                                        std::to_string(new_traces.size()) + " newly stored facts"));
        // Downstream write checkpoints depend on the matched fact; a
        // missing fact fails them closed rather than skipping them.
        out.cp_results.push_back(cp(3, cp_status::fail, "no matching stored fact"));
        out.cp_results.push_back(
            exp.expected_type_tags ? cp(4, cp_status::fail, "no matching stored fact")
                                   : cp(4, cp_status::not_assessed, "no expected type tags"));
        return out;
    }
    out.cp_results.push_back(cp(2, cp_status::pass));

    // CP1: the turn that produced the matched fact classifies as expected.
    if (!exp.expected_classification) {
        out.cp_results.insert(out.cp_results.begin(),
                              cp(1, cp_status::not_assessed, "no expected classification"));
    } else {
        auto observed = s.classification(hits.front()->source_text);
        if (!observed) {
            out.cp_results.insert(out.cp_results.begin(),
                                  cp(1, cp_status::not_assessed, "classification hook unavailable"));
        } else if (*observed == *exp.expected_classification) {
            out.cp_results.insert(out.cp_results.begin(), cp(1, cp_status::pass));
        } else {
            out.cp_results.insert(out.cp_results.begin(),
                                  cp(1, cp_status::fail,
                                     "expected " + *exp.expected_classification + ", observed " + *observed));
        }
    }

    // CP3: every matched fact announces at least one predicted query.
    {
        cp_status st = cp_status::pass;
        std::string detail;
        for (const fact_trace* t : hits) {
            auto pq = s.predicted_queries(t->trace_id);
            if (!pq) {
                st = cp_status::not_assessed;
                detail = "predicted-queries hook unavailable";
                break;
            }
            if (pq->empty()) {
                st = cp_status::fail;
                detail = t->trace_id + " has no predicted queries";
                break;
            }
        }
        out.cp_results.push_back(cp(3, st, std::move(detail)));
    }

    // CP4: expected type tags are covered by the matched facts' tags,
    // pooled because one turn may legitimately split into several facts.
    if (!exp.expected_type_tags) {
        out.cp_results.push_back(cp(4, cp_status::not_assessed, "no expected type tags"));
    } else {
        std::set<std::string> observed;
        bool hook_ok = true;
        for (const fact_trace* t : hits) {
            auto tags = s.type_tags(t->trace_id);
            if (!tags) {
                hook_ok = false;
                break;
            }
            observed.insert(tags->begin(), tags->end());
        }
        if (!hook_ok) {
            out.cp_results.push_back(cp(4, cp_status::not_assessed, "type-tags hook unavailable"));
        } else {
            std::vector<std::string> missing;
            for (const auto& tag : *exp.expected_type_tags) {
                if (!observed.count(tag)) missing.push_back(tag);
            }
            if (missing.empty()) {
                out.cp_results.push_back(cp(4, cp_status::pass));
            } else {
                out.cp_results.push_back(cp(4, cp_status::fail,
                                            "tags [" + join_list(missing) + "] not observed on [" +
                                                join_list([&] {
                                                    std::vector<std::string> o(observed.begin(), observed.end());
                                                    return o;
                                                }()) + "]"));
            }
        }
    }
    return out;
}

/// Fail-closed write checks for a batch whose ingestion errored.
store_check failed_store_check(const expected_store& exp, int batch_index, int store_index,
                               const std::string& why) {
    store_check sc;
    sc.batch_index = batch_index;
    sc.store_index = store_index;
    sc.cp_results.push_back(exp.expected_classification
                                ? cp(1, cp_status::fail, why)
                                : cp(1, cp_status::not_assessed, "no expected classification"));
    sc.cp_results.push_back(cp(2, cp_status::fail, why));
    sc.cp_results.push_back(cp(3, cp_status::fail, why));
    sc.cp_results.push_back(exp.expected_type_tags
                                ? cp(4, cp_status::fail, why)
                                : cp(4, cp_status::not_assessed, "no expected type tags"));
    return sc;
}

/// Mark every checkpoint that had a planned assessment as failed.
/// Used when a mandatory system call errors: fail closed, never skip.
question_result failed_question(const verification_question& q, const std::string& why) {
    question_result out;
    out.question_id = q.question_id;
    out.cp8_pass = false;
    out.cp_results.push_back(q.expected_query_type
                                 ? cp(5, cp_status::fail, why)
                                 : cp(5, cp_status::not_assessed, "no expected query type"));
    out.cp_results.push_back(q.trap ? cp(6, cp_status::not_assessed, "trap question")
                                    : cp(6, cp_status::fail, why));
    bool reconstruction = q.expected_query_type && *q.expected_query_type == "reconstruction";
    out.cp_results.push_back(reconstruction ? cp(7, cp_status::fail, why)
                                            : cp(7, cp_status::not_assessed,
                                                 "only assessed for reconstruction queries"));
    out.cp_results.push_back(cp(8, cp_status::fail, why));
    out.cp_results.push_back(q.temporal ? cp(9, cp_status::fail, why)
                                        : cp(9, cp_status::not_assessed, "no temporal expectation"));
    out.cp_results.push_back(q.emotion ? cp(10, cp_status::fail, why)
                                       : cp(10, cp_status::not_assessed, "no emotion expectation"));
    return out;
}

question_result check_question(sut& s, const verification_question& q,
                               const std::map<std::string, fact_trace>& by_id,
                               bool have_snapshot) {
    question_result out;
    out.question_id = q.question_id;

    // CP5: query classification.
    if (!q.expected_query_type) {
        out.cp_results.push_back(cp(5, cp_status::not_assessed, "no expected query type"));
    } else {
        auto observed = s.query_classification(q.query_text);
        if (!observed) {
            out.cp_results.push_back(cp(5, cp_status::not_assessed,
                                        "query-classification hook unavailable"));
        } else if (*observed == *q.expected_query_type) {
            out.cp_results.push_back(cp(5, cp_status::pass));
        } else {
            out.cp_results.push_back(cp(5, cp_status::fail, "expected " + *q.expected_query_type +
                                                                ", observed " + *observed));
        }
    }

    // CP6/CP7 share the retrieval candidates.
    std::optional<candidate_set> cands;
    bool have_cands = false;
    {
        auto c = s.candidates(q.query_text, q.ask_at);
        if (c) {
            cands = std::move(c);
            have_cands = true;
        }
    }

    // CP6: some top-k candidate is the fact the keywords describe.
    if (q.trap) {
        out.cp_results.push_back(cp(6, cp_status::not_assessed, "trap question"));
    } else if (!have_cands) {
        out.cp_results.push_back(cp(6, cp_status::not_assessed, "candidates hook unavailable"));
    } else if (!have_snapshot) {
        out.cp_results.push_back(cp(6, cp_status::not_assessed, "storage snapshot unavailable"));
    } else {
        bool found = false;
        for (const candidate& c : cands->candidates) {
            auto it = by_id.find(c.trace_id);
            if (it != by_id.end() && keyword_verify(storage_text(it->second), q.expected_keywords)) {
                found = true;
                break;
            }
        }
        if (found) {
            out.cp_results.push_back(cp(6, cp_status::pass));
        } else {
            out.cp_results.push_back(cp(6, cp_status::fail,
                                        "keywords [" + join_list(q.expected_keywords) +
                                            "] matched none of " +
                                            std::to_string(cands->candidates.size()) +
                                            " retrieval candidates"));
        }
    }

    // CP7: reconstruction answers should draw on more than one fact
    // when the store actually holds more than one about the subject.
    bool reconstruction = q.expected_query_type && *q.expected_query_type == "reconstruction";
    if (!reconstruction) {
        out.cp_results.push_back(cp(7, cp_status::not_assessed,
                                    "only assessed for reconstruction queries"));
    } else if (!have_cands) {
        out.cp_results.push_back(cp(7, cp_status::not_assessed, "candidates hook unavailable"));
    } else if (cands->candidates.empty()) {
        out.cp_results.push_back(cp(7, cp_status::fail, "no retrieval candidates"));
    } else if (!have_snapshot) {
        out.cp_results.push_back(cp(7, cp_status::not_assessed, "storage snapshot unavailable"));
    } else {
        auto top = by_id.find(cands->candidates.front().trace_id);
        size_t about_subject = 0;
        if (top != by_id.end()) {
            for (const auto& [id, t] : by_id) {
                if (t.subject == top->second.subject) ++about_subject;
            }
        }
        size_t required = about_subject >= 2 ? 2 : 1;
        if (cands->candidates.size() >= required) {
            out.cp_results.push_back(cp(7, cp_status::pass));
        } else {
            out.cp_results.push_back(cp(7, cp_status::fail,
                                        "expected >= " + std::to_string(required) +
                                            " candidates, observed " +
                                            std::to_string(cands->candidates.size())));
        }
    }

    // CP8: the answer itself. Always assessed; this is the definitive check.
    sut_answer ans = s.answer(q.query_text, q.ask_at);
    out.answer_text = ans.text;
    out.traces_used = ans.traces_used;
    out.have_traces_used = ans.have_traces_used;
    out.cp8_pass = keyword_verify(ans.text, q.expected_keywords);
    out.cp_results.push_back(
        out.cp8_pass ? cp(8, cp_status::pass)
                     : cp(8, cp_status::fail, "keywords [" + join_list(q.expected_keywords) +
                                                  "] not all in answer \"" + ans.text + "\""));

    // CP9: (kind, direction) of the time the answer leans on.
    if (!q.temporal) {
        out.cp_results.push_back(cp(9, cp_status::not_assessed, "no temporal expectation"));
    } else {
        auto observed = s.temporal_hook(q.query_text, q.ask_at);
        if (!observed) {
            out.cp_results.push_back(cp(9, cp_status::not_assessed, "temporal hook unavailable"));
        } else if (observed->kind == q.temporal->type && observed->direction == q.temporal->direction) {
            out.cp_results.push_back(cp(9, cp_status::pass));
        } else {
            std::ostringstream d;
            d << "expected (" << to_string(q.temporal->type) << ", " << to_string(q.temporal->direction)
              << "), observed (" << to_string(observed->kind) << ", " << to_string(observed->direction)
              << ")";
            out.cp_results.push_back(cp(9, cp_status::fail, d.str()));
        }
    }

    // CP10: (detected, direction) of the emotional reading.
    if (!q.emotion) {
        out.cp_results.push_back(cp(10, cp_status::not_assessed, "no emotion expectation"));
    } else {
        auto observed = s.emotion_hook(q.query_text, q.ask_at);
        if (!observed) {
            out.cp_results.push_back(cp(10, cp_status::not_assessed, "emotion hook unavailable"));
        } else if (observed->detected == q.emotion->detected &&
                   observed->direction == q.emotion->direction) {
            out.cp_results.push_back(cp(10, cp_status::pass));
        } else {
            std::ostringstream d;
            d << "expected (" << (q.emotion->detected ? "detected" : "not detected") << ", "
              << to_string(q.emotion->direction) << "), observed ("
              << (observed->detected ? "detected" : "not detected") << ", "
              << to_string(observed->direction) << ")";
            out.cp_results.push_back(cp(10, cp_status::fail, d.str()));
        }
    }
    return out;
}

}  // namespace

void run_ingest_phase(sut& s, const story& st, const std::string& context, story_result& out) {
    out.story_id = st.meta.story_id;
    out.context = context;
    try {
        s.begin_context(context);
    } catch (const std::exception& e) {
        out.errored = true;
        out.error = std::string("begin_context: ") + e.what();
        return;
    }

    for (const story_batch& batch : st.batches) {
        std::optional<store_snapshot> before = s.storage_snapshot();
        try {
            for (const std::string& turn : batch.turns) s.ingest(turn, batch.simulated_timestamp);
        } catch (const std::exception& e) {
            out.errored = true;
            out.error = "ingest (batch " + std::to_string(batch.batch_index) + "): " + e.what();
        }

        std::optional<store_snapshot> after;
        bool have_snapshots = false;
        std::vector<const fact_trace*> fresh;
        if (!out.errored && before) {
            after = s.storage_snapshot();
            if (after) {
                have_snapshots = true;
                std::set<std::string> known;
                for (const fact_trace& t : before->traces) known.insert(t.trace_id);
                for (const fact_trace& t : after->traces) {
                    if (!known.count(t.trace_id)) fresh.push_back(&t);
                }
            }
        }

        int store_index = 0;
        for (const expected_store& exp : batch.expected_stores) {
            if (out.errored) {
                // The system call already failed, so nothing can be
                // verified; fail the planned write checks closed.
                out.store_checks.push_back(failed_store_check(exp, batch.batch_index, store_index,
                                                              "system error: " + out.error));
            } else {
                out.store_checks.push_back(
                    check_store(s, exp, batch.batch_index, store_index, fresh, have_snapshots));
            }
            ++store_index;
        }
        if (out.errored) break;
    }
}

void run_question_phase(sut& s, const story& st, story_result& out) {
    // The store no longer changes, so one snapshot serves every question.
    std::map<std::string, fact_trace> by_id;
    bool have_snapshot = false;
    if (!out.errored) {
        if (auto snap = s.storage_snapshot()) {
            have_snapshot = true;
            for (fact_trace& t : snap->traces) by_id.emplace(t.trace_id, std::move(t));
        }
    }

    for (const verification_question& q : st.questions) {
        if (out.errored) {
            out.questions.push_back(failed_question(q, "system error: " + out.error));
            continue;
        }
        try {
            out.questions.push_back(check_question(s, q, by_id, have_snapshot));
        } catch (const std::exception& e) {
            out.errored = true;
            out.error = "answer (" + q.question_id + "): " + e.what();
            out.questions.push_back(failed_question(q, "system error: " + out.error));
        }
    }
}

story_result run_story(sut& s, const story& st, const std::string& context,
                       bool restart_between_phases) {
    story_result out;
    run_ingest_phase(s, st, context, out);

    if (!out.errored && restart_between_phases) {
        try {
            out.restarted = s.restart();
            if (out.restarted) s.begin_context(context);
        } catch (const std::exception& e) {
            out.errored = true;
            out.error = std::string("restart: ") + e.what();
        }
    }

    run_question_phase(s, st, out);
    return out;
}

story_result failed_story(const story& st, const std::string& context, const std::string& why) {
    story_result out;
    out.story_id = st.meta.story_id;
    out.context = context;
    out.errored = true;
    out.error = why;
    for (const story_batch& batch : st.batches) {
        int store_index = 0;
        for (const expected_store& exp : batch.expected_stores) {
            out.store_checks.push_back(
                failed_store_check(exp, batch.batch_index, store_index, "system error: " + why));
            ++store_index;
        }
    }
    for (const verification_question& q : st.questions) {
        out.questions.push_back(failed_question(q, "system error: " + why));
    }
    return out;
}

}  // namespace atant

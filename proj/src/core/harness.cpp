#include "core/harness.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace atant {

int rate_tenths(long long passed, long long total) {
    if (total <= 0) return 0;
    // Tenths of a percent, half-up: floor((passed/total*1000) + 0.5)
    // in exact integer arithmetic.
    return static_cast<int>((passed * 2000 + total) / (2 * total));
}

std::string format_tenths(int tenths) {
    return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

std::string_view tier_for_tenths(int tenths) {
    if (tenths >= 1000) return "Gold";
    if (tenths >= 950) return "Silver";
    if (tenths >= 900) return "Bronze";
    return "none";
}

compliance_result compliance_for(const std::string& mode, int stories_run, int cp8_tenths,
                                 bool no_data) {
    compliance_result out;
    if (no_data) {
        out.level_detail = "no data";
        return out;
    }
    bool cumulative = mode == "cumulative";
    if (stories_run >= 250) {
        out.level = cumulative ? "Scale" : "Stress";
    } else if (stories_run >= 50) {
        out.level = cumulative ? "Cumulative" : "Core";
    } else {
        // Short corpora earn no official level; say what the run was
        // shaped like so the number still reads meaningfully.
        out.level_detail = std::string(cumulative ? "Cumulative" : "Core") + "-equivalent at " +
                           std::to_string(stories_run) + " stories";
    }
    out.tier = tier_for_tenths(cp8_tenths);
    return out;
}

namespace {

std::vector<size_t> story_order(const std::vector<story>& corpus) {
    std::vector<size_t> idx(corpus.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
        return corpus[a].meta.story_id < corpus[b].meta.story_id;
    });
    return idx;
}

void tally_checkpoints(const std::vector<checkpoint_result>& cps,
                       std::array<checkpoint_totals, 10>& totals) {
    for (const checkpoint_result& c : cps) {
        if (c.checkpoint < 1 || c.checkpoint > 10) continue;
        if (c.status == cp_status::not_assessed) continue;
        checkpoint_totals& t = totals[static_cast<size_t>(c.checkpoint - 1)];
        ++t.assessed;
        if (c.status == cp_status::pass) ++t.passed;
    }
}

void aggregate(run_report& r) {
    for (const story_result& sr : r.stories) {
        int passed = 0;
        for (const question_result& q : sr.questions) {
            ++r.questions_total;
            if (q.cp8_pass) {
                ++r.questions_passed;
                ++passed;
            }
            tally_checkpoints(q.cp_results, r.checkpoints);
        }
        for (const store_check& sc : sr.store_checks) tally_checkpoints(sc.cp_results, r.checkpoints);
        if (passed == static_cast<int>(sr.questions.size())) ++r.stories_passed;
        if (sr.errored) r.errors.push_back("story " + sr.story_id + ": " + sr.error);
    }
    r.stories_run = static_cast<int>(r.stories.size());
    r.no_data = r.questions_total == 0;
    r.cp8_rate_tenths = rate_tenths(r.questions_passed, r.questions_total);
    bool any_restarted = false;
    bool all_restarted = !r.stories.empty();
    for (const story_result& sr : r.stories) {
        if (sr.restarted) any_restarted = true;
        if (!sr.errored && !sr.restarted) all_restarted = false;
    }
    r.restart_honored = r.restart_requested && any_restarted && all_restarted;
    r.compliance = compliance_for(r.mode, r.stories_run, r.cp8_rate_tenths, r.no_data);
}

void run_isolated(const sut_factory& make_sut, const std::vector<story>& corpus,
                  const run_options& options, run_report& report) {
    std::vector<size_t> order = story_order(corpus);
    std::vector<story_result> results(order.size());

    auto work_one = [&](size_t slot) {
        const story& st = corpus[order[slot]];
        const std::string& context = st.meta.story_id;
        try {
            std::unique_ptr<sut> s = make_sut(context);
            results[slot] = run_story(*s, st, context, options.restart);
        } catch (const std::exception& e) {
            results[slot] = failed_story(st, context, e.what());
        }
    };

    int jobs = std::clamp(options.jobs, 1, static_cast<int>(std::max<size_t>(order.size(), 1)));
    if (jobs <= 1) {
        for (size_t i = 0; i < order.size(); ++i) work_one(i);
    } else {
        // Stories are independent (separate stores); workers pull the
        // next index and write only their own slot, so the merged
        // report is identical to the serial one.
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(jobs));
        for (int j = 0; j < jobs; ++j) {
            pool.emplace_back([&] {
                for (size_t i = next.fetch_add(1); i < order.size(); i = next.fetch_add(1)) {
                    work_one(i);
                }
            });
        }
        for (std::thread& t : pool) t.join();
    }
    report.stories = std::move(results);
}

void probe_contamination(const std::vector<story_result>& stories,
                         const std::map<std::string, store_snapshot>& snapshots,
                         contamination_report& out) {
    // A predicate held by two or more stories is an opportunity for
    // cross-story confusion; answers whose traces carry one are the
    // probes.
    std::map<std::string, std::set<std::string>> predicate_contexts;
    struct trace_origin {
        std::string context;
        std::string predicate;
    };
    std::map<std::string, trace_origin> origin;
    for (const auto& [context, snap] : snapshots) {
        for (const fact_trace& t : snap.traces) {
            predicate_contexts[t.predicate].insert(context);
            origin[t.trace_id] = {context, t.predicate};
        }
    }
    std::set<std::string> shared;
    for (const auto& [pred, contexts] : predicate_contexts) {
        if (contexts.size() >= 2) shared.insert(pred);
    }
    if (shared.empty()) return;  // disjoint corpus: nothing to probe

    for (const story_result& sr : stories) {
        for (const question_result& q : sr.questions) {
            if (!q.have_traces_used || q.traces_used.empty()) continue;
            bool is_probe = false;
            std::vector<std::string> violations;
            for (const std::string& id : q.traces_used) {
                auto it = origin.find(id);
                if (it == origin.end() || !shared.count(it->second.predicate)) continue;
                is_probe = true;
                if (it->second.context != sr.context) {
                    violations.push_back("story " + sr.story_id + " question " + q.question_id +
                                         ": answer used " + id + " from story " +
                                         it->second.context + " (shared predicate '" +
                                         it->second.predicate + "')");
                }
            }
            if (!is_probe) continue;
            ++out.probes;
            if (!violations.empty()) {
                ++out.failures;
                out.details.insert(out.details.end(), violations.begin(), violations.end());
            }
        }
    }
}

void run_cumulative(const sut_factory& make_sut, const std::vector<story>& corpus,
                    const run_options& options, run_report& report) {
    std::vector<size_t> order = story_order(corpus);
    std::vector<story_result> results(order.size());

    std::unique_ptr<sut> s;
    std::string poisoned;  // once a mandatory call fails, everything after fails closed
    try {
        s = make_sut("shared");
    } catch (const std::exception& e) {
        poisoned = e.what();
    }

    // Every story is ingested before any question is asked, so late
    // questions face the full accumulated store.
    for (size_t i = 0; i < order.size(); ++i) {
        const story& st = corpus[order[i]];
        if (!poisoned.empty()) {
            results[i] = failed_story(st, st.meta.story_id, poisoned);
            continue;
        }
        run_ingest_phase(*s, st, st.meta.story_id, results[i]);
        if (results[i].errored) poisoned = results[i].error;
    }

    bool restarted = false;
    if (poisoned.empty() && options.restart) {
        try {
            restarted = s->restart();
        } catch (const std::exception& e) {
            poisoned = std::string("restart: ") + e.what();
        }
    }

    std::map<std::string, store_snapshot> snapshots;
    for (size_t i = 0; i < order.size(); ++i) {
        const story& st = corpus[order[i]];
        story_result& r = results[i];
        r.restarted = restarted;
        if (!poisoned.empty() && !r.errored) {
            r.errored = true;
            r.error = poisoned;
        }
        if (!r.errored) {
            try {
                s->begin_context(st.meta.story_id);
                if (auto snap = s->storage_snapshot()) snapshots[st.meta.story_id] = *snap;
            } catch (const std::exception& e) {
                poisoned = std::string("begin_context: ") + e.what();
                r.errored = true;
                r.error = poisoned;
            }
        }
        run_question_phase(*s, st, r);
        if (r.errored && poisoned.empty()) poisoned = r.error;
    }

    report.stories = std::move(results);
    probe_contamination(report.stories, snapshots, report.contamination);
}

std::string_view checkpoint_name(int cp) {
    switch (cp) {
        case 1: return "input classification";
        case 2: return "keywords stored";
        case 3: return "queries predicted";
        case 4: return "type tags assigned";
        case 5: return "query classification";
        case 6: return "fact in top-k";
        case 7: return "multi-fact candidates";
        case 8: return "answer keywords";
        case 9: return "temporal judgment";
        case 10: return "emotion judgment";
    }
    return "";
}

nlohmann::ordered_json checkpoints_to_json(const std::vector<checkpoint_result>& cps) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const checkpoint_result& c : cps) {
        nlohmann::ordered_json j;
        j["checkpoint"] = c.checkpoint;
        j["status"] = std::string(to_string(c.status));
        if (!c.detail.empty()) j["detail"] = c.detail;
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace

run_report run_mode(const sut_factory& make_sut, const std::vector<story>& corpus,
                    const run_options& options) {
    run_report report;
    report.mode = options.cumulative ? "cumulative" : "isolated";
    report.restart_requested = options.restart;
    report.corpus_label = options.corpus_label;
    if (options.cumulative) {
        run_cumulative(make_sut, corpus, options, report);
    } else {
        run_isolated(make_sut, corpus, options, report);
    }
    aggregate(report);
    return report;
}

std::string machine_report(const run_report& r) {
    nlohmann::ordered_json j;
    j["atant_report_version"] = 1;
    j["mode"] = r.mode;
    j["restart"] = {{"requested", r.restart_requested}, {"honored", r.restart_honored}};
    j["corpus"] = {{"label", r.corpus_label}, {"stories", r.stories_run}};
    j["stories_run"] = r.stories_run;
    j["stories_passed"] = r.stories_passed;
    j["questions_total"] = r.questions_total;
    j["questions_passed"] = r.questions_passed;
    j["no_data"] = r.no_data;
    j["cp8_rate"] = format_tenths(r.cp8_rate_tenths);
    j["cp8_rate_tenths"] = r.cp8_rate_tenths;

    nlohmann::ordered_json cps = nlohmann::ordered_json::array();
    for (int cp = 1; cp <= 10; ++cp) {
        const checkpoint_totals& t = r.checkpoints[static_cast<size_t>(cp - 1)];
        nlohmann::ordered_json row;
        row["checkpoint"] = cp;
        row["name"] = std::string(checkpoint_name(cp));
        row["assessed"] = t.assessed;
        row["passed"] = t.passed;
        row["rate"] = t.assessed ? format_tenths(rate_tenths(t.passed, t.assessed)) : "-";
        cps.push_back(std::move(row));
    }
    j["checkpoints"] = std::move(cps);

    j["contamination"] = {{"probes", r.contamination.probes},
                          {"failures", r.contamination.failures},
                          {"details", r.contamination.details}};
    {
        nlohmann::ordered_json c;
        c["level"] = r.compliance.level;
        if (!r.compliance.level_detail.empty()) c["level_detail"] = r.compliance.level_detail;
        c["tier"] = r.compliance.tier;
        j["compliance"] = std::move(c);
    }

    nlohmann::ordered_json stories = nlohmann::ordered_json::array();
    for (const story_result& sr : r.stories) {
        nlohmann::ordered_json js;
        js["story_id"] = sr.story_id;
        js["context"] = sr.context;
        js["errored"] = sr.errored;
        if (sr.errored) js["error"] = sr.error;
        js["restarted"] = sr.restarted;
        int passed = 0;
        for (const question_result& q : sr.questions) passed += q.cp8_pass ? 1 : 0;
        js["questions_total"] = sr.questions.size();
        js["questions_passed"] = passed;

        nlohmann::ordered_json checks = nlohmann::ordered_json::array();
        for (const store_check& sc : sr.store_checks) {
            nlohmann::ordered_json jc;
            jc["batch_index"] = sc.batch_index;
            jc["store_index"] = sc.store_index;
            jc["checkpoints"] = checkpoints_to_json(sc.cp_results);
            checks.push_back(std::move(jc));
        }
        js["store_checks"] = std::move(checks);

        nlohmann::ordered_json questions = nlohmann::ordered_json::array();
        for (const question_result& q : sr.questions) {
            nlohmann::ordered_json jq;
            jq["question_id"] = q.question_id;
            jq["cp8_pass"] = q.cp8_pass;
            jq["answer_text"] = q.answer_text;
            if (q.have_traces_used) jq["traces_used"] = q.traces_used;
            jq["checkpoints"] = checkpoints_to_json(q.cp_results);
            questions.push_back(std::move(jq));
        }
        js["questions"] = std::move(questions);
        stories.push_back(std::move(js));
    }
    j["stories"] = std::move(stories);
    j["errors"] = r.errors;
    return j.dump(2) + "\n";
}

std::string human_report(const run_report& r) {
    std::ostringstream out;
    out << "continuity run report\n";
    out << "=====================\n";
    out << "mode:           " << r.mode << ", restart between phases: "
        << (r.restart_requested ? (r.restart_honored ? "yes" : "requested, not honored") : "no")
        << "\n";
    out << "corpus:         " << (r.corpus_label.empty() ? "(unlabeled)" : r.corpus_label) << ", "
        << r.stories_run << " stories\n";
    if (r.no_data) {
        out << "questions:      no data\n";
    } else {
        out << "questions:      " << r.questions_passed << "/" << r.questions_total << " passed ("
            << format_tenths(r.cp8_rate_tenths) << "%)\n";
    }
    out << "stories:        " << r.stories_passed << "/" << r.stories_run << " passed\n";
    out << "compliance:     level " << r.compliance.level;
    if (!r.compliance.level_detail.empty()) out << " (" << r.compliance.level_detail << ")";
    out << ", tier " << r.compliance.tier << "\n";
    out << "contamination:  " << r.contamination.probes << " probes, " << r.contamination.failures
        << " failures\n";

    out << "\n  checkpoint                  assessed  passed  rate\n";
    for (int cp = 1; cp <= 10; ++cp) {
        const checkpoint_totals& t = r.checkpoints[static_cast<size_t>(cp - 1)];
        std::ostringstream label;
        label << "CP" << cp << " " << checkpoint_name(cp);
        out << "  " << std::left << std::setw(28) << label.str() << std::right << std::setw(8)
            << t.assessed << std::setw(8) << t.passed << "  "
            << (t.assessed ? format_tenths(rate_tenths(t.passed, t.assessed)) + "%" : "-") << "\n";
    }

    size_t widest_story = 28;
    for (const story_result& sr : r.stories)
        widest_story = std::max(widest_story, sr.story_id.size() + 2);
    out << "\n  " << std::left << std::setw(static_cast<int>(widest_story)) << "story"
        << "questions  result\n";
    for (const story_result& sr : r.stories) {
        int passed = 0;
        for (const question_result& q : sr.questions) passed += q.cp8_pass ? 1 : 0;
        std::ostringstream count;
        count << passed << "/" << sr.questions.size();
        out << "  " << std::left << std::setw(static_cast<int>(widest_story)) << sr.story_id
            << std::setw(11) << count.str()
            << std::right
            << (sr.errored ? "error" : (passed == static_cast<int>(sr.questions.size()) ? "pass" : "fail"))
            << "\n";
    }

    bool any_failure = false;
    for (const story_result& sr : r.stories) {
        for (const question_result& q : sr.questions) {
            for (const checkpoint_result& c : q.cp_results) {
                if (c.status != cp_status::fail) continue;
                if (!any_failure) {
                    out << "\nfailures:\n";
                    any_failure = true;
                }
                out << "  " << sr.story_id << " " << q.question_id << " CP" << c.checkpoint;
                if (!c.detail.empty()) out << ": " << c.detail;
                out << "\n";
            }
        }
        for (const store_check& sc : sr.store_checks) {
            for (const checkpoint_result& c : sc.cp_results) {
                if (c.status != cp_status::fail) continue;
                if (!any_failure) {
                    out << "\nfailures:\n";
                    any_failure = true;
                }
                out << "  " << sr.story_id << " batch " << sc.batch_index << " store "
                    << sc.store_index << " CP" << c.checkpoint;
                if (!c.detail.empty()) out << ": " << c.detail;
                out << "\n";
            }
        }
    }
    if (r.contamination.failures > 0) {
        out << "\ncontamination failures:\n";
        for (const std::string& d : r.contamination.details) out << "  " << d << "\n";
    }
    if (!r.errors.empty()) {
        out << "\nerrors:\n";
        for (const std::string& e : r.errors) out << "  " << e << "\n";
    }
    return out.str();
}

}  // namespace atant

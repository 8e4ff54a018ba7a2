#include "core/read_path.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "core/error.hpp"
#include "core/text.hpp"

namespace atant {

namespace {

bool personal_token(std::string_view t) {
    return t == "i" || t == "me" || t == "my" || t == "we" || t == "our" || t == "us" ||
           t == "mine" || t == "myself" || t == "she" || t == "he" || t == "they" || t == "it" ||
           t == "her" || t == "him" || t == "his" || t == "hers" || t == "them" || t == "their";
}

bool has_pair(const std::vector<std::string>& toks, std::string_view a, std::string_view b) {
    for (size_t i = 0; i + 1 < toks.size(); ++i)
        if (toks[i] == a && toks[i + 1] == b) return true;
    return false;
}

bool has_token(const std::vector<std::string>& toks, std::string_view t) {
    return std::find(toks.begin(), toks.end(), t) != toks.end();
}

// Everything searchable about one trace, as folded tokens.
std::set<std::string> trace_tokens(const fact_trace& t) {
    std::set<std::string> out;
    for (const std::string& s : text::tokenize(t.subject)) out.insert(s);
    for (const std::string& s : text::tokenize(t.object)) out.insert(s);
    std::string pred = t.predicate;
    for (char& c : pred)
        if (c == '_') c = ' ';
    for (const std::string& s : text::tokenize(pred)) out.insert(s);
    // Queries use dictionary verb forms ("feel", "live"); index the
    // predicate's render forms so they match the canonical name.
    predicate_render r = render_info(t.predicate);
    for (const std::string& s : text::tokenize(r.speaker)) out.insert(s);
    if (!r.q_verb.empty()) out.insert(r.q_verb);
    for (const std::string& s : text::content_tokens(t.source_text)) out.insert(s);
    return out;
}

// Follow the supersession chain from `id` to its live end.
const fact_trace* active_of(const trace_store& store, const std::string& id) {
    const fact_trace* t = store.find(id);
    while (t && t->status == trace_status::superseded && t->superseded_by) {
        const fact_trace* next = store.find(*t->superseded_by);
        if (!next) break;
        t = next;
    }
    return t;
}

bool emotion_bearing(const fact_trace& t) {
    return t.predicate == "feels" ||
           std::find(t.type_tags.begin(), t.type_tags.end(), tag::emotion) != t.type_tags.end();
}

std::vector<std::string> ordered_ids(const trace_store& store, const std::set<std::string>& ids) {
    std::vector<const fact_trace*> traces;
    for (const std::string& id : ids)
        if (const fact_trace* t = store.find(id)) traces.push_back(t);
    std::sort(traces.begin(), traces.end(), [](const fact_trace* a, const fact_trace* b) {
        if (a->stored_at.instant != b->stored_at.instant)
            return a->stored_at.instant < b->stored_at.instant;
        return a->trace_id < b->trace_id;
    });
    std::vector<std::string> out;
    out.reserve(traces.size());
    for (const fact_trace* t : traces) out.push_back(t->trace_id);
    return out;
}

std::string capitalize(std::string s) {
    if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

constexpr std::string_view kWeekdayNames[7] = {"sunday",   "monday", "tuesday", "wednesday",
                                               "thursday", "friday", "saturday"};

// " — thursday 2026-03-12 15:00 (upcoming)"; the time of day appears
// only when nonzero, the direction word compares calendar days in the
// asker's zone.
std::string time_suffix(const sim_time& resolved, const sim_time& ask_at) {
    using namespace std::chrono;
    sim_time local{resolved.instant, ask_at.utc_offset};
    year_month_day date = local.local_date();
    unsigned wd = local.local_weekday().c_encoding();

    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    std::string out = " — ";
    out += kWeekdayNames[wd];
    out += ' ';
    out += buf;

    seconds tod = (local.instant + local.utc_offset) - sys_days{date};
    if (tod != seconds{0}) {
        int h = static_cast<int>(duration_cast<hours>(tod).count());
        int m = static_cast<int>(duration_cast<minutes>(tod % hours{1}).count());
        std::snprintf(buf, sizeof buf, " %02d:%02d", h, m);
        out += buf;
    }

    sys_days resolved_day{date};
    sys_days ask_day{ask_at.local_date()};
    if (resolved_day == ask_day)
        out += " (today)";
    else if (resolved_day > ask_day)
        out += " (upcoming)";
    else
        out += " (in the past)";
    return out;
}

std::string render_trace(const fact_trace& t, const sim_time& ask_at) {
    const bool speaker = t.subject == "speaker";
    std::string line;

    if (t.object == "cancelled") {
        line = speaker ? std::string("That was cancelled.")
                       : "Your " + t.subject + " was cancelled.";
        return t.status == trace_status::superseded ? "Previously: " + line : line;
    }

    predicate_render r = render_info(t.predicate);
    std::string vp = speaker ? r.speaker : r.third;
    if (t.status == trace_status::superseded) {
        // Past-shift the copular lead so history reads as history.
        if (vp.rfind("is ", 0) == 0)
            vp = "was " + vp.substr(3);
        else if (vp.rfind("are ", 0) == 0)
            vp = "were " + vp.substr(4);
        else if (vp == "is")
            vp = "was";
        else if (vp == "are")
            vp = "were";
    }

    std::string head = speaker ? "You" : "Your " + t.subject;
    line = head + " " + vp + " " + t.object;
    if (t.resolved_time) line += time_suffix(*t.resolved_time, ask_at);
    line += ".";
    if (t.status == trace_status::superseded) line = "Previously: " + line;
    return capitalize(std::move(line));
}

}  // namespace

std::string_view to_string(query_label l) {
    switch (l) {
        case query_label::fact_lookup: return "fact_lookup";
        case query_label::current_state: return "current_state";
        case query_label::temporal: return "temporal";
        case query_label::reconstruction: return "reconstruction";
        case query_label::emotional: return "emotional";
        case query_label::general_knowledge: return "general_knowledge";
    }
    return "fact_lookup";
}

std::optional<query_label> query_label_from(std::string_view s) {
    if (s == "fact_lookup") return query_label::fact_lookup;
    if (s == "current_state") return query_label::current_state;
    if (s == "temporal") return query_label::temporal;
    if (s == "reconstruction") return query_label::reconstruction;
    if (s == "emotional") return query_label::emotional;
    if (s == "general_knowledge") return query_label::general_knowledge;
    return std::nullopt;
}

std::string_view to_string(match_basis b) {
    switch (b) {
        case match_basis::predicted_query: return "predicted_query";
        case match_basis::slot_match: return "slot_match";
        case match_basis::keyword_overlap: return "keyword_overlap";
    }
    return "keyword_overlap";
}

std::optional<match_basis> match_basis_from(std::string_view s) {
    if (s == "predicted_query") return match_basis::predicted_query;
    if (s == "slot_match") return match_basis::slot_match;
    if (s == "keyword_overlap") return match_basis::keyword_overlap;
    return std::nullopt;
}

query_classification classify_query(std::string_view query_text) {
    std::vector<std::string> toks = text::tokenize(query_text);
    if (toks.empty()) fail(errc::invalid_argument, "empty query");

    bool personal = std::any_of(toks.begin(), toks.end(),
                                [](const std::string& t) { return personal_token(t); });
    if (!personal) return {query_label::general_knowledge};

    if (has_pair(toks, "tell", "me") || has_pair(toks, "what", "happened") ||
        has_pair(toks, "remind", "me"))
        return {query_label::reconstruction};
    if (has_token(toks, "feel") || has_token(toks, "feels") || has_token(toks, "felt") ||
        has_token(toks, "feeling"))
        return {query_label::emotional};
    if (has_token(toks, "when") || has_pair(toks, "what", "day") ||
        has_pair(toks, "what", "time") || has_pair(toks, "what", "date"))
        return {query_label::temporal};
    if (has_token(toks, "still") || has_token(toks, "now") || has_token(toks, "currently") ||
        has_token(toks, "anymore") || has_pair(toks, "these", "days"))
        return {query_label::current_state};
    return {query_label::fact_lookup};
}

candidate_set match_structural(std::string_view query_text, const std::string& context,
                               const trace_store& store, int k, bool cross_context) {
    candidate_set out;
    out.k = k;
    std::string qnorm = text::normalize_query(query_text);
    std::vector<std::string> qcontent = text::content_tokens(query_text);
    std::set<std::string> qset(qcontent.begin(), qcontent.end());
    std::vector<std::string> qall = text::tokenize(query_text);
    std::set<std::string> qall_set(qall.begin(), qall.end());
    const long long den = std::max<long long>(1, static_cast<long long>(qset.size()));

    std::vector<const fact_trace*> pool;
    if (cross_context) {
        for (const std::string& ctx : store.contexts())
            for (const fact_trace* t : store.context_traces(ctx)) pool.push_back(t);
    } else {
        pool = store.context_traces(context);
    }

    for (const fact_trace* t : pool) {
        long long matched = 0;
        std::set<std::string> ttoks = trace_tokens(*t);
        for (const std::string& q : qset)
            if (ttoks.count(q)) ++matched;

        bool exact = std::find(t->predicted_queries.begin(), t->predicted_queries.end(), qnorm) !=
                     t->predicted_queries.end();
        bool slot = false;
        if (t->subject != "speaker") {
            std::vector<std::string> stoks = text::tokenize(t->subject);
            slot = !stoks.empty() &&
                   std::all_of(stoks.begin(), stoks.end(),
                               [&qall_set](const std::string& s) { return qall_set.count(s) > 0; });
        }

        long long tier;
        match_basis basis;
        if (exact) {
            tier = 3;
            basis = match_basis::predicted_query;
        } else if (slot) {
            tier = 2;
            basis = match_basis::slot_match;
        } else if (matched > 0) {
            tier = 1;
            basis = match_basis::keyword_overlap;
        } else {
            continue;
        }
        out.candidates.push_back({t->trace_id, tier * den + matched, den, basis});
    }

    std::sort(out.candidates.begin(), out.candidates.end(),
              [](const candidate& a, const candidate& b) {
                  if (a.score_num != b.score_num) return a.score_num > b.score_num;
                  return a.trace_id < b.trace_id;
              });
    if (out.candidates.size() > static_cast<size_t>(k)) out.candidates.resize(k);
    return out;
}

std::vector<std::string> converge(const trace_store& store, const candidate_set& candidates,
                                  const query_classification& cls) {
    if (candidates.candidates.empty()) return {};
    const fact_trace* top = store.find(candidates.candidates.front().trace_id);
    if (!top) return {};

    std::set<std::string> ids;
    switch (cls.label) {
        case query_label::fact_lookup:
        case query_label::current_state:
        case query_label::temporal: {
            if (const fact_trace* a = active_of(store, top->trace_id)) ids.insert(a->trace_id);
            break;
        }
        case query_label::emotional: {
            // The best-scoring emotion-bearing candidate sets the topic
            // and the bar: a specific question ("about the interview")
            // outranks other feelings, while a general "how do I feel"
            // ties every feeling and reports them all.
            const candidate* anchor = nullptr;
            for (const candidate& c : candidates.candidates) {
                const fact_trace* t = store.find(c.trace_id);
                if (t && emotion_bearing(*t)) {
                    anchor = &c;
                    break;
                }
            }
            if (!anchor) {
                if (const fact_trace* a = active_of(store, top->trace_id)) ids.insert(a->trace_id);
                break;
            }
            const fact_trace* anchor_trace = store.find(anchor->trace_id);
            for (const candidate& c : candidates.candidates) {
                if (c.score_num != anchor->score_num) continue;
                const fact_trace* t = store.find(c.trace_id);
                if (!t || !emotion_bearing(*t) || t->subject != anchor_trace->subject) continue;
                if (const fact_trace* a = active_of(store, t->trace_id)) ids.insert(a->trace_id);
            }
            break;
        }
        case query_label::reconstruction: {
            for (const candidate& c : candidates.candidates) {
                const fact_trace* t = store.find(c.trace_id);
                if (t && t->subject == top->subject) ids.insert(t->trace_id);
            }
            for (const fact_trace* t : store.context_traces(top->context)) {
                if (t->subject != top->subject) continue;
                if (emotion_bearing(*t) || t->status == trace_status::superseded)
                    ids.insert(t->trace_id);
            }
            break;
        }
        case query_label::general_knowledge:
            return {};
    }
    return ordered_ids(store, ids);
}

answer assemble_answer(const trace_store& store, const std::vector<std::string>& trace_ids,
                       const query_classification& cls, const sim_time& ask_at) {
    answer out;
    if (cls.label == query_label::general_knowledge || trace_ids.empty()) {
        out.text = std::string(kNoFactMarker);
        out.refused = true;
        return out;
    }
    for (const std::string& id : trace_ids) {
        const fact_trace* t = store.find(id);
        if (!t) continue;
        if (!out.text.empty()) out.text += ' ';
        out.text += render_trace(*t, ask_at);
        out.traces_used.push_back(id);
    }
    if (out.traces_used.empty()) {
        out.text = std::string(kNoFactMarker);
        out.refused = true;
    }
    return out;
}

temporal_judgment judge_temporal(const trace_store& store,
                                 const std::vector<std::string>& trace_ids,
                                 const sim_time& ask_at) {
    using namespace std::chrono;
    for (const std::string& id : trace_ids) {
        const fact_trace* t = store.find(id);
        if (!t || !t->resolved_time) continue;
        temporal_judgment j;
        j.kind = t->resolved_kind != temporal_kind::none ? t->resolved_kind
                                                         : temporal_kind::absolute;
        sim_time local{t->resolved_time->instant, ask_at.utc_offset};
        sys_days resolved_day{local.local_date()};
        sys_days ask_day{ask_at.local_date()};
        if (resolved_day == ask_day)
            j.direction = temporal_direction::present;
        else if (resolved_day > ask_day)
            j.direction = temporal_direction::future;
        else
            j.direction = temporal_direction::past;
        return j;
    }
    return {};
}

std::string_view to_string(emotion_direction d) {
    switch (d) {
        case emotion_direction::positive: return "positive";
        case emotion_direction::negative: return "negative";
        case emotion_direction::neutral: return "neutral";
    }
    return "neutral";
}

std::optional<emotion_direction> emotion_direction_from(std::string_view s) {
    if (s == "positive") return emotion_direction::positive;
    if (s == "negative") return emotion_direction::negative;
    if (s == "neutral") return emotion_direction::neutral;
    return std::nullopt;
}

emotion_judgment judge_emotion(const trace_store& store,
                               const std::vector<std::string>& trace_ids,
                               std::string_view query_text, const valence_lexicon& affect) {
    std::vector<std::string> toks = text::tokenize(query_text);
    for (const std::string& id : trace_ids) {
        const fact_trace* t = store.find(id);
        if (!t) continue;
        std::vector<std::string> more = text::tokenize(t->source_text);
        toks.insert(toks.end(), more.begin(), more.end());
    }
    valence_lexicon::score_result s = affect.score(toks);
    emotion_judgment j;
    j.detected = s.hits > 0;
    if (s.sum > 0)
        j.direction = emotion_direction::positive;
    else if (s.sum < 0)
        j.direction = emotion_direction::negative;
    return j;
}

}  // namespace atant

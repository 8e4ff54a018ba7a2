#include "core/write_path.hpp"

#include <algorithm>
#include <set>

#include "core/error.hpp"
#include "core/text.hpp"

namespace atant {

namespace {

using token_list = std::vector<std::string>;

bool is_copula(std::string_view t) {
    return t == "is" || t == "are" || t == "was" || t == "were" || t == "am" || t == "be" ||
           t == "been";
}

bool is_feel_verb(std::string_view t) {
    return t == "feel" || t == "feels" || t == "felt" || t == "feeling";
}

// Hosts that make a bare clitic token ("s", "m", "re") a contracted
// copula rather than a possessive: "it s" = "it is", "sister s" is not.
bool clitic_host(std::string_view t) {
    return t == "it" || t == "she" || t == "he" || t == "i" || t == "we" || t == "they" ||
           t == "that" || t == "there" || t == "you" || t == "what" || t == "who";
}

bool is_clitic_copula(const token_list& toks, size_t i) {
    if (i == 0) return false;
    const std::string& t = toks[i];
    if (t != "s" && t != "m" && t != "re") return false;
    return clitic_host(toks[i - 1]);
}

bool third_person_pronoun(std::string_view t) {
    return t == "she" || t == "he" || t == "they" || t == "it";
}

bool speaker_pronoun(std::string_view t) {
    return t == "i" || t == "we" || t == "me" || t == "us";
}

bool personal_token(std::string_view t) {
    return speaker_pronoun(t) || third_person_pronoun(t) || t == "my" || t == "our" ||
           t == "mine" || t == "myself" || t == "her" || t == "him" || t == "his" ||
           t == "hers" || t == "them" || t == "their" || t == "let";
}

bool interrogative_lead(std::string_view t) {
    return t == "what" || t == "when" || t == "where" || t == "who" || t == "whom" ||
           t == "whose" || t == "why" || t == "how" || t == "did" || t == "do" || t == "does" ||
           t == "is" || t == "are" || t == "was" || t == "were" || t == "can" || t == "could" ||
           t == "will" || t == "would" || t == "should" || t == "tell" || t == "remind";
}

// Sentence-initial filler stripped before pattern matching. Kept small:
// anything here can never start a subject phrase.
bool discourse_marker(std::string_view t) {
    return t == "actually" || t == "anyway" || t == "also" || t == "oh" || t == "well" ||
           t == "so" || t == "hey" || t == "yes" || t == "yeah" || t == "hmm" || t == "ok" ||
           t == "okay" || t == "update" || t == "correction" || t == "sorry" || t == "um" ||
           t == "uh" || t == "and" || t == "but" || t == "then" || t == "plus" || t == "now";
}

bool intensifier(std::string_view t) {
    return t == "so" || t == "really" || t == "very" || t == "quite" || t == "pretty" ||
           t == "just" || t == "super" || t == "a" || t == "bit" || t == "little" ||
           t == "honestly" || t == "still" || t == "both" || t == "all";
}

bool article(std::string_view t) { return t == "a" || t == "an" || t == "the"; }

std::string join_range(const token_list& toks, size_t from, size_t to) {
    std::string out;
    for (size_t i = from; i < to; ++i) {
        if (!out.empty()) out += ' ';
        out += toks[i];
    }
    return out;
}

// Leftmost-longest predicate surface in the token run.
std::optional<std::pair<size_t, size_t>> find_surface(const token_list& toks,
                                                      const predicate_lexicon& preds,
                                                      size_t from = 0) {
    size_t maxlen = preds.max_surface_tokens();
    for (size_t pos = from; pos < toks.size(); ++pos) {
        size_t cap = std::min(maxlen, toks.size() - pos);
        for (size_t len = cap; len >= 1; --len) {
            if (preds.has_surface(join_range(toks, pos, pos + len))) return {{pos, len}};
        }
    }
    return std::nullopt;
}

// A token run "carries a verb" if it has a predicate surface, a copula,
// a feel verb, or an affect word ("i m thrilled" counts through the
// affect hit). Gates clause splitting so noun coordinations survive.
bool verbish(const token_list& toks, const predicate_lexicon& preds,
             const valence_lexicon& affect) {
    for (size_t i = 0; i < toks.size(); ++i) {
        if (is_copula(toks[i]) || is_feel_verb(toks[i]) || is_clitic_copula(toks, i)) return true;
        if (affect.has(toks[i])) return true;
    }
    return find_surface(toks, preds).has_value();
}

std::vector<std::string> split_raw(std::string_view s, std::string_view seps) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (seps.find(c) != std::string_view::npos) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

// Utterance -> clauses (token lists). Sentences split on ./!/?/;.
// Comma segments merge until both the accumulated part and the next
// segment carry verbs; the same rule splits at "and"/"but" tokens.
std::vector<token_list> clause_split(std::string_view utterance, const predicate_lexicon& preds,
                                     const valence_lexicon& affect) {
    std::vector<token_list> clauses;
    for (const std::string& sentence : split_raw(utterance, ".!?;")) {
        std::vector<token_list> merged;
        for (const std::string& seg : split_raw(sentence, ",")) {
            token_list toks = text::tokenize(seg);
            if (toks.empty()) continue;
            if (!merged.empty() &&
                !(verbish(merged.back(), preds, affect) && verbish(toks, preds, affect))) {
                merged.back().insert(merged.back().end(), toks.begin(), toks.end());
            } else {
                merged.push_back(std::move(toks));
            }
        }
        for (const token_list& toks : merged) {
            size_t start = 0;
            for (size_t i = 0; i < toks.size(); ++i) {
                if (toks[i] != "and" && toks[i] != "but") continue;
                token_list left(toks.begin() + static_cast<long>(start),
                                toks.begin() + static_cast<long>(i));
                token_list rest(toks.begin() + static_cast<long>(i + 1), toks.end());
                if (!left.empty() && !rest.empty() && verbish(left, preds, affect) &&
                    verbish(rest, preds, affect)) {
                    clauses.push_back(std::move(left));
                    start = i + 1;
                }
            }
            clauses.emplace_back(toks.begin() + static_cast<long>(start), toks.end());
        }
    }
    std::erase_if(clauses, [](const token_list& c) { return c.empty(); });
    return clauses;
}

void drop_pair(token_list& toks, std::string_view a, std::string_view b) {
    for (size_t i = 0; i + 1 < toks.size(); ++i) {
        if (toks[i] == a && toks[i + 1] == b) {
            toks.erase(toks.begin() + static_cast<long>(i), toks.begin() + static_cast<long>(i + 2));
            return;
        }
    }
}

void strip_discourse(token_list& toks) {
    drop_pair(toks, "no", "wait");
    drop_pair(toks, "scratch", "that");
    while (!toks.empty() && discourse_marker(toks.front())) toks.erase(toks.begin());
}

bool negation_markers(const token_list& toks) {
    for (size_t i = 0; i < toks.size(); ++i) {
        const std::string& t = toks[i];
        if (t == "anymore" || t == "cancelled" || t == "canceled") return true;
        if (i + 1 < toks.size()) {
            const std::string& u = toks[i + 1];
            if ((t == "no" && u == "longer") || (t == "any" && u == "more") ||
                (t == "called" && u == "off") || (t == "fell" && u == "through") ||
                (t == "backed" && u == "out"))
                return true;
        }
    }
    return false;
}

bool negation_word(std::string_view t) {
    return t == "anymore" || t == "cancelled" || t == "canceled" || t == "cancel" || t == "no" ||
           t == "longer" || t == "any" || t == "more" || t == "called" || t == "off" ||
           t == "fell" || t == "through" || t == "backed" || t == "out" || t == "not" ||
           t == "going" || t == "t" || t == "won" || t == "don" || t == "isn" || t == "aren" ||
           t == "wasn" || t == "got" || t == "was" || t == "were" || t == "is" || t == "are";
}

// Case-insensitive token-overlap search over prior traces, newest
// first. `groups` are searched in order (locals, then window, then
// full history).
const fact_trace* find_anchor(const std::set<std::string>& anchor_tokens,
                              std::initializer_list<std::span<const fact_trace* const>> groups,
                              bool need_resolved_time) {
    if (anchor_tokens.empty()) return nullptr;
    for (auto group : groups) {
        for (auto it = group.rbegin(); it != group.rend(); ++it) {
            const fact_trace* t = *it;
            if (need_resolved_time && !t->resolved_time) continue;
            token_list hay = text::tokenize(t->subject);
            token_list obj = text::tokenize(t->object);
            hay.insert(hay.end(), obj.begin(), obj.end());
            for (const std::string& h : hay) {
                if (anchor_tokens.count(h)) return t;
            }
        }
    }
    return nullptr;
}

bool plural_person(std::string_view t) {
    return t == "parents" || t == "grandparents" || t == "twins" || t == "kids" ||
           t == "children" || t == "neighbors" || t == "friends" || t == "colleagues" ||
           t == "coworkers" || t == "teammates" || t == "girls" || t == "boys";
}

bool pronoun_compatible(std::string_view pronoun, const fact_trace& t) {
    token_list subj = text::tokenize(t.subject);
    bool person = false, female = false, male = false, plural = false;
    for (const std::string& s : subj) {
        if (gazetteer::female_person(s)) female = person = true;
        if (gazetteer::male_person(s)) male = person = true;
        if (gazetteer::person_term(s) || gazetteer::first_name(s)) person = true;
        if (plural_person(s)) plural = person = true;
    }
    if (t.subject == "speaker") person = true;
    if (pronoun == "she") return female || (person && !male && !plural);
    if (pronoun == "he") return male || (person && !female && !plural);
    if (pronoun == "they") return plural;
    if (pronoun == "it") return !person;
    return false;
}

std::optional<std::string> resolve_pronoun(std::string_view pronoun,
                                           std::span<const fact_trace* const> locals,
                                           std::span<const fact_trace* const> window) {
    for (auto group : {locals, window}) {
        for (auto it = group.rbegin(); it != group.rend(); ++it) {
            if (pronoun_compatible(pronoun, **it)) return (*it)->subject;
        }
    }
    return std::nullopt;
}

// Subject phrase -> normalized subjects. Coordination yields one per
// conjunct; first-person pronouns become the canonical "speaker";
// unresolved third-person pronouns drop out.
std::vector<std::string> resolve_subjects(const token_list& raw,
                                          std::span<const fact_trace* const> locals,
                                          std::span<const fact_trace* const> window) {
    std::vector<token_list> conjuncts;
    token_list cur;
    for (const std::string& t : raw) {
        if (t == "and") {
            if (!cur.empty()) conjuncts.push_back(std::move(cur));
            cur.clear();
        } else if (!article(t) || !cur.empty()) {
            cur.push_back(t);
        }
    }
    if (!cur.empty()) conjuncts.push_back(std::move(cur));

    std::vector<std::string> out;
    auto add = [&out](std::string s) {
        if (!s.empty() && std::find(out.begin(), out.end(), s) == out.end())
            out.push_back(std::move(s));
    };
    for (token_list& c : conjuncts) {
        while (!c.empty() && intensifier(c.front()) && c.size() > 1) c.erase(c.begin());
        if (c.size() == 1 && speaker_pronoun(c[0])) {
            add("speaker");
        } else if (c.size() == 1 && third_person_pronoun(c[0])) {
            if (auto r = resolve_pronoun(c[0], locals, window)) add(*r);
        } else {
            add(text::normalize_slot(text::join(c)));
        }
    }
    if (out.empty() && conjuncts.empty()) out.push_back("speaker");  // implied-subject clause
    return out;
}

struct carve_result {
    token_list remaining;
    std::string phrase;  // the carved temporal expression, folded
    temporal_resolution res;
};

// Peel the longest resolvable temporal suffix off an object phrase.
// Plain suffixes must be all temporal-vocabulary tokens; sequence
// suffixes start at after/before (optionally led by right/just) so the
// anchor noun is allowed through.
carve_result carve_temporal(const token_list& toks, const sim_time& ref) {
    carve_result out;
    out.remaining = toks;
    for (size_t j = 0; j < toks.size(); ++j) {
        size_t start = j;
        if ((toks[j] == "right" || toks[j] == "just") && j + 1 < toks.size() &&
            (toks[j + 1] == "after" || toks[j + 1] == "before" || toks[j + 1] == "following"))
            ++j;
        bool sequence_head =
            toks[j] == "after" || toks[j] == "before" || toks[j] == "following";
        if (!sequence_head) {
            bool all_vocab = true;
            for (size_t i = start; i < toks.size(); ++i)
                if (!temporal_vocab_token(toks[i])) {
                    all_vocab = false;
                    break;
                }
            if (!all_vocab) {
                j = start;
                continue;
            }
        }
        std::string phrase = join_range(toks, start, toks.size());
        temporal_resolution r = resolve_temporal(phrase, ref);
        if (r.kind != temporal_kind::none) {
            out.remaining.assign(toks.begin(), toks.begin() + static_cast<long>(start));
            while (!out.remaining.empty() &&
                   (out.remaining.back() == "on" || out.remaining.back() == "for" ||
                    out.remaining.back() == "at" || out.remaining.back() == "until" ||
                    out.remaining.back() == "to"))
                out.remaining.pop_back();
            out.phrase = phrase;
            out.res = r;
            return out;
        }
        j = start;
    }
    return out;
}

std::string object_text(const token_list& toks) {
    size_t from = 0;
    while (from < toks.size() && article(toks[from]) && from + 1 < toks.size()) ++from;
    return join_range(toks, from, toks.size());
}

// Provisional object tags, enough to disambiguate tag-conditioned
// predicate rules before the trace exists.
std::vector<std::string> object_tags(const token_list& toks, const valence_lexicon& affect,
                                     bool has_time) {
    std::set<std::string> tags;
    if (has_time) tags.emplace(tag::datetime);
    for (const std::string& t : toks) {
        if (gazetteer::place(t)) tags.emplace(tag::place);
        if (gazetteer::person_term(t) || gazetteer::first_name(t)) tags.emplace(tag::person);
        if (gazetteer::event_term(t)) tags.emplace(tag::event);
        if (gazetteer::activity_term(t)) tags.emplace(tag::activity);
        if (gazetteer::organization_term(t)) tags.emplace(tag::organization);
        if (affect.has(t)) tags.emplace(tag::emotion);
    }
    return {tags.begin(), tags.end()};
}

bool has_event_noun(const token_list& toks) {
    return std::any_of(toks.begin(), toks.end(),
                       [](const std::string& t) { return gazetteer::event_term(t); });
}

struct clause_parts {
    std::vector<std::string> subjects;
    std::string predicate;
    std::string object;
    temporal_resolution time;
};

// Copula or feel-verb position for the feel pattern and copular
// fallback; full forms win over clitics at the same scan.
std::optional<size_t> find_link_verb(const token_list& toks) {
    for (size_t i = 0; i < toks.size(); ++i)
        if (is_copula(toks[i]) || is_feel_verb(toks[i]) || is_clitic_copula(toks, i)) return i;
    return std::nullopt;
}

std::optional<clause_parts> try_feel(const token_list& toks, const valence_lexicon& affect,
                                     std::span<const fact_trace* const> locals,
                                     std::span<const fact_trace* const> window) {
    auto pos = find_link_verb(toks);
    if (!pos || *pos + 1 >= toks.size()) return std::nullopt;
    token_list complement(toks.begin() + static_cast<long>(*pos + 1), toks.end());
    bool feel = is_feel_verb(toks[*pos]);
    if (!feel) {
        size_t i = 0;
        while (i < complement.size() && intensifier(complement[i])) ++i;
        if (i >= complement.size() || !affect.has(complement[i])) return std::nullopt;
    }
    if (feel && !complement.empty() && complement.front() == "like") complement.erase(complement.begin());
    token_list subj_raw(toks.begin(), toks.begin() + static_cast<long>(*pos));
    if (!subj_raw.empty() && (subj_raw.back() == "s" || subj_raw.back() == "m" ||
                              subj_raw.back() == "re"))
        subj_raw.pop_back();

    // "nervous about it" keeps the referent: swap resolvable pronouns
    // in the complement for their antecedent, so the stored feeling
    // names what it is about.
    token_list expanded;
    for (const std::string& tok : complement) {
        std::string as_subject = tok == "him"   ? "he"
                                 : tok == "her" ? "she"
                                 : tok == "them" ? "they"
                                                 : tok;
        if (third_person_pronoun(as_subject)) {
            if (auto r = resolve_pronoun(as_subject, locals, window)) {
                for (const std::string& part : text::tokenize(*r)) expanded.push_back(part);
                continue;
            }
        }
        expanded.push_back(tok);
    }

    clause_parts p;
    p.subjects = resolve_subjects(subj_raw, locals, window);
    p.predicate = "feels";
    p.object = text::join(expanded);
    if (p.subjects.empty() || p.object.empty()) return std::nullopt;
    return p;
}

std::optional<clause_parts> try_svo(const token_list& toks, const sim_time& batch_time,
                                    const predicate_lexicon& preds, const valence_lexicon& affect,
                                    std::span<const fact_trace* const> locals,
                                    std::span<const fact_trace* const> window) {
    auto hit = find_surface(toks, preds);
    if (!hit) return std::nullopt;
    auto [pos, len] = *hit;
    std::string surface = join_range(toks, pos, pos + len);

    token_list subj_raw(toks.begin(), toks.begin() + static_cast<long>(pos));
    while (!subj_raw.empty() &&
           (is_copula(subj_raw.back()) || subj_raw.back() == "s" || subj_raw.back() == "m" ||
            subj_raw.back() == "re" || subj_raw.back() == "just" || subj_raw.back() == "finally" ||
            subj_raw.back() == "recently" || subj_raw.back() == "officially"))
        subj_raw.pop_back();

    token_list obj_raw(toks.begin() + static_cast<long>(pos + len), toks.end());
    while (!obj_raw.empty() && (obj_raw.front() == "him" || obj_raw.front() == "her" ||
                                obj_raw.front() == "it" || obj_raw.front() == "them"))
        obj_raw.erase(obj_raw.begin());

    carve_result carved = carve_temporal(obj_raw, batch_time);
    bool timed = carved.res.kind != temporal_kind::none;

    clause_parts p;
    p.subjects = resolve_subjects(subj_raw, locals, window);
    p.time = carved.res;
    std::vector<std::string> otags =
        object_tags(timed ? carved.remaining : obj_raw, affect, timed);
    p.predicate = preds.lookup(surface, otags);

    if (timed && (p.predicate == "has" || p.predicate == "got") &&
        has_event_noun(carved.remaining)) {
        // "I have a dentist appointment next Tuesday" is about the
        // appointment, not the having.
        p.subjects = {text::normalize_slot(object_text(carved.remaining))};
        p.predicate = "scheduled_for";
        p.object = carved.phrase;
    } else if (timed && carved.remaining.empty()) {
        p.object = carved.phrase;
    } else {
        p.object = object_text(timed ? carved.remaining : obj_raw);
    }
    if (p.subjects.empty() || p.object.empty()) return std::nullopt;
    return p;
}

std::optional<clause_parts> try_copular(const token_list& toks, const sim_time& batch_time,
                                        std::span<const fact_trace* const> locals,
                                        std::span<const fact_trace* const> window) {
    auto pos = find_link_verb(toks);
    if (!pos || *pos == 0 || *pos + 1 >= toks.size()) return std::nullopt;
    token_list subj_raw(toks.begin(), toks.begin() + static_cast<long>(*pos));
    if (!subj_raw.empty() &&
        (subj_raw.back() == "s" || subj_raw.back() == "m" || subj_raw.back() == "re"))
        subj_raw.pop_back();
    token_list complement(toks.begin() + static_cast<long>(*pos + 1), toks.end());
    while (!complement.empty() && intensifier(complement.front()) && complement.size() > 1)
        complement.erase(complement.begin());

    clause_parts p;
    p.subjects = resolve_subjects(subj_raw, locals, window);
    if (p.subjects.empty()) return std::nullopt;

    temporal_resolution full = resolve_temporal(text::join(complement), batch_time);
    bool event_subject = has_event_noun(subj_raw);
    if (full.kind != temporal_kind::none &&
        (full.kind == temporal_kind::sequence ||
         std::all_of(complement.begin(), complement.end(), temporal_vocab_token))) {
        p.predicate = event_subject ? "scheduled_for" : "is";
        p.object = text::join(complement);
        p.time = full;
        return p;
    }
    carve_result carved = carve_temporal(complement, batch_time);
    p.predicate = "is";
    p.time = carved.res;
    p.object = object_text(carved.res.kind != temporal_kind::none ? carved.remaining : complement);
    if (p.object.empty() && carved.res.kind != temporal_kind::none) {
        p.predicate = event_subject ? "scheduled_for" : "is";
        p.object = carved.phrase;
    }
    if (p.object.empty()) return std::nullopt;
    return p;
}

// Clause kinds for classification; mirrors the extraction patterns
// without touching antecedents.
enum class clause_kind { none, affect, fact };

clause_kind classify_clause(const token_list& toks, const predicate_lexicon& preds,
                            const valence_lexicon& affect) {
    std::span<const fact_trace* const> none{};
    token_list t = toks;
    strip_discourse(t);
    if (t.empty()) return clause_kind::none;
    if (try_feel(t, affect, none, none)) return clause_kind::affect;
    if (negation_markers(t) || find_surface(t, preds)) return clause_kind::fact;
    if (auto pos = find_link_verb(t); pos && *pos + 1 < t.size()) return clause_kind::fact;
    return clause_kind::none;
}

bool has_update_marker(const token_list& toks, const predicate_lexicon& preds) {
    for (size_t i = 0; i < toks.size(); ++i) {
        const std::string& t = toks[i];
        if (t == "actually" || t == "instead" || t == "correction") return true;
        if (i + 1 < toks.size() && ((t == "no" && toks[i + 1] == "wait") ||
                                    (t == "scratch" && toks[i + 1] == "that")))
            return true;
        size_t cap = std::min(preds.max_surface_tokens(), toks.size() - i);
        for (size_t len = cap; len >= 1; --len) {
            std::string surface = join_range(toks, i, i + len);
            if (preds.has_surface(surface) && preds.is_update_surface(surface)) return true;
        }
    }
    return false;
}

}  // namespace

std::string_view to_string(input_label l) {
    switch (l) {
        case input_label::personal_fact: return "personal_fact";
        case input_label::update: return "update";
        case input_label::question: return "question";
        case input_label::general_knowledge: return "general_knowledge";
        case input_label::emotional: return "emotional";
        case input_label::mixed: return "mixed";
    }
    return "general_knowledge";
}

std::optional<input_label> input_label_from(std::string_view s) {
    if (s == "personal_fact") return input_label::personal_fact;
    if (s == "update") return input_label::update;
    if (s == "question") return input_label::question;
    if (s == "general_knowledge") return input_label::general_knowledge;
    if (s == "emotional") return input_label::emotional;
    if (s == "mixed") return input_label::mixed;
    return std::nullopt;
}

input_classification classify_input(std::string_view utterance, const predicate_lexicon& preds,
                                    const valence_lexicon& affect) {
    token_list all = text::tokenize(utterance);
    if (all.empty()) fail(errc::invalid_argument, "empty utterance");

    bool personal = std::any_of(all.begin(), all.end(),
                                [](const std::string& t) { return personal_token(t); });
    std::string folded = text::fold(utterance);
    bool question_form =
        (!folded.empty() && folded.find('?') != std::string::npos) || interrogative_lead(all[0]);
    if (question_form)
        return {personal ? input_label::question : input_label::general_knowledge};
    // Update markers outrank the personal-referent test: "Actually, the
    // interview moved to Thursday." revises known context even though
    // no first-person word appears.
    if (has_update_marker(all, preds)) return {input_label::update};
    if (!personal) return {input_label::general_knowledge};

    bool any_affect = false, any_fact = false;
    for (const token_list& clause : clause_split(utterance, preds, affect)) {
        switch (classify_clause(clause, preds, affect)) {
            case clause_kind::affect: any_affect = true; break;
            case clause_kind::fact: any_fact = true; break;
            case clause_kind::none: break;
        }
    }
    if (any_affect && any_fact) return {input_label::mixed};
    if (any_affect) return {input_label::emotional};
    return {input_label::personal_fact};
}

std::vector<fact_trace> extract_facts(std::string_view utterance, const std::string& context,
                                      const sim_time& batch_time, const predicate_lexicon& preds,
                                      const valence_lexicon& affect, const ingest_context& prior) {
    std::vector<fact_trace> out;
    std::vector<const fact_trace*> local_ptrs;
    auto locals = [&] {
        return std::span<const fact_trace* const>(local_ptrs.data(), local_ptrs.size());
    };

    for (token_list clause : clause_split(utterance, preds, affect)) {
        std::optional<clause_parts> parts;

        if (negation_markers(clause)) {
            std::set<std::string> anchors;
            for (const std::string& t : text::content_tokens(text::join(clause)))
                if (!negation_word(t)) anchors.insert(t);
            if (const fact_trace* a =
                    find_anchor(anchors, {locals(), prior.pronoun_window, prior.history}, false)) {
                clause_parts p;
                p.subjects = {a->subject};
                p.predicate = a->predicate;
                p.object = "cancelled";
                parts = p;
            }
        }
        if (!parts) {
            strip_discourse(clause);
            if (clause.empty()) continue;
            parts = try_feel(clause, affect, locals(), prior.pronoun_window);
            if (!parts)
                parts = try_svo(clause, batch_time, preds, affect, locals(), prior.pronoun_window);
            if (!parts)
                parts = try_copular(clause, batch_time, locals(), prior.pronoun_window);
        }
        if (!parts) continue;

        if (parts->time.kind == temporal_kind::sequence && !parts->time.resolved) {
            std::set<std::string> anchors;
            for (const std::string& a : text::content_tokens(parts->time.reference_phrase))
                anchors.insert(a);
            if (const fact_trace* anchor =
                    find_anchor(anchors, {locals(), prior.pronoun_window, prior.history}, true))
                parts->time.resolved = anchor->resolved_time;
        }

        for (const std::string& subject : parts->subjects) {
            fact_trace t;
            t.context = context;
            t.subject = subject;
            t.predicate = parts->predicate;
            t.object = parts->object;
            t.stored_at = batch_time;
            t.source_text = std::string(utterance);
            if (parts->time.kind != temporal_kind::none) {
                t.resolved_kind = parts->time.kind;
                t.resolved_direction = parts->time.direction;
                t.resolved_time = parts->time.resolved;
            }
            out.push_back(std::move(t));
        }
        // Appends may have reallocated; re-point the local antecedents.
        local_ptrs.clear();
        for (const fact_trace& t : out) local_ptrs.push_back(&t);
    }
    return out;
}

std::vector<std::string> predict_queries(const fact_trace& trace) {
    std::vector<std::string> out;
    auto add = [&out](const std::string& q) {
        std::string n = text::normalize_query(q);
        if (!n.empty() && std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
    };
    const bool speaker = trace.subject == "speaker";
    const std::string& subj = trace.subject;
    bool timed = trace.resolved_time.has_value() ||
                 trace.resolved_kind != temporal_kind::none ||
                 std::find(trace.type_tags.begin(), trace.type_tags.end(), tag::datetime) !=
                     trace.type_tags.end();

    if (timed && !speaker) add("when is my " + subj);
    if (trace.predicate == "lives_in")
        add(speaker ? "where do i live" : "where does my " + subj + " live");
    else if (trace.predicate == "works_at")
        add(speaker ? "where do i work" : "where does my " + subj + " work");
    else if (trace.predicate == "feels")
        add(speaker ? "how do i feel" : "how does my " + subj + " feel");
    else if (trace.predicate == "is" && !speaker)
        add("who is my " + subj);

    predicate_render r = render_info(trace.predicate);
    add(speaker ? "what did i " + r.q_verb : "what did my " + subj + " " + r.q_verb);
    add(speaker ? "tell me about my plans" : "tell me about my " + subj);
    return out;
}

std::vector<std::string> tag_types(const fact_trace& trace, const valence_lexicon& affect) {
    std::set<std::string> tags;
    if (trace.resolved_time || trace.resolved_kind != temporal_kind::none)
        tags.emplace(tag::datetime);
    if (trace.predicate == "feels") tags.emplace(tag::emotion);
    for (const std::string& t : text::tokenize(trace.object)) {
        if (gazetteer::place(t)) tags.emplace(tag::place);
        if (gazetteer::person_term(t) || gazetteer::first_name(t)) tags.emplace(tag::person);
        if (gazetteer::event_term(t)) tags.emplace(tag::event);
        if (gazetteer::activity_term(t)) tags.emplace(tag::activity);
        if (gazetteer::organization_term(t)) tags.emplace(tag::organization);
        if (affect.has(t)) tags.emplace(tag::emotion);
    }
    for (const std::string& t : text::tokenize(trace.subject)) {
        if (gazetteer::event_term(t)) tags.emplace(tag::event);
        if (gazetteer::activity_term(t)) tags.emplace(tag::activity);
    }
    if (tags.empty()) tags.emplace(tag::object);
    return {tags.begin(), tags.end()};
}

ingest_result ingest_turn(std::string_view utterance, const std::string& context,
                          const sim_time& batch_time, trace_store& store,
                          const predicate_lexicon& preds, const valence_lexicon& affect,
                          const ingest_context& prior, const write_options& opts) {
    ingest_result result;
    result.classification = classify_input(utterance, preds, affect);
    input_label label = result.classification.label;
    if (label == input_label::question || label == input_label::general_knowledge) return result;

    std::vector<fact_trace> extracted =
        extract_facts(utterance, context, batch_time, preds, affect, prior);
    for (fact_trace& t : extracted) {
        bool wants_update = label == input_label::update || t.object == "cancelled";
        std::optional<std::string> old;
        if (wants_update && opts.supersession) {
            std::vector<std::string> hint = text::tokenize(t.object);
            old = store.latest_active_slot(context, t.subject, t.predicate, hint);
            if (old) {
                // "the interview" may update "job interview at meridian
                // labs"; keep the fuller name so the slot stays stable.
                const fact_trace* prev = store.find(*old);
                if (prev && prev->subject != t.subject &&
                    text::tokenize(prev->subject).size() > text::tokenize(t.subject).size()) {
                    t.subject = prev->subject;
                }
            }
        }
        t.type_tags = tag_types(t, affect);
        t.predicted_queries = predict_queries(t);
        if (old) {
            result.stored_ids.push_back(store.supersede(context, *old, std::move(t)));
            result.superseded_ids.push_back(*old);
        } else {
            result.stored_ids.push_back(store.put_trace(context, std::move(t)));
        }
    }
    return result;
}

}  // namespace atant

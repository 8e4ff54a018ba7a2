#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"

#include "core/error.hpp"
#include "core/read_path.hpp"
#include "core/store.hpp"
#include "helpers.hpp"

using namespace atant;
using testutil::at;
using testutil::make_trace;
using testutil::temp_dir;

namespace {

query_label q_label(const std::string& q) { return classify_query(q).label; }

query_classification cls(query_label l) {
    query_classification c;
    c.label = l;
    return c;
}

}  // namespace

TEST_CASE("query labels follow the precedence chain") {
    CHECK(q_label("What is the capital of France?") == query_label::general_knowledge);
    CHECK(q_label("How many continents are there?") == query_label::general_knowledge);
    CHECK(q_label("Tell me about my week.") == query_label::reconstruction);
    CHECK(q_label("What happened with my interview?") == query_label::reconstruction);
    CHECK(q_label("Remind me about my plans.") == query_label::reconstruction);
    CHECK(q_label("How do I feel about the wedding?") == query_label::emotional);
    CHECK(q_label("When is my dentist appointment?") == query_label::temporal);
    CHECK(q_label("What day is my interview?") == query_label::temporal);
    // "still" routes to current state; "nervous" is not a feel word.
    CHECK(q_label("Am I still nervous about the interview?") == query_label::current_state);
    CHECK(q_label("Do I still take the inhaler?") == query_label::current_state);
    CHECK(q_label("Where does my sister live?") == query_label::fact_lookup);
    CHECK(q_label("Who is my recruiter?") == query_label::fact_lookup);

    try {
        classify_query("");
        FAIL_CHECK("expected invalid_argument");
    } catch (const error& e) {
        CHECK(e.code() == errc::invalid_argument);
        CHECK(std::string(e.what()) == "empty query");
    }
}

TEST_CASE("structural matching ranks predicted-query, slot and keyword hits") {
    temp_dir tmp;
    trace_store store;
    store.open(tmp.path());
    fact_trace interview = make_trace("c", "job interview", "scheduled_for", "next tuesday",
                                      "2026-03-02T09:00:00-08:00");
    interview.predicted_queries = {"when is my job interview"};
    interview.source_text = "i have a job interview next tuesday";
    std::string i_id = store.put_trace("c", interview);
    std::string s_id = store.put_trace(
        "c", make_trace("c", "sister", "lives_in", "portland", "2026-03-02T09:01:00-08:00"));
    std::string other_ctx = store.put_trace(
        "d", make_trace("d", "garden", "is", "thriving", "2026-03-02T09:02:00-08:00"));

    SUBCASE("an exact predicted query lands in the top tier") {
        candidate_set cands = match_structural("When is my job interview?", "c", store);
        REQUIRE_FALSE(cands.candidates.empty());
        CHECK(cands.candidates[0].trace_id == i_id);
        CHECK(cands.candidates[0].basis == match_basis::predicted_query);
        // score = tier*den + overlap over den, tiers never interleave
        CHECK(cands.candidates[0].score_num >= 3 * cands.candidates[0].score_den);
        CHECK(cands.k == kDefaultK);
    }

    SUBCASE("subject tokens inside the query give a slot match") {
        candidate_set cands = match_structural("any news about my sister", "c", store);
        REQUIRE_FALSE(cands.candidates.empty());
        CHECK(cands.candidates[0].trace_id == s_id);
        CHECK(cands.candidates[0].basis == match_basis::slot_match);
        CHECK(cands.candidates[0].score_num >= 2 * cands.candidates[0].score_den);
        CHECK(cands.candidates[0].score_num < 3 * cands.candidates[0].score_den);
    }

    SUBCASE("bare keyword overlap is the lowest tier and zero overlap excludes") {
        candidate_set cands = match_structural("tuesday timing", "c", store);
        REQUIRE(cands.candidates.size() == 1);
        CHECK(cands.candidates[0].trace_id == i_id);
        CHECK(cands.candidates[0].basis == match_basis::keyword_overlap);
        CHECK(cands.candidates[0].score_num < 2 * cands.candidates[0].score_den);
    }

    SUBCASE("context scoping hides other stores unless crossed deliberately") {
        CHECK(match_structural("how is my garden", "c", store).candidates.empty());
        candidate_set crossed = match_structural("how is my garden", "c", store, kDefaultK, true);
        REQUIRE(crossed.candidates.size() == 1);
        CHECK(crossed.candidates[0].trace_id == other_ctx);
    }
}

TEST_CASE("structural matching breaks score ties by trace id") {
    temp_dir tmp;
    trace_store store;
    store.open(tmp.path());
    for (int i = 0; i < 7; ++i)
        store.put_trace("c", make_trace("c", "plant", "is", "green", "2026-03-02T09:00:00-08:00"));
    candidate_set cands = match_structural("my plant", "c", store, 5);
    REQUIRE(cands.candidates.size() == 5);  // k truncation
    for (size_t i = 1; i < cands.candidates.size(); ++i) {
        CHECK(cands.candidates[i - 1].score_num == cands.candidates[i].score_num);
        CHECK(cands.candidates[i - 1].trace_id < cands.candidates[i].trace_id);
    }
    CHECK(cands.candidates[0].trace_id == "t000001");

    candidate_set wide = match_structural("my plant", "c", store, 10);
    CHECK(wide.candidates.size() == 7);
    CHECK(wide.k == 10);
}

TEST_CASE("convergence follows supersession for lookup-style queries") {
    temp_dir tmp;
    trace_store store;
    store.open(tmp.path());
    std::string old_id = store.put_trace(
        "c", make_trace("c", "appointment", "scheduled_for", "tuesday",
                        "2026-03-02T09:00:00-08:00"));
    std::string new_id =
        store.supersede("c", old_id,
                        make_trace("c", "appointment", "scheduled_for", "thursday",
                                   "2026-03-04T18:00:00-08:00"));

    candidate_set cands = match_structural("when is my appointment", "c", store);
    REQUIRE_FALSE(cands.candidates.empty());
    for (query_label l : {query_label::fact_lookup, query_label::current_state,
                          query_label::temporal}) {
        std::vector<std::string> ids = converge(store, cands, cls(l));
        CHECK(ids == std::vector<std::string>{new_id});
    }
}

TEST_CASE("emotional convergence keeps co-ranked feelings on one subject") {
    temp_dir tmp;
    trace_store store;
    store.open(tmp.path());
    fact_trace feel1 = make_trace("c", "sister", "feels", "thrilled about the wedding",
                                  "2026-03-02T09:00:00-08:00");
    feel1.type_tags = {"emotion"};
    feel1.source_text = "she is thrilled about the wedding";
    std::string f1 = store.put_trace("c", feel1);
    std::string fact = store.put_trace(
        "c", make_trace("c", "sister", "lives_in", "portland", "2026-03-02T10:00:00-08:00"));

    candidate_set cands = match_structural("how does my sister feel", "c", store);
    std::vector<std::string> ids = converge(store, cands, cls(query_label::emotional));
    CHECK(ids == std::vector<std::string>{f1});
}

TEST_CASE("reconstruction gathers the story around the top subject") {
    temp_dir tmp;
    trace_store store;
    store.open(tmp.path());
    std::string old_id = store.put_trace(
        "c", make_trace("c", "job interview", "scheduled_for", "tuesday",
                        "2026-03-02T09:00:00-08:00"));
    std::string new_id = store.supersede(
        "c", old_id,
        make_trace("c", "job interview", "scheduled_for", "thursday", "2026-03-04T18:00:00-08:00"));
    fact_trace feel = make_trace("c", "job interview", "feels", "stressful",
                                 "2026-03-02T10:00:00-08:00");
    feel.type_tags = {"emotion"};
    std::string feel_id = store.put_trace("c", feel);
    std::string unrelated = store.put_trace(
        "c", make_trace("c", "garden", "is", "thriving", "2026-03-02T11:00:00-08:00"));

    candidate_set cands = match_structural("tell me about my job interview", "c", store);
    std::vector<std::string> ids = converge(store, cands, cls(query_label::reconstruction));
    // stored-at order: the superseded original, the feeling, the update
    CHECK(ids == std::vector<std::string>{old_id, feel_id, new_id});
    CHECK(std::find(ids.begin(), ids.end(), unrelated) == ids.end());
}

TEST_CASE("general knowledge and empty candidate sets converge to nothing") {
    temp_dir tmp;
    trace_store store;
    store.open(tmp.path());
    store.put_trace("c", make_trace("c", "sister", "lives_in", "portland",
                                    "2026-03-02T09:00:00-08:00"));
    candidate_set cands = match_structural("my sister", "c", store);
    REQUIRE_FALSE(cands.candidates.empty());
    CHECK(converge(store, cands, cls(query_label::general_knowledge)).empty());
    CHECK(converge(store, candidate_set{}, cls(query_label::fact_lookup)).empty());
}

TEST_CASE("answers refuse without personal facts") {
    temp_dir tmp;
    trace_store store;
    store.open(tmp.path());
    sim_time ask = at("2026-03-06T09:00:00-08:00");

    answer a = assemble_answer(store, {}, cls(query_label::fact_lookup), ask);
    CHECK(a.refused);
    CHECK(a.text == std::string(kNoFactMarker));
    CHECK(a.traces_used.empty());

    std::string id = store.put_trace(
        "c", make_trace("c", "sister", "lives_in", "portland", "2026-03-02T09:00:00-08:00"));
    a = assemble_answer(store, {id}, cls(query_label::general_knowledge), ask);
    CHECK(a.refused);
    CHECK(a.text == std::string(kNoFactMarker));

    a = assemble_answer(store, {"t000099"}, cls(query_label::fact_lookup), ask);
    CHECK(a.refused);
}

TEST_CASE("answer templates render subjects, verbs and dates") {
    temp_dir tmp;
    trace_store store;
    store.open(tmp.path());
    sim_time ask = at("2026-03-02T18:00:00-08:00");

    std::string sister = store.put_trace(
        "c", make_trace("c", "sister", "lives_in", "portland", "2026-03-02T09:00:00-08:00"));
    answer a = assemble_answer(store, {sister}, cls(query_label::fact_lookup), ask);
    CHECK(a.text == "Your sister lives in portland.");
    CHECK(a.traces_used == std::vector<std::string>{sister});
    CHECK_FALSE(a.refused);

    fact_trace feel =
        make_trace("c", "speaker", "feels", "nervous about the interview",
                   "2026-03-02T09:00:00-08:00");
    std::string feel_id = store.put_trace("c", feel);
    a = assemble_answer(store, {feel_id}, cls(query_label::emotional), ask);
    CHECK(a.text == "You feel nervous about the interview.");

    fact_trace timed = make_trace("c", "job interview", "scheduled_for", "thursday",
                                  "2026-03-02T09:30:00-08:00");
    timed.resolved_time = at("2026-03-05T00:00:00-08:00");
    timed.resolved_kind = temporal_kind::relative;
    timed.resolved_direction = temporal_direction::future;
    std::string timed_id = store.put_trace("c", timed);
    a = assemble_answer(store, {timed_id}, cls(query_label::temporal), ask);
    CHECK(a.text ==
          "Your job interview is scheduled for thursday \xE2\x80\x94 thursday 2026-03-05 "
          "(upcoming).");

    // Several traces join into one space-separated paragraph.
    a = assemble_answer(store, {sister, feel_id}, cls(query_label::reconstruction), ask);
    CHECK(a.text == "Your sister lives in portland. You feel nervous about the interview.");
}

TEST_CASE("resolved clock times and day relations appear in the suffix") {
    temp_dir tmp;
    trace_store store;
    store.open(tmp.path());

    fact_trace evening = make_trace("c", "pottery class", "scheduled_for", "friday at 6pm",
                                    "2026-03-02T09:00:00-08:00");
    evening.resolved_time = at("2026-03-06T18:00:00-08:00");
    evening.resolved_kind = temporal_kind::relative;
    evening.resolved_direction = temporal_direction::future;
    std::string id = store.put_trace("c", evening);

    answer a = assemble_answer(store, {id}, cls(query_label::temporal),
                     at("2026-03-02T09:00:00-08:00"));
    CHECK(a.text ==
          "Your pottery class is scheduled for friday at 6pm \xE2\x80\x94 friday 2026-03-06 18:00 "
          "(upcoming).");

    a = assemble_answer(store, {id}, cls(query_label::temporal), at("2026-03-06T08:00:00-08:00"));
    CHECK(a.text.find("(today)") != std::string::npos);

    a = assemble_answer(store, {id}, cls(query_label::temporal), at("2026-03-09T08:00:00-08:00"));
    CHECK(a.text.find("(in the past)") != std::string::npos);
}

TEST_CASE("superseded traces read as past statements") {
    temp_dir tmp;
    trace_store store;
    store.open(tmp.path());
    sim_time ask = at("2026-03-06T09:00:00-08:00");

    fact_trace old_appt = make_trace("c", "dentist appointment", "scheduled_for", "tuesday",
                                     "2026-03-02T09:00:00-08:00");
    old_appt.resolved_time = at("2026-03-03T00:00:00-08:00");
    old_appt.resolved_kind = temporal_kind::relative;
    old_appt.resolved_direction = temporal_direction::future;
    std::string old_id = store.put_trace("c", old_appt);
    store.supersede("c", old_id,
                    make_trace("c", "dentist appointment", "scheduled_for", "thursday",
                               "2026-03-04T18:00:00-08:00"));

    answer a = assemble_answer(store, {old_id}, cls(query_label::reconstruction), ask);
    CHECK(a.text ==
          "Previously: Your dentist appointment was scheduled for tuesday \xE2\x80\x94 tuesday "
          "2026-03-03 (in the past).");
}

TEST_CASE("cancelled slots render as cancellations") {
    temp_dir tmp;
    trace_store store;
    store.open(tmp.path());
    sim_time ask = at("2026-03-06T09:00:00-08:00");

    std::string club = store.put_trace(
        "c", make_trace("c", "book club", "scheduled_for", "cancelled",
                        "2026-03-02T09:00:00-08:00"));
    answer a = assemble_answer(store, {club}, cls(query_label::fact_lookup), ask);
    CHECK(a.text == "Your book club was cancelled.");

    std::string mine = store.put_trace(
        "c", make_trace("c", "speaker", "scheduled_for", "cancelled", "2026-03-02T09:00:00-08:00"));
    a = assemble_answer(store, {mine}, cls(query_label::fact_lookup), ask);
    CHECK(a.text == "That was cancelled.");
}

TEST_CASE("temporal judgment reads the first resolved trace") {
    temp_dir tmp;
    trace_store store;
    store.open(tmp.path());
    std::string plain = store.put_trace(
        "c", make_trace("c", "sister", "lives_in", "portland", "2026-03-02T09:00:00-08:00"));
    fact_trace timed = make_trace("c", "job interview", "scheduled_for", "thursday",
                                  "2026-03-02T09:30:00-08:00");
    timed.resolved_time = at("2026-03-05T00:00:00-08:00");
    timed.resolved_kind = temporal_kind::relative;
    timed.resolved_direction = temporal_direction::future;
    std::string timed_id = store.put_trace("c", timed);

    temporal_judgment j =
        judge_temporal(store, {plain, timed_id}, at("2026-03-02T09:00:00-08:00"));
    CHECK(j.kind == temporal_kind::relative);
    CHECK(j.direction == temporal_direction::future);

    j = judge_temporal(store, {plain, timed_id}, at("2026-03-05T23:00:00-08:00"));
    CHECK(j.direction == temporal_direction::present);
    j = judge_temporal(store, {plain, timed_id}, at("2026-03-09T09:00:00-08:00"));
    CHECK(j.direction == temporal_direction::past);

    j = judge_temporal(store, {plain}, at("2026-03-02T09:00:00-08:00"));
    CHECK(j.kind == temporal_kind::none);
    CHECK(j.direction == temporal_direction::none);

    fact_trace bare = make_trace("c", "exam", "scheduled_for", "2026-04-01",
                                 "2026-03-02T10:00:00-08:00");
    bare.resolved_time = at("2026-04-01T00:00:00-08:00");
    bare.resolved_kind = temporal_kind::absolute;
    std::string bare_id = store.put_trace("c", bare);
    j = judge_temporal(store, {bare_id}, at("2026-03-02T09:00:00-08:00"));
    CHECK(j.kind == temporal_kind::absolute);
}

TEST_CASE("emotion judgment scans query and trace wording") {
    temp_dir tmp;
    trace_store store;
    store.open(tmp.path());
    valence_lexicon v = valence_lexicon::base();

    emotion_judgment j = judge_emotion(store, {}, "am i still nervous about it", v);
    CHECK(j.detected);
    CHECK(j.direction == emotion_direction::negative);

    fact_trace feel = make_trace("c", "speaker", "feels", "thrilled",
                                 "2026-03-02T09:00:00-08:00");
    feel.source_text = "i am thrilled about the offer";
    std::string fid = store.put_trace("c", feel);
    j = judge_emotion(store, {fid}, "how do i feel", v);
    CHECK(j.detected);
    CHECK(j.direction == emotion_direction::positive);

    // Balanced positives and negatives detect but stay neutral.
    j = judge_emotion(store, {fid}, "i was nervous earlier", v);
    CHECK(j.detected);
    CHECK(j.direction == emotion_direction::neutral);

    j = judge_emotion(store, {}, "where does my sister live", v);
    CHECK_FALSE(j.detected);
    CHECK(j.direction == emotion_direction::neutral);
}

#include <span>
#include <string>
#include <vector>

#include "doctest.h"

#include "core/error.hpp"
#include "core/store.hpp"
#include "core/write_path.hpp"
#include "helpers.hpp"

using namespace atant;
using testutil::at;
using testutil::make_trace;
using testutil::temp_dir;

namespace {

predicate_lexicon& preds() {
    static predicate_lexicon p = predicate_lexicon::base();
    return p;
}
valence_lexicon& affect() {
    static valence_lexicon v = valence_lexicon::base();
    return v;
}

input_label label_of(const std::string& utterance) {
    return classify_input(utterance, preds(), affect()).label;
}

std::vector<fact_trace> extract(const std::string& utterance, const sim_time& when,
                                const ingest_context& prior = {}) {
    return extract_facts(utterance, "ctx", when, preds(), affect(), prior);
}

const sim_time kMond = at("2026-03-02T09:00:00-08:00");  // Monday

}  // namespace

TEST_CASE("utterance labels follow the grammar gates") {
    CHECK(label_of("What did I say about the interview?") == input_label::question);
    CHECK(label_of("When is my dentist appointment?") == input_label::question);
    CHECK(label_of("Tell me about my week") == input_label::question);
    CHECK(label_of("Is water wet?") == input_label::general_knowledge);
    CHECK(label_of("How many continents are there?") == input_label::general_knowledge);

    CHECK(label_of("Actually, the interview moved to Thursday.") == input_label::update);
    CHECK(label_of("No wait, it's on Friday.") == input_label::update);
    CHECK(label_of("My interview got rescheduled to Friday.") == input_label::update);
    CHECK(label_of("The wedding moved to June 27th.") == input_label::update);

    CHECK(label_of("I'm thrilled about the offer.") == input_label::emotional);
    CHECK(label_of("I got the job offer and I'm thrilled.") == input_label::mixed);
    CHECK(label_of("My sister lives in Portland.") == input_label::personal_fact);
    CHECK(label_of("The weather was nice.") == input_label::general_knowledge);
    CHECK(label_of("Rain falls from clouds.") == input_label::general_knowledge);

    CHECK_THROWS_AS(classify_input("", preds(), affect()), error);
    try {
        classify_input("", preds(), affect());
    } catch (const error& e) {
        CHECK(e.code() == errc::invalid_argument);
        CHECK(std::string(e.what()) == "empty utterance");
    }
}

TEST_CASE("label names round-trip") {
    CHECK(to_string(input_label::personal_fact) == "personal_fact");
    CHECK(to_string(input_label::update) == "update");
    CHECK(input_label_from("emotional") == input_label::emotional);
    CHECK(input_label_from("mixed") == input_label::mixed);
    CHECK_FALSE(input_label_from("weird").has_value());
}

TEST_CASE("possession of an event becomes a schedule slot") {
    auto traces = extract("I have a job interview next Tuesday.", kMond);
    REQUIRE(traces.size() == 1);
    const fact_trace& t = traces[0];
    CHECK(t.subject == "job interview");
    CHECK(t.predicate == "scheduled_for");
    CHECK(t.object == "next tuesday");
    CHECK(t.context == "ctx");
    CHECK(t.stored_at == kMond);
    REQUIRE(t.resolved_time.has_value());
    CHECK(*t.resolved_time == at("2026-03-03T00:00:00-08:00"));
    CHECK(t.resolved_kind == temporal_kind::relative);
    CHECK(t.resolved_direction == temporal_direction::future);
}

TEST_CASE("plain subject-verb-object facts keep their slot words") {
    auto traces = extract("My sister lives in Portland.", kMond);
    REQUIRE(traces.size() == 1);
    CHECK(traces[0].subject == "sister");
    CHECK(traces[0].predicate == "lives_in");
    CHECK(traces[0].object == "portland");
    CHECK_FALSE(traces[0].resolved_time.has_value());
    CHECK(traces[0].resolved_kind == temporal_kind::none);
}

TEST_CASE("coordinated subjects fan out into one trace per conjunct") {
    auto traces = extract("My roommate Luis and I visited the farmers market on Saturday.", kMond);
    REQUIRE(traces.size() == 2);
    CHECK(traces[0].subject == "roommate luis");
    CHECK(traces[1].subject == "speaker");
    for (const fact_trace& t : traces) {
        CHECK(t.predicate == "visited");
        CHECK(t.object == "farmers market");
        REQUIRE(t.resolved_time.has_value());
        CHECK(t.resolved_time->local_date() == std::chrono::year_month_day{
                                                   std::chrono::year{2026}, std::chrono::month{3},
                                                   std::chrono::day{7}});
        CHECK(t.resolved_direction == temporal_direction::future);
    }
}

TEST_CASE("copular sentences over calendar phrases schedule the event subject") {
    auto traces = extract("Our wedding is on June 20th.", at("2026-06-01T10:00:00-08:00"));
    REQUIRE(traces.size() == 1);
    CHECK(traces[0].subject == "wedding");
    CHECK(traces[0].predicate == "scheduled_for");
    CHECK(traces[0].object == "on june 20th");
    REQUIRE(traces[0].resolved_time.has_value());
    CHECK(*traces[0].resolved_time == at("2026-06-20T00:00:00-08:00"));
    CHECK(traces[0].resolved_kind == temporal_kind::absolute);
    CHECK(traces[0].resolved_direction == temporal_direction::future);
}

TEST_CASE("feeling clauses expand object pronouns from the window") {
    fact_trace interview = make_trace("ctx", "job interview", "scheduled_for", "next tuesday",
                                      "2026-03-02T09:00:00-08:00");
    std::vector<const fact_trace*> window = {&interview};
    ingest_context prior{window, window};

    auto traces = extract("I'm nervous about it.", kMond, prior);
    REQUIRE(traces.size() == 1);
    CHECK(traces[0].subject == "speaker");
    CHECK(traces[0].predicate == "feels");
    CHECK(traces[0].object == "nervous about job interview");
}

TEST_CASE("third-person pronoun subjects resolve against compatible antecedents") {
    fact_trace sister =
        make_trace("ctx", "sister", "lives_in", "portland", "2026-03-02T09:00:00-08:00");
    std::vector<const fact_trace*> window = {&sister};
    ingest_context prior{window, window};

    auto traces = extract("She is thrilled about the wedding.", kMond, prior);
    REQUIRE(traces.size() == 1);
    CHECK(traces[0].subject == "sister");
    CHECK(traces[0].predicate == "feels");
    CHECK(traces[0].object == "thrilled about the wedding");

    // Without a compatible antecedent the clause is dropped.
    CHECK(extract("She got a promotion.", kMond).empty());
    fact_trace brother =
        make_trace("ctx", "brother", "lives_in", "denver", "2026-03-02T09:00:00-08:00");
    std::vector<const fact_trace*> wrong = {&brother};
    CHECK(extract("She is thrilled about the wedding.", kMond, {wrong, wrong}).empty());
}

TEST_CASE("cancellation wording collapses to a cancelled object on the anchored slot") {
    fact_trace club =
        make_trace("ctx", "book club", "scheduled_for", "thursday", "2026-03-01T09:00:00-08:00");
    std::vector<const fact_trace*> history = {&club};
    ingest_context prior{{}, history};

    auto traces = extract("My book club isn't happening anymore.", kMond, prior);
    REQUIRE(traces.size() == 1);
    CHECK(traces[0].subject == "book club");
    CHECK(traces[0].predicate == "scheduled_for");
    CHECK(traces[0].object == "cancelled");
    CHECK_FALSE(traces[0].resolved_time.has_value());

    // No anchor in history, no trace.
    CHECK(extract("My book club isn't happening anymore.", kMond).empty());
}

TEST_CASE("sequence phrases inherit the anchor's resolved time") {
    fact_trace wedding = make_trace("ctx", "wedding", "scheduled_for", "on june 20th",
                                    "2026-06-01T10:00:00-08:00");
    wedding.resolved_time = at("2026-06-20T00:00:00-08:00");
    wedding.resolved_kind = temporal_kind::absolute;
    wedding.resolved_direction = temporal_direction::future;
    std::vector<const fact_trace*> history = {&wedding};
    ingest_context prior{{}, history};

    auto traces =
        extract("The reception party is right after the wedding.", at("2026-06-05T09:00:00-08:00"),
                prior);
    REQUIRE(traces.size() == 1);
    CHECK(traces[0].subject == "reception party");
    CHECK(traces[0].predicate == "scheduled_for");
    CHECK(traces[0].object == "right after the wedding");
    CHECK(traces[0].resolved_kind == temporal_kind::sequence);
    CHECK(traces[0].resolved_direction == temporal_direction::future);
    REQUIRE(traces[0].resolved_time.has_value());
    CHECK(*traces[0].resolved_time == *wedding.resolved_time);
}

TEST_CASE("questions and general statements extract nothing") {
    CHECK(extract("When is my dentist appointment?", kMond).empty());
    CHECK(extract("The weather was nice.", kMond).empty());
}

TEST_CASE("predicted queries are exact template expansions") {
    using queries = std::vector<std::string>;
    fact_trace t = make_trace("ctx", "sister", "lives_in", "portland", "2026-03-02T09:00:00-08:00");
    CHECK(predict_queries(t) ==
          queries{"where does my sister live", "what did my sister live", "tell me about my sister"});

    t = make_trace("ctx", "speaker", "lives_in", "savannah", "2026-03-02T09:00:00-08:00");
    CHECK(predict_queries(t) ==
          queries{"where do i live", "what did i live", "tell me about my plans"});

    t = make_trace("ctx", "speaker", "feels", "nervous", "2026-03-02T09:00:00-08:00");
    CHECK(predict_queries(t) ==
          queries{"how do i feel", "what did i feel", "tell me about my plans"});

    t = make_trace("ctx", "sister", "works_at", "university", "2026-03-02T09:00:00-08:00");
    CHECK(predict_queries(t) ==
          queries{"where does my sister work", "what did my sister work", "tell me about my sister"});

    t = make_trace("ctx", "brother", "is", "engaged to wren", "2026-03-02T09:00:00-08:00");
    CHECK(predict_queries(t) ==
          queries{"who is my brother", "what did my brother is", "tell me about my brother"});

    t = make_trace("ctx", "job interview", "scheduled_for", "next tuesday",
                   "2026-03-02T09:00:00-08:00");
    t.resolved_time = at("2026-03-03T00:00:00-08:00");
    t.resolved_kind = temporal_kind::relative;
    CHECK(predict_queries(t) == queries{"when is my job interview",
                                        "what did my job interview scheduled",
                                        "tell me about my job interview"});

    t = make_trace("ctx", "speaker", "scheduled_for", "next tuesday", "2026-03-02T09:00:00-08:00");
    t.resolved_time = at("2026-03-03T00:00:00-08:00");
    t.resolved_kind = temporal_kind::relative;
    CHECK(predict_queries(t) == queries{"what did i scheduled", "tell me about my plans"});
}

TEST_CASE("type tags come from gazetteers with a generic fallback") {
    using tags = std::vector<std::string>;
    auto tagged = [](fact_trace t) { return tag_types(t, affect()); };

    CHECK(tagged(make_trace("c", "sister", "lives_in", "portland", "2026-03-02T09:00:00-08:00")) ==
          tags{"place"});
    CHECK(tagged(make_trace("c", "speaker", "got", "flat tire", "2026-03-02T09:00:00-08:00")) ==
          tags{"object"});
    CHECK(tagged(make_trace("c", "recruiter", "is", "dana whitfield",
                            "2026-03-02T09:00:00-08:00")) == tags{"object"});
    CHECK(tagged(make_trace("c", "brother", "is", "engaged to wren",
                            "2026-03-02T09:00:00-08:00")) == tags{"person"});
    CHECK(tagged(make_trace("c", "sister", "works_at", "the university",
                            "2026-03-02T09:00:00-08:00")) == tags{"organization"});
    CHECK(tagged(make_trace("c", "speaker", "signed up for", "pottery",
                            "2026-03-02T09:00:00-08:00")) == tags{"activity"});

    fact_trace feel =
        make_trace("c", "speaker", "feels", "nervous about the interview",
                   "2026-03-02T09:00:00-08:00");
    CHECK(tagged(feel) == tags{"emotion", "event"});

    fact_trace timed = make_trace("c", "job interview", "scheduled_for", "next tuesday",
                                  "2026-03-02T09:00:00-08:00");
    timed.resolved_time = at("2026-03-03T00:00:00-08:00");
    timed.resolved_kind = temporal_kind::relative;
    CHECK(tagged(timed) == tags{"datetime", "event"});
}

TEST_CASE("ingest_turn routes updates through slot replacement") {
    temp_dir tmp;
    trace_store store;
    store.open(tmp.path());

    ingest_result r1 = ingest_turn("I have a dentist appointment on Tuesday.", "c",
                                   at("2026-03-02T09:00:00-08:00"), store, preds(), affect(), {});
    CHECK(r1.classification.label == input_label::personal_fact);
    REQUIRE(r1.stored_ids == std::vector<std::string>{"t000001"});
    CHECK(r1.superseded_ids.empty());
    CHECK(store.find("t000001")->subject == "dentist appointment");
    CHECK(store.find("t000001")->predicate == "scheduled_for");

    ingest_result r2 = ingest_turn("Actually, the appointment moved to Thursday.", "c",
                                   at("2026-03-04T18:00:00-08:00"), store, preds(), affect(), {});
    CHECK(r2.classification.label == input_label::update);
    REQUIRE(r2.stored_ids == std::vector<std::string>{"t000002"});
    CHECK(r2.superseded_ids == std::vector<std::string>{"t000001"});
    CHECK(store.find("t000001")->status == trace_status::superseded);
    CHECK(store.find("t000001")->superseded_by == "t000002");

    const fact_trace* repl = store.find("t000002");
    REQUIRE(repl);
    // The replacement inherits the older, more specific subject.
    CHECK(repl->subject == "dentist appointment");
    CHECK(repl->object == "thursday");
    REQUIRE(repl->resolved_time.has_value());
    CHECK(repl->resolved_time->local_date() ==
          std::chrono::year_month_day{std::chrono::year{2026}, std::chrono::month{3},
                                      std::chrono::day{5}});
}

TEST_CASE("disabling supersession piles updates up instead") {
    temp_dir tmp;
    trace_store store;
    store.open(tmp.path());
    write_options no_replace{false};

    ingest_turn("I have a dentist appointment on Tuesday.", "c", at("2026-03-02T09:00:00-08:00"),
                store, preds(), affect(), {}, no_replace);
    ingest_result r2 =
        ingest_turn("Actually, the appointment moved to Thursday.", "c",
                    at("2026-03-04T18:00:00-08:00"), store, preds(), affect(), {}, no_replace);
    CHECK(r2.superseded_ids.empty());
    int active = 0;
    for (const fact_trace& t : store.snapshot("c").traces)
        if (t.status == trace_status::active) ++active;
    CHECK(active == 2);
}

TEST_CASE("cancellations supersede the anchored slot") {
    temp_dir tmp;
    trace_store store;
    store.open(tmp.path());
    std::string id = store.put_trace(
        "c", make_trace("c", "book club", "scheduled_for", "thursday", "2026-03-01T09:00:00-08:00"));
    std::vector<const fact_trace*> history = {store.find(id)};
    ingest_context prior{{}, history};

    ingest_result r = ingest_turn("My book club isn't happening anymore.", "c",
                                  at("2026-03-02T09:00:00-08:00"), store, preds(), affect(), prior);
    REQUIRE(r.stored_ids.size() == 1);
    CHECK(r.superseded_ids == std::vector<std::string>{id});
    const fact_trace* repl = store.find(r.stored_ids[0]);
    CHECK(repl->object == "cancelled");
    CHECK(repl->subject == "book club");
    CHECK(store.find(id)->status == trace_status::superseded);
}

TEST_CASE("questions and general knowledge store nothing") {
    temp_dir tmp;
    trace_store store;
    store.open(tmp.path());
    ingest_result q = ingest_turn("When is my appointment?", "c", at("2026-03-02T09:00:00-08:00"),
                                  store, preds(), affect(), {});
    CHECK(q.classification.label == input_label::question);
    CHECK(q.stored_ids.empty());
    ingest_result g = ingest_turn("The weather was nice.", "c", at("2026-03-02T09:00:00-08:00"),
                                  store, preds(), affect(), {});
    CHECK(g.classification.label == input_label::general_knowledge);
    CHECK(g.stored_ids.empty());
    CHECK(store.snapshot("c").traces.empty());
}

TEST_CASE("mixed utterances store both the fact and the feeling") {
    temp_dir tmp;
    trace_store store;
    store.open(tmp.path());
    ingest_result r = ingest_turn("I got the job offer and I'm thrilled.", "c",
                                  at("2026-03-02T09:00:00-08:00"), store, preds(), affect(), {});
    CHECK(r.classification.label == input_label::mixed);
    CHECK(r.stored_ids.size() == 2);
}

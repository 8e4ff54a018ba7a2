#include <string>
#include <vector>

#include "doctest.h"

#include "core/error.hpp"
#include "core/lexicon.hpp"
#include "helpers.hpp"

using namespace atant;
using testutil::temp_dir;

TEST_CASE("object tags steer ambiguous surfaces to different slots") {
    predicate_lexicon lex = predicate_lexicon::base();
    CHECK(lex.lookup("moved to", {"datetime"}) == "scheduled_for");
    CHECK(lex.lookup("moved to", {"place"}) == "lives_in");
    CHECK(lex.lookup("moved to", {}) == "located_in");
    CHECK(lex.lookup("moved to", {"person"}) == "located_in");
    CHECK(lex.lookup("changed to", {"datetime"}) == "scheduled_for");
    CHECK(lex.lookup("changed to", {}) == "changed_to");
    CHECK(lex.lookup("joined", {"organization"}) == "works_at");
    CHECK(lex.lookup("joined", {}) == "joined");
}

TEST_CASE("common surfaces canonicalize and unknown ones self-name") {
    predicate_lexicon lex = predicate_lexicon::base();
    CHECK(lex.lookup("have", {}) == "has");
    CHECK(lex.lookup("has", {}) == "has");
    CHECK(lex.lookup("got", {}) == "got");
    CHECK(lex.lookup("landed", {}) == "got");
    CHECK(lex.lookup("staying with", {}) == "staying_with");
    CHECK(lex.lookup("visited", {}) == "visited");
    CHECK(lex.lookup("training for", {}) == "training_for");
    CHECK(lex.lookup("zorped up", {}) == "zorped_up");
    CHECK(lex.has_surface("moved to"));
    CHECK(lex.has_surface("rescheduled to"));
    CHECK_FALSE(lex.has_surface("zorped up"));
    CHECK(lex.max_surface_tokens() >= 3);  // "pushed back to"
}

TEST_CASE("update surfaces are flagged") {
    predicate_lexicon lex = predicate_lexicon::base();
    for (const char* s : {"moved to", "rescheduled to", "rescheduled for", "pushed to",
                          "pushed back to", "postponed to", "bumped to", "switched to",
                          "turned down", "cancelled"})
        CHECK_MESSAGE(lex.is_update_surface(s), s);
    for (const char* s : {"visited", "has", "lives in", "staying with"})
        CHECK_MESSAGE(!lex.is_update_surface(s), s);
}

TEST_CASE("render info supplies person forms and a question verb") {
    predicate_render r = render_info("lives_in");
    CHECK(r.third == "lives in");
    CHECK(r.speaker == "live in");
    CHECK(r.q_verb == "live");

    r = render_info("scheduled_for");
    CHECK(r.third == "is scheduled for");
    CHECK(r.speaker == "are scheduled for");
    CHECK(r.q_verb == "scheduled");

    r = render_info("is");
    CHECK(r.third == "is");
    CHECK(r.speaker == "are");
    CHECK(r.q_verb == "is");

    r = render_info("works_at");
    CHECK(r.third == "works at");
    CHECK(r.speaker == "work at");
    CHECK(r.q_verb == "work");

    r = render_info("feels");
    CHECK(r.third == "feels");
    CHECK(r.speaker == "feel");
    CHECK(r.q_verb == "feel");

    r = render_info("staying_with");
    CHECK(r.third == "is staying with");
    CHECK(r.speaker == "are staying with");
    CHECK(r.q_verb == "staying");

    // Unlisted predicates fall back to their own words, trimming a
    // trailing s for the question verb.
    r = render_info("zorped_up");
    CHECK(r.third == "zorped up");
    CHECK(r.speaker == "zorped up");
    CHECK(r.q_verb == "zorped");
}

TEST_CASE("valence weights and scoring") {
    valence_lexicon v = valence_lexicon::base();
    for (const char* w : {"happy", "glad", "thrilled", "excited", "overjoyed"})
        CHECK_MESSAGE(v.weight(w) == 1, w);
    for (const char* w : {"sad", "anxious", "worried", "nervous"})
        CHECK_MESSAGE(v.weight(w) == -1, w);
    CHECK(v.weight("bicycle") == 0);
    CHECK(v.has("nervous"));
    CHECK_FALSE(v.has("bicycle"));

    valence_lexicon::score_result r = v.score({"happy", "but", "nervous"});
    CHECK(r.sum == 0);
    CHECK(r.hits == 2);
    r = v.score({"thrilled", "excited"});
    CHECK(r.sum == 2);
    CHECK(r.hits == 2);
    r = v.score({"spoon"});
    CHECK(r.sum == 0);
    CHECK(r.hits == 0);
}

TEST_CASE("extension files add and override entries") {
    temp_dir tmp;
    auto file = tmp.sub("ext.json");
    testutil::write_file(file, R"({
  "predicates": {
    "zorped up": "zorped_slot",
    "glommed onto": {"canonical": "glommed", "when_object_tag": "place", "update_verb": true},
    "moved to": {"canonical": "relocation", "when_object_tag": "person"}
  },
  "valence": {"stoked": 2, "bummed": -2}
})");

    predicate_lexicon lex = predicate_lexicon::base();
    lex.load_extension(file);
    CHECK(lex.lookup("zorped up", {}) == "zorped_slot");
    CHECK(lex.has_surface("zorped up"));
    CHECK(lex.lookup("glommed onto", {"place"}) == "glommed");
    // When every rule is conditioned and none matches, the last rule
    // still supplies a canonical name.
    CHECK(lex.lookup("glommed onto", {}) == "glommed");
    CHECK(lex.is_update_surface("glommed onto"));
    // New conditioned rules take precedence; unrelated conditions keep
    // their base behavior.
    CHECK(lex.lookup("moved to", {"person"}) == "relocation");
    CHECK(lex.lookup("moved to", {"datetime"}) == "scheduled_for");
    CHECK(lex.lookup("moved to", {"place"}) == "lives_in");
    CHECK(lex.lookup("moved to", {}) == "located_in");

    valence_lexicon v = valence_lexicon::base();
    v.load_extension(file);
    CHECK(v.weight("stoked") == 2);
    CHECK(v.weight("bummed") == -2);
    CHECK(v.weight("nervous") == -1);
}

TEST_CASE("extension errors name the offending entry") {
    temp_dir tmp;
    predicate_lexicon lex = predicate_lexicon::base();

    try {
        lex.load_extension(tmp.sub("missing.json"));
        FAIL_CHECK("expected io error");
    } catch (const error& e) {
        CHECK(e.code() == errc::io);
        CHECK(std::string(e.what()).find("cannot read lexicon file") != std::string::npos);
    }

    auto bad_pred = tmp.sub("bad_pred.json");
    testutil::write_file(bad_pred, R"({"predicates": {"frob": 5}})");
    try {
        lex.load_extension(bad_pred);
        FAIL_CHECK("expected parse error");
    } catch (const error& e) {
        CHECK(e.code() == errc::parse);
        CHECK(std::string(e.what()).find("predicates.frob") != std::string::npos);
    }

    auto bad_val = tmp.sub("bad_val.json");
    testutil::write_file(bad_val, R"({"valence": {"meh": "warm"}})");
    valence_lexicon v = valence_lexicon::base();
    try {
        v.load_extension(bad_val);
        FAIL_CHECK("expected parse error");
    } catch (const error& e) {
        CHECK(e.code() == errc::parse);
        CHECK(std::string(e.what()).find("valence.meh") != std::string::npos);
    }
}

TEST_CASE("gazetteers answer membership for the bundled vocabulary") {
    CHECK(gazetteer::place("savannah"));
    CHECK(gazetteer::place("portland"));
    CHECK(gazetteer::place("paris"));
    CHECK_FALSE(gazetteer::place("interview"));

    CHECK(gazetteer::first_name("luis"));
    CHECK(gazetteer::first_name("elena"));
    CHECK(gazetteer::first_name("dane"));
    CHECK_FALSE(gazetteer::first_name("dana"));

    CHECK(gazetteer::female_person("sister"));
    CHECK(gazetteer::male_person("brother"));
    CHECK(gazetteer::person_term("recruiter"));
    CHECK(gazetteer::person_term("roommate"));
    CHECK(gazetteer::person_term("cousin"));
    CHECK_FALSE(gazetteer::person_term("studio"));

    CHECK(gazetteer::event_term("interview"));
    CHECK(gazetteer::event_term("wedding"));
    CHECK(gazetteer::event_term("housewarming"));
    CHECK(gazetteer::event_term("party"));
    CHECK(gazetteer::activity_term("pottery"));
    CHECK(gazetteer::activity_term("spanish"));
    CHECK(gazetteer::activity_term("bootcamp"));
    CHECK(gazetteer::organization_term("studio"));
    CHECK(gazetteer::organization_term("university"));
}

TEST_CASE("the tag vocabulary is closed") {
    for (const char* t :
         {"person", "place", "event", "datetime", "object", "emotion", "activity", "organization"})
        CHECK_MESSAGE(tag::known(t), t);
    CHECK_FALSE(tag::known("banana"));
    CHECK_FALSE(tag::known(""));
}

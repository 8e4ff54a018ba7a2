#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "core/error.hpp"
#include "core/store.hpp"
#include "helpers.hpp"

using namespace atant;
using testutil::at;
using testutil::make_trace;
using testutil::temp_dir;

namespace {

void check_error(errc code, const std::string& prefix, const std::function<void()>& fn) {
    try {
        fn();
        FAIL_CHECK("expected error with message starting '" << prefix << "'");
    } catch (const error& e) {
        CHECK(e.code() == code);
        CHECK_MESSAGE(std::string(e.what()).rfind(prefix, 0) == 0, e.what());
    }
}

}  // namespace

TEST_CASE("auto ids are sequential and zero padded") {
    temp_dir tmp;
    trace_store s;
    s.open(tmp.path());
    CHECK(s.put_trace("a", make_trace("a", "x", "p", "1", "2026-03-02T09:00:00-08:00")) ==
          "t000001");
    CHECK(s.put_trace("a", make_trace("a", "x", "p", "2", "2026-03-02T09:01:00-08:00")) ==
          "t000002");
    CHECK(s.put_trace("b", make_trace("b", "y", "p", "3", "2026-03-02T09:02:00-08:00")) ==
          "t000003");
    CHECK(s.contexts() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("explicit ids are honored and auto assignment skips over them") {
    temp_dir tmp;
    trace_store s;
    s.open(tmp.path());
    auto put_auto = [&] {
        return s.put_trace("a", make_trace("a", "x", "p", "o", "2026-03-02T09:00:00-08:00"));
    };
    CHECK(put_auto() == "t000001");
    fact_trace named = make_trace("a", "x", "p", "o", "2026-03-02T09:00:00-08:00");
    named.trace_id = "t000005";
    CHECK(s.put_trace("a", named) == "t000005");
    // The used-id counter advances once per put, so the next automatic
    // ids fill the gap and then hop the reserved one.
    CHECK(put_auto() == "t000003");
    CHECK(put_auto() == "t000004");
    CHECK(put_auto() == "t000006");
    CHECK(put_auto() == "t000007");

    fact_trace dup = make_trace("a", "x", "p", "o", "2026-03-02T09:00:00-08:00");
    dup.trace_id = "t000001";
    check_error(errc::validation, "duplicate trace_id t000001", [&] { s.put_trace("a", dup); });
}

TEST_CASE("new traces are validated before touching the log") {
    temp_dir tmp;
    trace_store s;
    s.open(tmp.path());
    fact_trace ok = make_trace("a", "x", "p", "o", "2026-03-02T09:00:00-08:00");

    check_error(errc::invalid_argument, "empty context id", [&] { s.put_trace("", ok); });

    fact_trace wrong_ctx = ok;
    check_error(errc::invalid_argument, "trace context does not match",
                [&] { s.put_trace("b", wrong_ctx); });

    fact_trace no_subject = ok;
    no_subject.subject.clear();
    check_error(errc::invalid_argument, "trace subject/predicate must be non-empty",
                [&] { s.put_trace("a", no_subject); });

    fact_trace no_queries = ok;
    no_queries.predicted_queries.clear();
    check_error(errc::validation, "trace must carry at least one predicted query",
                [&] { s.put_trace("a", no_queries); });

    fact_trace not_active = ok;
    not_active.status = trace_status::superseded;
    check_error(errc::invalid_argument, "new traces must be active",
                [&] { s.put_trace("a", not_active); });

    fact_trace dangling_time = ok;
    dangling_time.resolved_time = at("2026-03-05T00:00:00-08:00");
    dangling_time.resolved_kind = temporal_kind::none;
    check_error(errc::invalid_argument, "resolved_time requires a resolution kind",
                [&] { s.put_trace("a", dangling_time); });

    CHECK(s.snapshot("a").traces.empty());
}

TEST_CASE("supersession keeps history and rejects bad targets") {
    temp_dir tmp;
    trace_store s;
    s.open(tmp.path());
    std::string id1 =
        s.put_trace("a", make_trace("a", "appointment", "scheduled_for", "tuesday",
                                    "2026-03-02T09:00:00-08:00"));
    std::string id2 = s.supersede(
        "a", id1,
        make_trace("a", "appointment", "scheduled_for", "thursday", "2026-03-04T18:00:00-08:00"));

    const fact_trace* old_t = s.find(id1);
    REQUIRE(old_t);
    CHECK(old_t->status == trace_status::superseded);
    CHECK(old_t->superseded_by == id2);
    const fact_trace* new_t = s.find(id2);
    REQUIRE(new_t);
    CHECK(new_t->status == trace_status::active);
    CHECK_FALSE(new_t->superseded_by.has_value());

    check_error(errc::supersession, "unknown trace t000099", [&] {
        s.supersede("a", "t000099",
                    make_trace("a", "x", "p", "o", "2026-03-04T18:00:00-08:00"));
    });
    check_error(errc::supersession, "trace " + id1 + " already superseded", [&] {
        s.supersede("a", id1, make_trace("a", "x", "p", "o", "2026-03-04T18:00:00-08:00"));
    });

    s.put_trace("b", make_trace("b", "y", "p", "o", "2026-03-02T09:00:00-08:00"));
    check_error(errc::supersession, "supersession across contexts", [&] {
        s.supersede("b", id2, make_trace("b", "y", "p", "o", "2026-03-05T09:00:00-08:00"));
    });
}

TEST_CASE("superseding an early trace after many appends stays consistent") {
    temp_dir tmp;
    trace_store s;
    s.open(tmp.path());
    std::string first =
        s.put_trace("a", make_trace("a", "x", "p", "0", "2026-03-02T09:00:00-08:00"));
    for (int i = 1; i <= 150; ++i)
        s.put_trace("a", make_trace("a", "x" + std::to_string(i), "p", std::to_string(i),
                                    "2026-03-02T09:00:00-08:00"));
    std::string repl =
        s.supersede("a", first, make_trace("a", "x", "p", "new", "2026-03-03T09:00:00-08:00"));
    CHECK(s.find(first)->status == trace_status::superseded);
    CHECK(s.find(first)->superseded_by == repl);
    CHECK(s.find(repl)->status == trace_status::active);
}

TEST_CASE("snapshots sort by stored time then id") {
    temp_dir tmp;
    trace_store s;
    s.open(tmp.path());
    s.put_trace("a", make_trace("a", "late", "p", "o", "2026-03-05T09:00:00-08:00"));
    s.put_trace("a", make_trace("a", "early", "p", "o", "2026-03-01T09:00:00-08:00"));
    s.put_trace("a", make_trace("a", "tied", "p", "o", "2026-03-01T09:00:00-08:00"));
    store_snapshot snap = s.snapshot("a");
    REQUIRE(snap.traces.size() == 3);
    CHECK(snap.traces[0].subject == "early");   // t000002
    CHECK(snap.traces[1].subject == "tied");    // t000003, same instant, later id
    CHECK(snap.traces[2].subject == "late");
    CHECK(snap.context == "a");
    CHECK(s.snapshot("nope").traces.empty());
}

TEST_CASE("reopening replays the log to an identical snapshot") {
    std::mt19937 rng(0xd00d);
    const std::vector<std::string> contexts = {"alpha", "beta", "gamma"};
    const std::vector<std::string> subjects = {"appointment", "wedding", "class", "plan"};
    const std::vector<std::string> predicates = {"scheduled_for", "is", "lives_in"};

    for (int seq = 0; seq < 10; ++seq) {
        temp_dir tmp;
        std::map<std::string, store_snapshot> before;
        {
            trace_store s;
            s.open(tmp.path());
            int ops = 5 + int(rng() % 25);
            for (int i = 0; i < ops; ++i) {
                const std::string& ctx = contexts[rng() % contexts.size()];
                bool try_supersede = rng() % 10 < 3;
                std::vector<std::string> active;
                for (const fact_trace* t : s.context_traces(ctx))
                    if (t->status == trace_status::active) active.push_back(t->trace_id);
                fact_trace t = make_trace(ctx, subjects[rng() % subjects.size()],
                                          predicates[rng() % predicates.size()],
                                          "o" + std::to_string(int(rng() % 1000)),
                                          "2026-03-02T09:00:00-08:00");
                t.stored_at.instant += std::chrono::minutes{rng() % 5000};
                if (rng() % 2) {
                    t.resolved_time = at("2026-03-05T00:00:00-08:00");
                    t.resolved_kind = temporal_kind::relative;
                    t.resolved_direction = temporal_direction::future;
                }
                if (try_supersede && !active.empty())
                    s.supersede(ctx, active[rng() % active.size()], t);
                else
                    s.put_trace(ctx, t);
            }
            for (const std::string& ctx : s.contexts()) before[ctx] = s.snapshot(ctx);
            s.close();
        }
        trace_store reopened;
        reopened.open(tmp.path());
        CHECK(reopened.contexts().size() == before.size());
        for (const auto& [ctx, snap] : before) {
            store_snapshot after = reopened.snapshot(ctx);
            CHECK(after.traces == snap.traces);
        }
    }
}

TEST_CASE("log layout is a version byte plus length-prefixed json records") {
    temp_dir tmp;
    {
        trace_store s;
        s.open(tmp.path());
        std::string id =
            s.put_trace("a", make_trace("a", "x", "p", "one", "2026-03-02T09:00:00-08:00"));
        s.put_trace("a", make_trace("a", "y", "p", "two", "2026-03-02T09:01:00-08:00"));
        s.supersede("a", id,
                    make_trace("a", "x", "p", "three", "2026-03-02T09:02:00-08:00"));
        s.close();
    }
    std::string bytes = testutil::read_file(tmp.path() / "traces.log");
    REQUIRE(bytes.size() > 5);
    CHECK(bytes[0] == 0x01);

    std::vector<std::string> ops;
    size_t pos = 1;
    while (pos < bytes.size()) {
        REQUIRE(pos + 4 <= bytes.size());
        uint32_t len = uint32_t(uint8_t(bytes[pos])) | uint32_t(uint8_t(bytes[pos + 1])) << 8 |
                       uint32_t(uint8_t(bytes[pos + 2])) << 16 |
                       uint32_t(uint8_t(bytes[pos + 3])) << 24;
        REQUIRE(pos + 4 + len <= bytes.size());
        auto record = nlohmann::ordered_json::parse(bytes.substr(pos + 4, len));
        ops.push_back(record.at("op").get<std::string>());
        CHECK(record.at("trace").contains("trace_id"));
        if (ops.back() == "supersede") CHECK(record.at("old") == "t000001");
        pos += 4 + len;
    }
    CHECK(ops == std::vector<std::string>{"put", "put", "supersede"});
}

TEST_CASE("damaged logs fail to open with the failing byte offset") {
    auto open_corrupt = [](const std::string& bytes, const std::string& prefix) {
        temp_dir tmp;
        testutil::write_file(tmp.path() / "traces.log", bytes);
        trace_store s;
        check_error(errc::corrupt_log, prefix, [&] { s.open(tmp.path()); });
    };

    open_corrupt("", "store log empty: missing version byte at offset 0");
    open_corrupt("\x02", "unsupported store log version at offset 0");
    open_corrupt(std::string("\x01\x05\x00", 3), "truncated length prefix at offset 1");
    open_corrupt(std::string("\x01\x00\x00\x00\x00", 5), "implausible record length at offset 1");
    open_corrupt(std::string("\x01\xFF\xFF\xFF\xFF", 5), "implausible record length at offset 1");
    open_corrupt(std::string("\x01\x0A\x00\x00\x00", 5) + "abc", "truncated record at offset 1");
    open_corrupt(std::string("\x01\x03\x00\x00\x00", 5) + "{x}", "corrupt record at offset 1");
    std::string unknown_op = R"({"op":"frob"})";
    open_corrupt(std::string("\x01", 1) + std::string{char(unknown_op.size()), 0, 0, 0} +
                     unknown_op,
                 "corrupt record at offset 1");

    // A valid first record places the second record's offset after it.
    temp_dir tmp;
    {
        trace_store s;
        s.open(tmp.path());
        s.put_trace("a", make_trace("a", "x", "p", "o", "2026-03-02T09:00:00-08:00"));
        s.close();
    }
    std::string good = testutil::read_file(tmp.path() / "traces.log");
    std::string tail = "zzz";
    testutil::write_file(tmp.path() / "traces.log",
                         good + std::string{char(tail.size()), 0, 0, 0} + tail);
    trace_store s;
    check_error(errc::corrupt_log, "corrupt record at offset " + std::to_string(good.size()),
                [&] { s.open(tmp.path()); });
}

TEST_CASE("latest_active_slot prefers exact subjects, hints, then recency") {
    temp_dir tmp;
    trace_store s;
    s.open(tmp.path());

    SUBCASE("exact subject beats a token-subset alias") {
        std::string alias_id =
            s.put_trace("a", make_trace("a", "dentist appointment", "scheduled_for", "tuesday",
                                        "2026-03-03T09:00:00-08:00"));
        // Aliasing works in both subset directions.
        CHECK(s.latest_active_slot("a", "appointment", "scheduled_for") == alias_id);
        CHECK(s.latest_active_slot("a", "downtown dentist appointment", "scheduled_for") ==
              alias_id);
        // An exact-subject trace wins even when it is older than the alias.
        std::string exact_id =
            s.put_trace("a", make_trace("a", "appointment", "scheduled_for", "monday",
                                        "2026-03-01T09:00:00-08:00"));
        CHECK(s.latest_active_slot("a", "appointment", "scheduled_for") == exact_id);
        s.supersede("a", exact_id,
                    make_trace("a", "appointment", "scheduled_for", "friday",
                               "2026-03-04T09:00:00-08:00"));
        CHECK(s.latest_active_slot("a", "appointment", "scheduled_for") == "t000003");
    }

    SUBCASE("object hints pick between same-slot duplicates") {
        std::string older = s.put_trace(
            "a", make_trace("a", "class", "scheduled_for", "wednesday evening",
                            "2026-03-01T09:00:00-08:00"));
        std::string newer = s.put_trace(
            "a", make_trace("a", "class", "scheduled_for", "friday morning",
                            "2026-03-02T09:00:00-08:00"));
        std::vector<std::string> hint = {"wednesday"};
        CHECK(s.latest_active_slot("a", "class", "scheduled_for", hint) == older);
        CHECK(s.latest_active_slot("a", "class", "scheduled_for") == newer);
    }

    SUBCASE("no match yields nothing") {
        s.put_trace("a", make_trace("a", "class", "scheduled_for", "wednesday",
                                    "2026-03-01T09:00:00-08:00"));
        CHECK_FALSE(s.latest_active_slot("a", "class", "lives_in").has_value());
        CHECK_FALSE(s.latest_active_slot("a", "garden", "scheduled_for").has_value());
        CHECK_FALSE(s.latest_active_slot("b", "class", "scheduled_for").has_value());
    }
}

TEST_CASE("operations on a closed store are rejected") {
    temp_dir tmp;
    trace_store s;
    s.open(tmp.path());
    s.close();
    CHECK_FALSE(s.is_open());
    trace_store again;
    again.open(tmp.path());
    check_error(errc::invalid_argument, "store already open", [&] { again.open(tmp.path()); });
}

#include "core/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "core/error.hpp"
#include "core/write_path.hpp"

namespace atant {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
    fail(errc::parse, path + ": " + what);
}

const ordered_json& require(const ordered_json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) parse_fail(path + "." + key, "missing required field");
    return *it;
}

std::string require_string(const ordered_json& j, const char* key, const std::string& path) {
    const ordered_json& v = require(j, key, path);
    if (!v.is_string()) parse_fail(path + "." + key, "expected string");
    return v.get<std::string>();
}

std::vector<std::string> require_string_array(const ordered_json& j, const char* key,
                                              const std::string& path) {
    const ordered_json& v = require(j, key, path);
    if (!v.is_array()) parse_fail(path + "." + key, "expected array of strings");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string()) parse_fail(path + "." + key, "expected array of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

sim_time require_time(const ordered_json& j, const char* key, const std::string& path) {
    std::string raw = require_string(j, key, path);
    auto t = parse_sim_time(raw);
    if (!t) parse_fail(path + "." + key, "invalid timestamp '" + raw + "'");
    return *t;
}

void check_keys(const ordered_json& j, std::initializer_list<std::string_view> known,
                const std::string& path, std::vector<lint_finding>* warnings) {
    if (!warnings) return;
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end())
            warnings->push_back({lint_finding::severity::warning, path + "." + key,
                                 "unknown key ignored"});
    }
}

expected_store parse_expected_store(const ordered_json& j, const std::string& path,
                                    std::vector<lint_finding>* warnings) {
    if (!j.is_object()) parse_fail(path, "expected object");
    check_keys(j, {"keywords", "expected_classification", "expected_type_tags"}, path, warnings);
    expected_store s;
    s.keywords = require_string_array(j, "keywords", path);
    if (auto it = j.find("expected_classification"); it != j.end()) {
        if (!it->is_string()) parse_fail(path + ".expected_classification", "expected string");
        s.expected_classification = it->get<std::string>();
    }
    if (auto it = j.find("expected_type_tags"); it != j.end()) {
        if (!it->is_array()) parse_fail(path + ".expected_type_tags", "expected array of strings");
        std::vector<std::string> tags;
        for (const auto& e : *it) {
            if (!e.is_string())
                parse_fail(path + ".expected_type_tags", "expected array of strings");
            tags.push_back(e.get<std::string>());
        }
        s.expected_type_tags = std::move(tags);
    }
    return s;
}

story_batch parse_batch(const ordered_json& j, const std::string& path,
                        std::vector<lint_finding>* warnings) {
    if (!j.is_object()) parse_fail(path, "expected object");
    check_keys(j, {"batch_index", "simulated_timestamp", "turns", "expected_stores"}, path,
               warnings);
    story_batch b;
    const ordered_json& idx = require(j, "batch_index", path);
    if (!idx.is_number_integer()) parse_fail(path + ".batch_index", "expected integer");
    b.batch_index = idx.get<int>();
    b.simulated_timestamp = require_time(j, "simulated_timestamp", path);
    b.turns = require_string_array(j, "turns", path);
    const ordered_json& stores = require(j, "expected_stores", path);
    if (!stores.is_array()) parse_fail(path + ".expected_stores", "expected array");
    for (size_t i = 0; i < stores.size(); ++i)
        b.expected_stores.push_back(parse_expected_store(
            stores[i], path + ".expected_stores[" + std::to_string(i) + "]", warnings));
    return b;
}

verification_question parse_question(const ordered_json& j, const std::string& path,
                                     std::vector<lint_finding>* warnings) {
    if (!j.is_object()) parse_fail(path, "expected object");
    check_keys(j,
               {"question_id", "query_text", "expected_keywords", "expected_query_type",
                "temporal_expectation", "emotion_expectation", "ask_at", "trap"},
               path, warnings);
    verification_question q;
    q.question_id = require_string(j, "question_id", path);
    q.query_text = require_string(j, "query_text", path);
    q.expected_keywords = require_string_array(j, "expected_keywords", path);
    if (auto it = j.find("expected_query_type"); it != j.end()) {
        if (!it->is_string()) parse_fail(path + ".expected_query_type", "expected string");
        q.expected_query_type = it->get<std::string>();
    }
    if (auto it = j.find("temporal_expectation"); it != j.end()) {
        const std::string tpath = path + ".temporal_expectation";
        if (!it->is_object()) parse_fail(tpath, "expected object");
        check_keys(*it, {"type", "direction"}, tpath, warnings);
        temporal_expectation te;
        auto type = temporal_kind_from(require_string(*it, "type", tpath));
        if (!type || *type == temporal_kind::none)
            parse_fail(tpath + ".type", "expected absolute, relative or sequence");
        auto dir = temporal_direction_from(require_string(*it, "direction", tpath));
        if (!dir || *dir == temporal_direction::none)
            parse_fail(tpath + ".direction", "expected past, future or present");
        te.type = *type;
        te.direction = *dir;
        q.temporal = te;
    }
    if (auto it = j.find("emotion_expectation"); it != j.end()) {
        const std::string epath = path + ".emotion_expectation";
        if (!it->is_object()) parse_fail(epath, "expected object");
        check_keys(*it, {"detected", "direction"}, epath, warnings);
        const ordered_json& det = require(*it, "detected", epath);
        if (!det.is_boolean()) parse_fail(epath + ".detected", "expected boolean");
        emotion_expectation ee;
        ee.detected = det.get<bool>();
        auto dir = emotion_direction_from(require_string(*it, "direction", epath));
        if (!dir) parse_fail(epath + ".direction", "expected positive, negative or neutral");
        ee.direction = *dir;
        q.emotion = ee;
    }
    q.ask_at = require_time(j, "ask_at", path);
    const ordered_json& trap = require(j, "trap", path);
    if (!trap.is_boolean()) parse_fail(path + ".trap", "expected boolean");
    q.trap = trap.get<bool>();
    return q;
}

}  // namespace

std::string_view to_string(lint_finding::severity s) {
    return s == lint_finding::severity::error ? "error" : "warning";
}

story parse_story(const ordered_json& doc, std::vector<lint_finding>* warnings) {
    if (!doc.is_object()) parse_fail("story", "expected top-level object");
    check_keys(doc, {"meta", "batches", "questions"}, "story", warnings);

    story s;
    const ordered_json& meta = require(doc, "meta", "story");
    if (!meta.is_object()) parse_fail("story.meta", "expected object");
    check_keys(meta, {"story_id", "category", "simulated_duration", "title"}, "meta", warnings);
    s.meta.story_id = require_string(meta, "story_id", "meta");
    s.meta.category = require_string(meta, "category", "meta");
    s.meta.simulated_duration = require_string(meta, "simulated_duration", "meta");
    s.meta.title = require_string(meta, "title", "meta");

    const ordered_json& batches = require(doc, "batches", "story");
    if (!batches.is_array()) parse_fail("story.batches", "expected array");
    for (size_t i = 0; i < batches.size(); ++i)
        s.batches.push_back(
            parse_batch(batches[i], "batches[" + std::to_string(i) + "]", warnings));

    const ordered_json& questions = require(doc, "questions", "story");
    if (!questions.is_array()) parse_fail("story.questions", "expected array");
    for (size_t i = 0; i < questions.size(); ++i)
        s.questions.push_back(
            parse_question(questions[i], "questions[" + std::to_string(i) + "]", warnings));
    return s;
}

nlohmann::ordered_json story_to_json(const story& s) {
    ordered_json doc;
    doc["meta"] = {{"story_id", s.meta.story_id},
                   {"category", s.meta.category},
                   {"simulated_duration", s.meta.simulated_duration},
                   {"title", s.meta.title}};
    doc["batches"] = ordered_json::array();
    for (const story_batch& b : s.batches) {
        ordered_json jb;
        jb["batch_index"] = b.batch_index;
        jb["simulated_timestamp"] = to_iso(b.simulated_timestamp);
        jb["turns"] = b.turns;
        jb["expected_stores"] = ordered_json::array();
        for (const expected_store& e : b.expected_stores) {
            ordered_json je;
            je["keywords"] = e.keywords;
            if (e.expected_classification) je["expected_classification"] = *e.expected_classification;
            if (e.expected_type_tags) je["expected_type_tags"] = *e.expected_type_tags;
            jb["expected_stores"].push_back(std::move(je));
        }
        doc["batches"].push_back(std::move(jb));
    }
    doc["questions"] = ordered_json::array();
    for (const verification_question& q : s.questions) {
        ordered_json jq;
        jq["question_id"] = q.question_id;
        jq["query_text"] = q.query_text;
        jq["expected_keywords"] = q.expected_keywords;
        if (q.expected_query_type) jq["expected_query_type"] = *q.expected_query_type;
        if (q.temporal)
            jq["temporal_expectation"] = {{"type", to_string(q.temporal->type)},
                                          {"direction", to_string(q.temporal->direction)}};
        if (q.emotion)
            jq["emotion_expectation"] = {{"detected", q.emotion->detected},
                                         {"direction", to_string(q.emotion->direction)}};
        jq["ask_at"] = to_iso(q.ask_at);
        jq["trap"] = q.trap;
        doc["questions"].push_back(std::move(jq));
    }
    return doc;
}

std::string serialize_story(const story& s) { return story_to_json(s).dump(2) + "\n"; }

std::vector<lint_finding> validate_story(const story& s) {
    std::vector<lint_finding> out;
    auto err = [&out](std::string path, std::string msg) {
        out.push_back({lint_finding::severity::error, std::move(path), std::move(msg)});
    };
    auto warn = [&out](std::string path, std::string msg) {
        out.push_back({lint_finding::severity::warning, std::move(path), std::move(msg)});
    };

    if (s.meta.story_id.empty()) err("meta.story_id", "must be non-empty");
    const auto& cats = story_categories();
    if (std::find(cats.begin(), cats.end(), s.meta.category) == cats.end())
        err("meta.category", "unknown category '" + s.meta.category + "'");

    if (s.batches.empty()) err("batches", "at least one batch required");
    const sim_time* prev = nullptr;
    for (size_t i = 0; i < s.batches.size(); ++i) {
        const story_batch& b = s.batches[i];
        std::string path = "batches[" + std::to_string(i) + "]";
        if (b.batch_index < 0) err(path + ".batch_index", "must be >= 0");
        if (b.batch_index != static_cast<int>(i))
            warn(path + ".batch_index", "does not match position " + std::to_string(i));
        if (prev && b.simulated_timestamp.instant < prev->instant)
            err(path + ".simulated_timestamp",
                "timestamps must be non-decreasing (batch_index " +
                    std::to_string(b.batch_index) + ")");
        prev = &b.simulated_timestamp;
        if (b.turns.empty()) err(path + ".turns", "must be non-empty");
        for (size_t k = 0; k < b.turns.size(); ++k)
            if (b.turns[k].empty()) err(path + ".turns[" + std::to_string(k) + "]", "empty turn");
        for (size_t k = 0; k < b.expected_stores.size(); ++k) {
            const expected_store& e = b.expected_stores[k];
            std::string epath = path + ".expected_stores[" + std::to_string(k) + "]";
            if (e.keywords.empty()) err(epath + ".keywords", "must be non-empty");
            for (const std::string& w : e.keywords)
                if (w.empty()) err(epath + ".keywords", "contains an empty string");
            if (e.expected_classification && !input_label_from(*e.expected_classification))
                warn(epath + ".expected_classification",
                     "unknown label '" + *e.expected_classification + "'");
            if (e.expected_type_tags)
                for (const std::string& t : *e.expected_type_tags)
                    if (!tag::known(t)) warn(epath + ".expected_type_tags", "unknown tag '" + t + "'");
        }
    }

    if (s.questions.empty()) err("questions", "at least one question required");
    std::set<std::string> qids;
    const sim_time* last_batch = s.batches.empty() ? nullptr : &s.batches.back().simulated_timestamp;
    for (size_t i = 0; i < s.questions.size(); ++i) {
        const verification_question& q = s.questions[i];
        std::string path = "questions[" + std::to_string(i) + "]";
        if (q.question_id.empty()) err(path + ".question_id", "must be non-empty");
        if (!qids.insert(q.question_id).second)
            err(path + ".question_id", "duplicate id '" + q.question_id + "'");
        if (q.query_text.empty()) err(path + ".query_text", "must be non-empty");
        if (q.expected_keywords.empty()) err(path + ".expected_keywords", "must be non-empty");
        for (const std::string& w : q.expected_keywords)
            if (w.empty()) err(path + ".expected_keywords", "contains an empty string");
        if (q.trap &&
            (q.expected_keywords.size() != 1 || q.expected_keywords[0] != kNoFactMarker))
            err(path + ".expected_keywords",
                "trap questions must expect exactly [\"" + std::string(kNoFactMarker) + "\"]");
        if (last_batch && q.ask_at.instant < last_batch->instant)
            err(path + ".ask_at", "precedes the last batch timestamp");
        if (q.expected_query_type && !query_label_from(*q.expected_query_type))
            warn(path + ".expected_query_type", "unknown label '" + *q.expected_query_type + "'");
    }
    return out;
}

std::vector<story> load_corpus(const std::filesystem::path& path,
                               std::vector<lint_finding>* findings) {
    namespace fs = std::filesystem;
    if (!fs::exists(path)) fail(errc::io, "corpus path does not exist: " + path.string());

    std::vector<fs::path> files;
    if (fs::is_directory(path)) {
        for (const auto& e : fs::directory_iterator(path))
            if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        if (files.empty() && findings)
            findings->push_back({lint_finding::severity::warning, path.string(),
                                 "no story files found"});
    } else {
        files.push_back(path);
    }

    std::vector<story> stories;
    for (const fs::path& file : files) {
        std::ifstream in(file);
        if (!in) fail(errc::io, "cannot open " + file.string());
        ordered_json doc;
        try {
            doc = ordered_json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            fail(errc::parse, file.string() + ": " + e.what());
        }
        std::vector<lint_finding> local;
        story s;
        try {
            s = parse_story(doc, &local);
        } catch (const error& e) {
            fail(errc::parse, file.string() + ": " + e.what());
        }
        for (const lint_finding& f : validate_story(s)) local.push_back(f);
        for (lint_finding& f : local) {
            f.path = file.filename().string() + ": " + f.path;
            if (f.sev == lint_finding::severity::error)
                fail(errc::validation, f.path + ": " + f.message);
            if (findings) findings->push_back(f);
        }
        stories.push_back(std::move(s));
    }

    std::sort(stories.begin(), stories.end(),
              [](const story& a, const story& b) { return a.meta.story_id < b.meta.story_id; });
    for (size_t i = 1; i < stories.size(); ++i)
        if (stories[i].meta.story_id == stories[i - 1].meta.story_id)
            fail(errc::validation, "duplicate story_id '" + stories[i].meta.story_id + "'");
    return stories;
}

std::vector<lint_finding> lint_corpus(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    if (!fs::exists(path)) fail(errc::io, "corpus path does not exist: " + path.string());

    std::vector<fs::path> files;
    if (fs::is_directory(path)) {
        for (const auto& e : fs::directory_iterator(path))
            if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(path);
    }

    std::vector<lint_finding> all;
    if (files.empty()) {
        all.push_back({lint_finding::severity::warning, path.string(), "no story files found"});
        return all;
    }

    std::map<std::string, std::string> id_to_file;
    for (const fs::path& file : files) {
        std::string name = file.filename().string();
        std::ifstream in(file);
        if (!in) {
            all.push_back({lint_finding::severity::error, name, "cannot open file"});
            continue;
        }
        ordered_json doc;
        try {
            doc = ordered_json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            all.push_back({lint_finding::severity::error, name, e.what()});
            continue;
        }
        std::vector<lint_finding> local;
        story s;
        try {
            s = parse_story(doc, &local);
        } catch (const error& e) {
            all.push_back({lint_finding::severity::error, name, e.what()});
            continue;
        }
        for (const lint_finding& f : validate_story(s)) local.push_back(f);
        for (lint_finding& f : local) {
            f.path = name + ": " + f.path;
            all.push_back(f);
        }
        auto [it, fresh] = id_to_file.emplace(s.meta.story_id, name);
        if (!fresh) {
            all.push_back({lint_finding::severity::error, name,
                           "duplicate story_id '" + s.meta.story_id + "' (also in " + it->second +
                               ")"});
        }
    }
    return all;
}

corpus_summary corpus_stats(const std::vector<story>& stories) {
    corpus_summary sum;
    sum.stories = stories.size();
    for (const story& s : stories) {
        sum.batches += s.batches.size();
        for (const story_batch& b : s.batches) sum.turns += b.turns.size();
        sum.questions += s.questions.size();
        ++sum.per_category[s.meta.category];
    }
    return sum;
}

}  // namespace atant

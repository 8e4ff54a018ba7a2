#include "core/store.hpp"

#include <algorithm>
#include <cstdio>
#include <unordered_set>

#include "core/error.hpp"
#include "core/text.hpp"

namespace atant {

namespace {
constexpr char kLogVersion = 0x01;
constexpr uint32_t kMaxRecordBytes = 64u * 1024u * 1024u;
constexpr const char* kLogName = "traces.log";
}  // namespace

std::string_view to_string(trace_status s) {
    return s == trace_status::active ? "active" : "superseded";
}

nlohmann::ordered_json trace_to_json(const fact_trace& t, bool include_status) {
    nlohmann::ordered_json j;
    j["trace_id"] = t.trace_id;
    j["context"] = t.context;
    j["subject"] = t.subject;
    j["predicate"] = t.predicate;
    j["object"] = t.object;
    j["type_tags"] = t.type_tags;
    j["stored_at"] = to_iso(t.stored_at);
    if (t.resolved_time)
        j["resolved_time"] = to_iso(*t.resolved_time);
    else
        j["resolved_time"] = nullptr;
    j["resolved_kind"] = std::string(to_string(t.resolved_kind));
    j["resolved_direction"] = std::string(to_string(t.resolved_direction));
    if (include_status) {
        j["status"] = std::string(to_string(t.status));
        if (t.superseded_by)
            j["superseded_by"] = *t.superseded_by;
        else
            j["superseded_by"] = nullptr;
    }
    j["predicted_queries"] = t.predicted_queries;
    j["source_text"] = t.source_text;
    return j;
}

fact_trace trace_from_json(const nlohmann::ordered_json& j) {
    fact_trace t;
    t.trace_id = j.at("trace_id").get<std::string>();
    t.context = j.at("context").get<std::string>();
    t.subject = j.at("subject").get<std::string>();
    t.predicate = j.at("predicate").get<std::string>();
    t.object = j.at("object").get<std::string>();
    t.type_tags = j.at("type_tags").get<std::vector<std::string>>();
    auto stored = parse_sim_time(j.at("stored_at").get<std::string>());
    if (!stored) fail(errc::parse, "bad stored_at timestamp");
    t.stored_at = *stored;
    if (j.contains("resolved_time") && !j.at("resolved_time").is_null()) {
        auto r = parse_sim_time(j.at("resolved_time").get<std::string>());
        if (!r) fail(errc::parse, "bad resolved_time timestamp");
        t.resolved_time = *r;
    }
    if (auto k = temporal_kind_from(j.value("resolved_kind", "none"))) t.resolved_kind = *k;
    if (auto d = temporal_direction_from(j.value("resolved_direction", "none")))
        t.resolved_direction = *d;
    t.predicted_queries = j.at("predicted_queries").get<std::vector<std::string>>();
    t.source_text = j.at("source_text").get<std::string>();
    return t;
}

trace_store::~trace_store() {
    if (open_) {
        try {
            close();
        } catch (...) {
        }
    }
}

void trace_store::open(const std::filesystem::path& dir) {
    if (open_) fail(errc::invalid_argument, "store already open");
    dir_ = dir;
    traces_.clear();
    by_id_.clear();
    by_context_.clear();
    seq_ = 0;

    std::filesystem::create_directories(dir_);
    auto log_path = dir_ / kLogName;
    if (std::filesystem::exists(log_path)) {
        std::ifstream in(log_path, std::ios::binary);
        if (!in) fail(errc::io, "cannot read store log " + log_path.string());
        replay(in);
    }
    log_.open(log_path, std::ios::binary | std::ios::app);
    if (!log_) fail(errc::io, "cannot append to store log " + log_path.string());
    if (std::filesystem::file_size(log_path) == 0) {
        log_.put(kLogVersion);
        log_.flush();
    }
    open_ = true;
}

void trace_store::close() {
    if (!open_) return;
    log_.flush();
    log_.close();
    open_ = false;
    traces_.clear();
    by_id_.clear();
    by_context_.clear();
    seq_ = 0;
}

void trace_store::replay(std::ifstream& in) {
    char version = 0;
    if (!in.get(version)) fail(errc::corrupt_log, "store log empty: missing version byte at offset 0");
    if (version != kLogVersion)
        fail(errc::corrupt_log, "unsupported store log version at offset 0");
    uint64_t offset = 1;
    for (;;) {
        unsigned char len_bytes[4];
        in.read(reinterpret_cast<char*>(len_bytes), 4);
        std::streamsize got = in.gcount();
        if (got == 0) break;  // clean end
        if (got < 4)
            fail(errc::corrupt_log,
                 "truncated length prefix at offset " + std::to_string(offset));
        uint32_t len = static_cast<uint32_t>(len_bytes[0]) |
                       (static_cast<uint32_t>(len_bytes[1]) << 8) |
                       (static_cast<uint32_t>(len_bytes[2]) << 16) |
                       (static_cast<uint32_t>(len_bytes[3]) << 24);
        if (len == 0 || len > kMaxRecordBytes)
            fail(errc::corrupt_log, "implausible record length at offset " + std::to_string(offset));
        std::string payload(len, '\0');
        in.read(payload.data(), static_cast<std::streamsize>(len));
        if (in.gcount() != static_cast<std::streamsize>(len))
            fail(errc::corrupt_log, "truncated record at offset " + std::to_string(offset));
        nlohmann::ordered_json record;
        try {
            record = nlohmann::ordered_json::parse(payload);
            std::string op = record.at("op").get<std::string>();
            if (op == "put") {
                apply_put(trace_from_json(record.at("trace")));
            } else if (op == "supersede") {
                apply_supersede(record.at("old").get<std::string>(),
                                trace_from_json(record.at("trace")));
            } else {
                fail(errc::corrupt_log, "unknown op");
            }
        } catch (const error&) {
            fail(errc::corrupt_log, "corrupt record at offset " + std::to_string(offset));
        } catch (const std::exception&) {
            fail(errc::corrupt_log, "corrupt record at offset " + std::to_string(offset));
        }
        offset += 4 + len;
    }
}

void trace_store::validate_new(const std::string& context, const fact_trace& trace) const {
    if (context.empty()) fail(errc::invalid_argument, "empty context id");
    if (trace.context != context)
        fail(errc::invalid_argument, "trace context does not match target context");
    if (trace.subject.empty() || trace.predicate.empty())
        fail(errc::invalid_argument, "trace subject/predicate must be non-empty");
    if (trace.predicted_queries.empty())
        fail(errc::validation, "trace must carry at least one predicted query");
    if (trace.status != trace_status::active || trace.superseded_by)
        fail(errc::invalid_argument, "new traces must be active");
    if (trace.resolved_time && trace.resolved_kind == temporal_kind::none)
        fail(errc::invalid_argument, "resolved_time requires a resolution kind");
}

std::string trace_store::assign_id(fact_trace& trace) {
    if (trace.trace_id.empty()) {
        uint64_t n = seq_;
        char buf[16];
        do {
            ++n;
            std::snprintf(buf, sizeof buf, "t%06llu", static_cast<unsigned long long>(n));
        } while (by_id_.count(buf));
        trace.trace_id = buf;
    } else if (by_id_.count(trace.trace_id)) {
        fail(errc::validation, "duplicate trace_id " + trace.trace_id);
    }
    return trace.trace_id;
}

void trace_store::apply_put(fact_trace trace) {
    if (by_id_.count(trace.trace_id)) fail(errc::validation, "duplicate trace_id");
    ++seq_;
    size_t idx = traces_.size();
    by_id_[trace.trace_id] = idx;
    by_context_[trace.context].push_back(idx);
    traces_.push_back(std::move(trace));
}

void trace_store::apply_supersede(const std::string& old_id, fact_trace new_trace) {
    auto it = by_id_.find(old_id);
    if (it == by_id_.end()) fail(errc::supersession, "unknown trace " + old_id);
    size_t old_idx = it->second;
    if (traces_[old_idx].status != trace_status::active)
        fail(errc::supersession, "trace " + old_id + " already superseded");
    if (traces_[old_idx].context != new_trace.context)
        fail(errc::supersession, "supersession across contexts");
    apply_put(std::move(new_trace));
    // apply_put may have grown traces_, so re-index rather than hold a
    // reference across the push.
    fact_trace& old = traces_[old_idx];
    old.status = trace_status::superseded;
    old.superseded_by = traces_.back().trace_id;
}

void trace_store::append_record(const nlohmann::ordered_json& record) {
    std::string payload = record.dump();
    uint32_t len = static_cast<uint32_t>(payload.size());
    char len_bytes[4] = {
        static_cast<char>(len & 0xFF),
        static_cast<char>((len >> 8) & 0xFF),
        static_cast<char>((len >> 16) & 0xFF),
        static_cast<char>((len >> 24) & 0xFF),
    };
    log_.write(len_bytes, 4);
    log_.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    log_.flush();
    if (!log_) fail(errc::io, "store log write failed");
}

std::string trace_store::put_trace(const std::string& context, fact_trace trace) {
    if (!open_) fail(errc::invalid_argument, "store not open");
    validate_new(context, trace);
    std::string id = assign_id(trace);
    nlohmann::ordered_json record;
    record["op"] = "put";
    record["trace"] = trace_to_json(trace, false);
    apply_put(std::move(trace));
    append_record(record);
    return id;
}

std::string trace_store::supersede(const std::string& context, const std::string& old_id,
                                   fact_trace new_trace) {
    if (!open_) fail(errc::invalid_argument, "store not open");
    validate_new(context, new_trace);
    auto it = by_id_.find(old_id);
    if (it == by_id_.end()) fail(errc::supersession, "unknown trace " + old_id);
    const fact_trace& old = traces_[it->second];
    if (old.status != trace_status::active)
        fail(errc::supersession, "trace " + old_id + " already superseded");
    if (old.context != context) fail(errc::supersession, "supersession across contexts");
    std::string id = assign_id(new_trace);
    nlohmann::ordered_json record;
    record["op"] = "supersede";
    record["old"] = old_id;
    record["trace"] = trace_to_json(new_trace, false);
    apply_supersede(old_id, std::move(new_trace));
    append_record(record);
    return id;
}

store_snapshot trace_store::snapshot(const std::string& context) const {
    store_snapshot snap;
    snap.context = context;
    snap.as_of = wall_clock_iso();
    auto it = by_context_.find(context);
    if (it == by_context_.end()) return snap;
    for (size_t idx : it->second) snap.traces.push_back(traces_[idx]);
    std::sort(snap.traces.begin(), snap.traces.end(), [](const fact_trace& a, const fact_trace& b) {
        if (a.stored_at.instant != b.stored_at.instant) return a.stored_at.instant < b.stored_at.instant;
        return a.trace_id < b.trace_id;
    });
    return snap;
}

std::vector<std::string> trace_store::contexts() const {
    std::vector<std::string> out;
    out.reserve(by_context_.size());
    for (const auto& [ctx, _] : by_context_) out.push_back(ctx);
    return out;
}

const fact_trace* trace_store::find(const std::string& trace_id) const {
    auto it = by_id_.find(trace_id);
    return it == by_id_.end() ? nullptr : &traces_[it->second];
}

std::vector<const fact_trace*> trace_store::context_traces(const std::string& context) const {
    std::vector<const fact_trace*> out;
    auto it = by_context_.find(context);
    if (it == by_context_.end()) return out;
    for (size_t idx : it->second) out.push_back(&traces_[idx]);
    return out;
}

namespace {

/// "interview" names the same slot as "job interview at meridian labs":
/// one subject's tokens contained in the other's.
bool subjects_alias(const std::string& a, const std::string& b) {
    if (a == b) return true;
    std::vector<std::string> ta = text::tokenize(a);
    std::vector<std::string> tb = text::tokenize(b);
    if (ta.empty() || tb.empty()) return false;
    std::unordered_set<std::string> sa(ta.begin(), ta.end());
    std::unordered_set<std::string> sb(tb.begin(), tb.end());
    auto within = [](const std::vector<std::string>& small,
                     const std::unordered_set<std::string>& big) {
        return std::all_of(small.begin(), small.end(),
                           [&](const std::string& t) { return big.count(t) > 0; });
    };
    return within(ta, sb) || within(tb, sa);
}

}  // namespace

std::optional<std::string> trace_store::latest_active_slot(
    const std::string& context, const std::string& subject, const std::string& predicate,
    std::span<const std::string> object_hint_tokens) const {
    auto it = by_context_.find(context);
    if (it == by_context_.end()) return std::nullopt;

    std::unordered_set<std::string> hint(object_hint_tokens.begin(), object_hint_tokens.end());
    const fact_trace* best = nullptr;
    bool best_hinted = false;
    bool best_exact = false;
    for (size_t idx : it->second) {
        const fact_trace& t = traces_[idx];
        if (t.status != trace_status::active) continue;
        if (t.predicate != predicate) continue;
        bool exact = t.subject == subject;
        if (!exact && !subjects_alias(t.subject, subject)) continue;
        bool hinted = false;
        if (!hint.empty()) {
            for (const auto& tok : text::content_tokens(t.object + " " + t.source_text)) {
                if (hint.count(tok)) {
                    hinted = true;
                    break;
                }
            }
        }
        auto newer = [&](const fact_trace& a, const fact_trace& b) {
            if (a.stored_at.instant != b.stored_at.instant)
                return a.stored_at.instant > b.stored_at.instant;
            return a.trace_id > b.trace_id;
        };
        // Exact subject wins over an alias; within a rank, an object
        // overlap (the hint) wins; then recency.
        bool better = !best || (exact && !best_exact) ||
                      (exact == best_exact &&
                       ((hinted && !best_hinted) || (hinted == best_hinted && newer(t, *best))));
        if (better) {
            best = &t;
            best_hinted = hinted;
            best_exact = exact;
        }
    }
    if (!best) return std::nullopt;
    return best->trace_id;
}

}  // namespace atant

#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "core/sim_time.hpp"
#include "core/temporal.hpp"

namespace atant {

enum class trace_status { active, superseded };

std::string_view to_string(trace_status s);

/// One persisted subject-predicate-object assertion.
struct fact_trace {
    std::string trace_id;
    std::string context;
    std::string subject;    // normalized
    std::string predicate;  // normalized canonical
    std::string object;
    std::vector<std::string> type_tags;  // sorted, unique
    sim_time stored_at{};
    std::optional<sim_time> resolved_time;
    temporal_kind resolved_kind = temporal_kind::none;
    temporal_direction resolved_direction = temporal_direction::none;
    trace_status status = trace_status::active;
    std::optional<std::string> superseded_by;
    std::vector<std::string> predicted_queries;  // never empty once stored
    std::string source_text;

    friend bool operator==(const fact_trace&, const fact_trace&) = default;
};

nlohmann::ordered_json trace_to_json(const fact_trace& t, bool include_status);
fact_trace trace_from_json(const nlohmann::ordered_json& j);

struct store_snapshot {
    std::string context;
    std::vector<fact_trace> traces;  // (stored_at, trace_id) order
    std::string as_of;               // wall clock; excluded from equality
};

/// Durable, context-scoped fact store.
///
/// Persistence is an append-only log: a version byte (0x01) followed by
/// length-prefixed JSON records, one per put or supersede event.
/// Opening replays the log and rebuilds every index; any malformed or
/// truncated record aborts the load with the failing byte offset.
class trace_store {
  public:
    trace_store() = default;
    trace_store(const trace_store&) = delete;
    trace_store& operator=(const trace_store&) = delete;
    ~trace_store();

    void open(const std::filesystem::path& dir);
    void close();
    [[nodiscard]] bool is_open() const { return open_; }
    [[nodiscard]] const std::filesystem::path& dir() const { return dir_; }

    /// Persist a new trace. An empty trace_id gets the next sequential
    /// id; a supplied id must be unused. Returns the id.
    std::string put_trace(const std::string& context, fact_trace trace);

    /// Mark `old_id` superseded by a fresh trace. The old trace must be
    /// active and in the same context; history is retained.
    std::string supersede(const std::string& context, const std::string& old_id,
                          fact_trace new_trace);

    [[nodiscard]] store_snapshot snapshot(const std::string& context) const;
    [[nodiscard]] std::vector<std::string> contexts() const;
    [[nodiscard]] const fact_trace* find(const std::string& trace_id) const;
    [[nodiscard]] std::vector<const fact_trace*> context_traces(const std::string& context) const;

    /// The active trace an update should replace: equal (subject,
    /// predicate) slot, preferring traces whose object shares tokens
    /// with the hint, then the most recently stored.
    [[nodiscard]] std::optional<std::string> latest_active_slot(
        const std::string& context, const std::string& subject, const std::string& predicate,
        std::span<const std::string> object_hint_tokens = {}) const;

  private:
    void validate_new(const std::string& context, const fact_trace& trace) const;
    std::string assign_id(fact_trace& trace);
    void apply_put(fact_trace trace);
    void apply_supersede(const std::string& old_id, fact_trace new_trace);
    void append_record(const nlohmann::ordered_json& record);
    void replay(std::ifstream& in);

    std::filesystem::path dir_;
    std::ofstream log_;
    bool open_ = false;
    std::vector<fact_trace> traces_;  // insertion order
    std::map<std::string, size_t> by_id_;
    std::map<std::string, std::vector<size_t>> by_context_;
    uint64_t seq_ = 0;
};

}  // namespace atant

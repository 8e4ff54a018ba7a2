#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/read_path.hpp"
#include "core/sim_time.hpp"
#include "core/store.hpp"

namespace atant {

struct sut_answer {
    std::string text;
    std::vector<std::string> traces_used;
    bool have_traces_used = false;  // external systems may report text only
};

/// What a system-under-test must expose. begin_context / ingest /
/// answer are mandatory; everything else is an optional introspection
/// hook — absent hooks (nullopt) mark their checkpoints not-assessed,
/// never failed. Implementations should throw `error` (code sut) on
/// operational failure; the evaluator fails the affected questions
/// closed.
class sut {
  public:
    virtual ~sut() = default;

    virtual void begin_context(const std::string& context) = 0;
    virtual void ingest(const std::string& utterance, const sim_time& batch_time) = 0;
    virtual sut_answer answer(const std::string& query, const sim_time& ask_at) = 0;

    /// Close and reopen persistent state, simulating process restart.
    /// Returns false when the system cannot restart (results are then
    /// produced without the restart, and reported as such).
    virtual bool restart() { return false; }

    virtual std::optional<std::string> classification(const std::string& utterance) {
        (void)utterance;
        return std::nullopt;
    }
    virtual std::optional<std::string> query_classification(const std::string& query) {
        (void)query;
        return std::nullopt;
    }
    virtual std::optional<store_snapshot> storage_snapshot() { return std::nullopt; }
    virtual std::optional<std::vector<std::string>> predicted_queries(const std::string& trace_id) {
        (void)trace_id;
        return std::nullopt;
    }
    virtual std::optional<std::vector<std::string>> type_tags(const std::string& trace_id) {
        (void)trace_id;
        return std::nullopt;
    }
    virtual std::optional<candidate_set> candidates(const std::string& query,
                                                    const sim_time& ask_at) {
        (void)query;
        (void)ask_at;
        return std::nullopt;
    }
    virtual std::optional<temporal_judgment> temporal_hook(const std::string& query,
                                                           const sim_time& ask_at) {
        (void)query;
        (void)ask_at;
        return std::nullopt;
    }
    virtual std::optional<emotion_judgment> emotion_hook(const std::string& query,
                                                         const sim_time& ask_at) {
        (void)query;
        (void)ask_at;
        return std::nullopt;
    }
};

}  // namespace atant

#pragma once

#include <filesystem>
#include <vector>

#include "core/lexicon.hpp"
#include "core/sut.hpp"
#include "core/write_path.hpp"

namespace atant {

struct engine_options {
    bool scope_isolation = true;  // false = no-scope control variant
    bool supersession = true;     // false = stale-update control variant
    int k = kDefaultK;
    std::vector<std::filesystem::path> lexicon_extensions;
};

/// The reference continuity engine: the full write and read paths over
/// one durable store, with every introspection hook implemented.
class reference_engine : public sut {
  public:
    explicit reference_engine(std::filesystem::path store_dir, engine_options opts = {});
    ~reference_engine() override;

    void begin_context(const std::string& context) override;
    void ingest(const std::string& utterance, const sim_time& batch_time) override;
    sut_answer answer(const std::string& query, const sim_time& ask_at) override;
    bool restart() override;

    std::optional<std::string> classification(const std::string& utterance) override;
    std::optional<std::string> query_classification(const std::string& query) override;
    std::optional<store_snapshot> storage_snapshot() override;
    std::optional<std::vector<std::string>> predicted_queries(const std::string& trace_id) override;
    std::optional<std::vector<std::string>> type_tags(const std::string& trace_id) override;
    std::optional<candidate_set> candidates(const std::string& query,
                                            const sim_time& ask_at) override;
    std::optional<temporal_judgment> temporal_hook(const std::string& query,
                                                   const sim_time& ask_at) override;
    std::optional<emotion_judgment> emotion_hook(const std::string& query,
                                                 const sim_time& ask_at) override;

    const trace_store& store() const { return store_; }

  private:
    ingest_context prior() const;
    std::vector<std::string> converged_for(const std::string& query,
                                           struct query_classification& cls, candidate_set& cands);

    std::filesystem::path store_dir_;
    engine_options opts_;
    predicate_lexicon preds_;
    valence_lexicon affect_;
    trace_store store_;
    std::string context_;

    // Pronoun antecedent window: ids stored in the current and the
    // immediately preceding batch of the active context.
    std::vector<std::string> window_current_;
    std::vector<std::string> window_previous_;
    std::optional<sim_time> current_batch_time_;
    // Pointer caches rebuilt per call; see prior().
    mutable std::vector<const fact_trace*> window_ptrs_;
    mutable std::vector<const fact_trace*> history_ptrs_;
};

}  // namespace atant

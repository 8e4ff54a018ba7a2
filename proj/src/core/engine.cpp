#include "core/engine.hpp"

#include "core/error.hpp"

namespace atant {

reference_engine::reference_engine(std::filesystem::path store_dir, engine_options opts)
    : store_dir_(std::move(store_dir)),
      opts_(std::move(opts)),
      preds_(predicate_lexicon::base()),
      affect_(valence_lexicon::base()) {
    for (const std::filesystem::path& p : opts_.lexicon_extensions) {
        preds_.load_extension(p);
        affect_.load_extension(p);
    }
    store_.open(store_dir_);
}

reference_engine::~reference_engine() = default;

void reference_engine::begin_context(const std::string& context) {
    if (context.empty()) fail(errc::invalid_argument, "empty context id");
    context_ = context;
    window_current_.clear();
    window_previous_.clear();
    current_batch_time_.reset();
}

ingest_context reference_engine::prior() const {
    window_ptrs_.clear();
    for (const std::string& id : window_previous_)
        if (const fact_trace* t = store_.find(id)) window_ptrs_.push_back(t);
    for (const std::string& id : window_current_)
        if (const fact_trace* t = store_.find(id)) window_ptrs_.push_back(t);
    history_ptrs_ = store_.context_traces(context_);
    return {std::span<const fact_trace* const>(window_ptrs_.data(), window_ptrs_.size()),
            std::span<const fact_trace* const>(history_ptrs_.data(), history_ptrs_.size())};
}

void reference_engine::ingest(const std::string& utterance, const sim_time& batch_time) {
    if (context_.empty()) fail(errc::invalid_argument, "ingest before begin_context");
    if (!current_batch_time_ || !(*current_batch_time_ == batch_time)) {
        window_previous_ = std::move(window_current_);
        window_current_.clear();
        current_batch_time_ = batch_time;
    }
    write_options wopts;
    wopts.supersession = opts_.supersession;
    ingest_result r =
        ingest_turn(utterance, context_, batch_time, store_, preds_, affect_, prior(), wopts);
    for (const std::string& id : r.stored_ids) window_current_.push_back(id);
}

std::vector<std::string> reference_engine::converged_for(const std::string& query,
                                                         struct query_classification& cls,
                                                         candidate_set& cands) {
    cls = classify_query(query);
    if (cls.label == query_label::general_knowledge) {
        cands = {};
        return {};
    }
    cands = match_structural(query, context_, store_, opts_.k, !opts_.scope_isolation);
    return converge(store_, cands, cls);
}

sut_answer reference_engine::answer(const std::string& query, const sim_time& ask_at) {
    if (context_.empty()) fail(errc::invalid_argument, "answer before begin_context");
    struct query_classification cls;
    candidate_set cands;
    std::vector<std::string> ids = converged_for(query, cls, cands);
    atant::answer a = assemble_answer(store_, ids, cls, ask_at);
    sut_answer out;
    out.text = a.text;
    out.traces_used = a.traces_used;
    out.have_traces_used = true;
    return out;
}

bool reference_engine::restart() {
    store_.close();
    window_current_.clear();
    window_previous_.clear();
    current_batch_time_.reset();
    store_.open(store_dir_);
    return true;
}

std::optional<std::string> reference_engine::classification(const std::string& utterance) {
    return std::string(to_string(classify_input(utterance, preds_, affect_).label));
}

std::optional<std::string> reference_engine::query_classification(const std::string& query) {
    return std::string(to_string(classify_query(query).label));
}

std::optional<store_snapshot> reference_engine::storage_snapshot() {
    if (context_.empty()) return store_snapshot{};
    return store_.snapshot(context_);
}

std::optional<std::vector<std::string>> reference_engine::predicted_queries(
    const std::string& trace_id) {
    const fact_trace* t = store_.find(trace_id);
    if (!t) return std::vector<std::string>{};
    return t->predicted_queries;
}

std::optional<std::vector<std::string>> reference_engine::type_tags(const std::string& trace_id) {
    const fact_trace* t = store_.find(trace_id);
    if (!t) return std::vector<std::string>{};
    return t->type_tags;
}

std::optional<candidate_set> reference_engine::candidates(const std::string& query,
                                                          const sim_time& /*ask_at*/) {
    struct query_classification cls;
    candidate_set cands;
    converged_for(query, cls, cands);
    return cands;
}

std::optional<temporal_judgment> reference_engine::temporal_hook(const std::string& query,
                                                                 const sim_time& ask_at) {
    struct query_classification cls;
    candidate_set cands;
    std::vector<std::string> ids = converged_for(query, cls, cands);
    return judge_temporal(store_, ids, ask_at);
}

std::optional<emotion_judgment> reference_engine::emotion_hook(const std::string& query,
                                                               const sim_time& /*ask_at*/) {
    struct query_classification cls;
    candidate_set cands;
    std::vector<std::string> ids = converged_for(query, cls, cands);
    return judge_emotion(store_, ids, query, affect_);
}

}  // namespace atant

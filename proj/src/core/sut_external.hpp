#pragma once

#include <cstdio>
#include <map>
#include <string>

#include "json.hpp"

#include "core/sut.hpp"

namespace atant {

/// Drives an out-of-process system over its standard streams. The
/// child is launched through /bin/sh with ATANT_STORE_DIR set to the
/// given directory; each request is one JSON line ({"op": ..., args})
/// and each response one JSON line ({"ok": payload} or
/// {"err": message}). An {"err": "unsupported"} response marks that
/// hook permanently absent; any other error on a mandatory operation
/// throws. SIGPIPE is ignored process-wide so a dying child surfaces
/// as a write error instead of killing the harness.
class external_sut : public sut {
  public:
    external_sut(std::string command, std::string store_dir);
    ~external_sut() override;

    external_sut(const external_sut&) = delete;
    external_sut& operator=(const external_sut&) = delete;

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

  private:
    void launch();
    void shutdown() noexcept;
    /// Mandatory request: throws on any error or child death.
    nlohmann::ordered_json request(const nlohmann::ordered_json& msg);
    /// Optional request: nullopt once the child said "unsupported".
    std::optional<nlohmann::ordered_json> request_optional(const std::string& op,
                                                           nlohmann::ordered_json msg);

    std::string command_;
    std::string store_dir_;
    int child_pid_ = -1;
    FILE* to_child_ = nullptr;
    FILE* from_child_ = nullptr;
    std::map<std::string, bool> unsupported_;
};

}  // namespace atant

#include "core/sut_external.hpp"

#include <cerrno>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <mutex>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include "core/error.hpp"

namespace atant {

namespace {

void ignore_sigpipe_once() {
    static std::once_flag flag;
    std::call_once(flag, [] { std::signal(SIGPIPE, SIG_IGN); });
}

}  // namespace

external_sut::external_sut(std::string command, std::string store_dir)
    : command_(std::move(command)), store_dir_(std::move(store_dir)) {
    ignore_sigpipe_once();
    launch();
}

external_sut::~external_sut() { shutdown(); }

void external_sut::launch() {
    int to_fds[2];    // parent writes requests
    int from_fds[2];  // parent reads responses
    if (pipe2(to_fds, O_CLOEXEC) != 0 || pipe2(from_fds, O_CLOEXEC) != 0) {
        fail(errc::sut, std::string("pipe: ") + std::strerror(errno));
    }
    int pid = fork();
    if (pid < 0) fail(errc::sut, std::string("fork: ") + std::strerror(errno));
    if (pid == 0) {
        // dup2 clears close-on-exec on the copies; the originals close
        // themselves at exec, so the child holds exactly stdin/stdout.
        dup2(to_fds[0], STDIN_FILENO);
        dup2(from_fds[1], STDOUT_FILENO);
        setenv("ATANT_STORE_DIR", store_dir_.c_str(), 1);
        execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    child_pid_ = pid;
    close(to_fds[0]);
    close(from_fds[1]);
    to_child_ = fdopen(to_fds[1], "w");
    from_child_ = fdopen(from_fds[0], "r");
    if (!to_child_ || !from_child_) {
        shutdown();
        fail(errc::sut, "could not attach to the external system's streams");
    }
}

void external_sut::shutdown() noexcept {
    if (to_child_) {
        fclose(to_child_);  // EOF tells a well-behaved child to exit
        to_child_ = nullptr;
    }
    if (child_pid_ > 0) {
        int status = 0;
        bool reaped = false;
        for (int i = 0; i < 200; ++i) {  // up to ~2s of graceful exit
            int r = waitpid(child_pid_, &status, WNOHANG);
            if (r == child_pid_ || r < 0) {
                reaped = true;
                break;
            }
            usleep(10000);
        }
        if (!reaped) {
            kill(child_pid_, SIGKILL);
            waitpid(child_pid_, &status, 0);
        }
        child_pid_ = -1;
    }
    if (from_child_) {
        fclose(from_child_);
        from_child_ = nullptr;
    }
}

nlohmann::ordered_json external_sut::request(const nlohmann::ordered_json& msg) {
    if (!to_child_ || !from_child_) fail(errc::sut, "external system is not running");
    std::string line = msg.dump();
    line.push_back('\n');
    if (fwrite(line.data(), 1, line.size(), to_child_) != line.size() || fflush(to_child_) != 0) {
        fail(errc::sut, "external system stopped reading requests");
    }

    std::string response;
    for (;;) {
        char* buf = nullptr;
        size_t cap = 0;
        ssize_t n = getline(&buf, &cap, from_child_);
        if (n < 0) {
            free(buf);
            fail(errc::sut, "external system closed its output mid-conversation");
        }
        response.assign(buf, static_cast<size_t>(n));
        free(buf);
        while (!response.empty() && (response.back() == '\n' || response.back() == '\r')) {
            response.pop_back();
        }
        if (!response.empty()) break;
    }

    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(response);
    } catch (const nlohmann::json::exception& e) {
        fail(errc::sut, std::string("unparseable response from external system: ") + e.what());
    }
    if (j.contains("err")) {
        fail(errc::sut, "external system error for op '" + msg.value("op", std::string()) +
                            "': " + j["err"].get<std::string>());
    }
    if (!j.contains("ok")) fail(errc::sut, "response missing ok/err from external system");
    return j["ok"];
}

std::optional<nlohmann::ordered_json> external_sut::request_optional(const std::string& op,
                                                                     nlohmann::ordered_json msg) {
    auto it = unsupported_.find(op);
    if (it != unsupported_.end() && it->second) return std::nullopt;
    try {
        return request(msg);
    } catch (const error& e) {
        // "unsupported" is the contract's way to decline a hook; it is
        // remembered so the hook is asked only once.
        if (std::string_view(e.what()).find("unsupported") != std::string_view::npos &&
            e.code() == errc::sut) {
            unsupported_[op] = true;
            return std::nullopt;
        }
        throw;
    }
}

void external_sut::begin_context(const std::string& context) {
    request({{"op", "begin_context"}, {"context", context}});
}

void external_sut::ingest(const std::string& utterance, const sim_time& batch_time) {
    request({{"op", "ingest"}, {"utterance", utterance}, {"batch_time", to_iso(batch_time)}});
}

sut_answer external_sut::answer(const std::string& query, const sim_time& ask_at) {
    nlohmann::ordered_json ok =
        request({{"op", "answer"}, {"query", query}, {"ask_at", to_iso(ask_at)}});
    sut_answer out;
    if (ok.is_string()) {
        out.text = ok.get<std::string>();
        return out;
    }
    if (!ok.is_object() || !ok.contains("text")) {
        fail(errc::sut, "answer payload must be a string or an object with text");
    }
    out.text = ok["text"].get<std::string>();
    if (ok.contains("traces_used")) {
        out.traces_used = ok["traces_used"].get<std::vector<std::string>>();
        out.have_traces_used = true;
    }
    return out;
}

bool external_sut::restart() {
    auto ok = request_optional("restart", {{"op", "restart"}});
    if (!ok) return false;
    return ok->is_boolean() ? ok->get<bool>() : true;
}

std::optional<std::string> external_sut::classification(const std::string& utterance) {
    auto ok = request_optional("classification", {{"op", "classification"}, {"utterance", utterance}});
    if (!ok) return std::nullopt;
    return ok->get<std::string>();
}

std::optional<std::string> external_sut::query_classification(const std::string& query) {
    auto ok = request_optional("query_classification",
                               {{"op", "query_classification"}, {"query", query}});
    if (!ok) return std::nullopt;
    return ok->get<std::string>();
}

std::optional<store_snapshot> external_sut::storage_snapshot() {
    auto ok = request_optional("storage_snapshot", {{"op", "storage_snapshot"}});
    if (!ok) return std::nullopt;
    store_snapshot snap;
    try {
        snap.context = ok->value("context", std::string());
        for (const auto& jt : ok->at("traces")) snap.traces.push_back(trace_from_json(jt));
    } catch (const std::exception& e) {
        fail(errc::sut, std::string("malformed storage_snapshot payload: ") + e.what());
    }
    return snap;
}

std::optional<std::vector<std::string>> external_sut::predicted_queries(
    const std::string& trace_id) {
    auto ok = request_optional("predicted_queries",
                               {{"op", "predicted_queries"}, {"trace_id", trace_id}});
    if (!ok) return std::nullopt;
    return ok->get<std::vector<std::string>>();
}

std::optional<std::vector<std::string>> external_sut::type_tags(const std::string& trace_id) {
    auto ok = request_optional("type_tags", {{"op", "type_tags"}, {"trace_id", trace_id}});
    if (!ok) return std::nullopt;
    return ok->get<std::vector<std::string>>();
}

std::optional<candidate_set> external_sut::candidates(const std::string& query,
                                                      const sim_time& ask_at) {
    auto ok = request_optional(
        "candidates", {{"op", "candidates"}, {"query", query}, {"ask_at", to_iso(ask_at)}});
    if (!ok) return std::nullopt;
    candidate_set out;
    try {
        out.k = ok->value("k", kDefaultK);
        for (const auto& jc : ok->at("candidates")) {
            candidate c;
            c.trace_id = jc.at("trace_id").get<std::string>();
            c.score_num = jc.value("score_num", 0LL);
            c.score_den = jc.value("score_den", 1LL);
            if (auto b = match_basis_from(jc.value("basis", std::string()))) c.basis = *b;
            out.candidates.push_back(std::move(c));
        }
    } catch (const std::exception& e) {
        fail(errc::sut, std::string("malformed candidates payload: ") + e.what());
    }
    return out;
}

std::optional<temporal_judgment> external_sut::temporal_hook(const std::string& query,
                                                             const sim_time& ask_at) {
    auto ok = request_optional(
        "temporal_judgment", {{"op", "temporal_judgment"}, {"query", query}, {"ask_at", to_iso(ask_at)}});
    if (!ok) return std::nullopt;
    temporal_judgment out;
    auto kind = temporal_kind_from(ok->value("type", std::string()));
    auto dir = temporal_direction_from(ok->value("direction", std::string()));
    if (!kind || !dir) fail(errc::sut, "malformed temporal_judgment payload");
    out.kind = *kind;
    out.direction = *dir;
    return out;
}

std::optional<emotion_judgment> external_sut::emotion_hook(const std::string& query,
                                                           const sim_time& ask_at) {
    auto ok = request_optional(
        "emotion_judgment", {{"op", "emotion_judgment"}, {"query", query}, {"ask_at", to_iso(ask_at)}});
    if (!ok) return std::nullopt;
    emotion_judgment out;
    if (!ok->contains("detected")) fail(errc::sut, "malformed emotion_judgment payload");
    out.detected = (*ok)["detected"].get<bool>();
    auto dir = emotion_direction_from(ok->value("direction", std::string()));
    if (!dir) fail(errc::sut, "malformed emotion_judgment payload");
    out.direction = *dir;
    return out;
}

}  // namespace atant

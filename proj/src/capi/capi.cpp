#include "atant/atant.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <sstream>
#include <string>

#include "json.hpp"

#include "core/corpus.hpp"
#include "core/engine.hpp"
#include "core/error.hpp"
#include "core/harness.hpp"
#include "core/store.hpp"
#include "core/sut_external.hpp"

struct atant_corpus {
    std::vector<atant::story> stories;
};

struct atant_run_report {
    atant::run_report report;
};

struct atant_engine {
    std::unique_ptr<atant::reference_engine> engine;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) return nullptr;
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

atant_status map_errc(atant::errc c) {
    switch (c) {
        case atant::errc::invalid_argument: return ATANT_ERR_INVALID;
        case atant::errc::io: return ATANT_ERR_IO;
        case atant::errc::parse: return ATANT_ERR_PARSE;
        case atant::errc::validation: return ATANT_ERR_VALIDATION;
        case atant::errc::corrupt_log: return ATANT_ERR_CORRUPT_LOG;
        case atant::errc::supersession: return ATANT_ERR_SUPERSESSION;
        case atant::errc::sut: return ATANT_ERR_SUT;
        case atant::errc::unsupported: return ATANT_ERR_UNSUPPORTED;
    }
    return ATANT_ERR_INTERNAL;
}

template <typename F>
atant_status guarded(F&& f) noexcept {
    try {
        f();
        g_last_error.clear();
        return ATANT_OK;
    } catch (const atant::error& e) {
        g_last_error = e.what();
        return map_errc(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return ATANT_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown failure";
        return ATANT_ERR_INTERNAL;
    }
}

atant_status invalid(const char* message) {
    g_last_error = message;
    return ATANT_ERR_INVALID;
}

std::vector<std::filesystem::path> lexicon_paths_from(const char* const* paths, size_t count) {
    std::vector<std::filesystem::path> out;
    for (size_t i = 0; i < count; ++i) {
        if (paths[i]) out.emplace_back(paths[i]);
    }
    return out;
}

/// Builds per-slot systems under store_root. Slots are recreated empty
/// so every run writes its logs from scratch (identical runs then
/// leave identical logs).
atant::sut_factory make_factory(const std::string& selector, const std::string& store_root,
                                const atant::engine_options& base) {
    namespace fs = std::filesystem;
    auto fresh_slot = [store_root](const std::string& slot) {
        fs::path dir = fs::path(store_root) / slot;
        fs::remove_all(dir);
        fs::create_directories(dir);
        return dir;
    };

    if (selector == "reference" || selector == "reference:noscope" ||
        selector == "reference:nosupersede") {
        atant::engine_options opts = base;
        if (selector == "reference:noscope") opts.scope_isolation = false;
        if (selector == "reference:nosupersede") opts.supersession = false;
        return [opts, fresh_slot](const std::string& slot) -> std::unique_ptr<atant::sut> {
            return std::make_unique<atant::reference_engine>(fresh_slot(slot), opts);
        };
    }
    if (selector.rfind("external:", 0) == 0) {
        std::string command = selector.substr(9);
        if (command.empty()) {
            atant::fail(atant::errc::invalid_argument, "external selector has no command");
        }
        return [command, fresh_slot](const std::string& slot) -> std::unique_ptr<atant::sut> {
            return std::make_unique<atant::external_sut>(command, fresh_slot(slot).string());
        };
    }
    atant::fail(atant::errc::invalid_argument, "unknown sut selector '" + selector + "'");
}

}  // namespace

extern "C" {

const char* atant_version(void) { return "1.0.0"; }

const char* atant_last_error(void) { return g_last_error.c_str(); }

void atant_string_free(char* s) { std::free(s); }

/* ---- corpus ---------------------------------------------------- */

atant_status atant_corpus_load(const char* path, atant_corpus** out) {
    if (!path || !out) return invalid("atant_corpus_load: null argument");
    *out = nullptr;
    return guarded([&] {
        auto c = std::make_unique<atant_corpus>();
        c->stories = atant::load_corpus(path);
        *out = c.release();
    });
}

atant_status atant_corpus_lint(const char* path, char** findings_out, int* errors_out,
                               int* warnings_out) {
    if (!path) return invalid("atant_corpus_lint: null path");
    if (findings_out) *findings_out = nullptr;
    if (errors_out) *errors_out = 0;
    if (warnings_out) *warnings_out = 0;
    return guarded([&] {
        std::vector<atant::lint_finding> findings = atant::lint_corpus(path);
        int errors = 0;
        int warnings = 0;
        std::string text;
        for (const atant::lint_finding& f : findings) {
            (f.sev == atant::lint_finding::severity::error ? errors : warnings) += 1;
            text += std::string(atant::to_string(f.sev)) + ": " + f.path + ": " + f.message + "\n";
        }
        if (findings_out) *findings_out = dup_string(text);
        if (errors_out) *errors_out = errors;
        if (warnings_out) *warnings_out = warnings;
    });
}

atant_status atant_corpus_stats(const atant_corpus* corpus, char** json_out) {
    if (!corpus || !json_out) return invalid("atant_corpus_stats: null argument");
    *json_out = nullptr;
    return guarded([&] {
        atant::corpus_summary sum = atant::corpus_stats(corpus->stories);
        nlohmann::ordered_json j;
        j["stories"] = sum.stories;
        j["batches"] = sum.batches;
        j["turns"] = sum.turns;
        j["questions"] = sum.questions;
        nlohmann::ordered_json per = nlohmann::ordered_json::object();
        for (const auto& [category, count] : sum.per_category) per[category] = count;
        j["per_category"] = std::move(per);
        *json_out = dup_string(j.dump(2) + "\n");
    });
}

void atant_corpus_free(atant_corpus* corpus) { delete corpus; }

/* ---- evaluation runs ------------------------------------------- */

atant_status atant_run(const atant_corpus* corpus, const atant_run_options* options,
                       atant_run_report** out) {
    if (!corpus || !options || !out) return invalid("atant_run: null argument");
    *out = nullptr;
    return guarded([&] {
        std::string store_dir = options->store_dir ? options->store_dir : "";
        if (store_dir.empty()) {
            if (const char* env = std::getenv("ATANT_STORE_DIR")) store_dir = env;
        }
        if (store_dir.empty()) {
            atant::fail(atant::errc::invalid_argument,
                        "no store directory configured (set store_dir or ATANT_STORE_DIR)");
        }

        atant::engine_options base;
        if (options->k > 0) base.k = options->k;
        base.lexicon_extensions =
            lexicon_paths_from(options->lexicon_paths, options->lexicon_path_count);

        std::string selector = options->sut && options->sut[0] ? options->sut : "reference";
        atant::sut_factory factory = make_factory(selector, store_dir, base);

        atant::run_options ro;
        ro.cumulative = options->cumulative != 0;
        ro.restart = options->restart != 0;
        ro.jobs = options->jobs > 1 ? options->jobs : 1;
        ro.corpus_label = options->corpus_label ? options->corpus_label : "";

        auto wrapped = std::make_unique<atant_run_report>();
        wrapped->report = atant::run_mode(factory, corpus->stories, ro);
        *out = wrapped.release();
    });
}

atant_status atant_report_machine(const atant_run_report* report, char** out) {
    if (!report || !out) return invalid("atant_report_machine: null argument");
    *out = nullptr;
    return guarded([&] { *out = dup_string(atant::machine_report(report->report)); });
}

atant_status atant_report_human(const atant_run_report* report, char** out) {
    if (!report || !out) return invalid("atant_report_human: null argument");
    *out = nullptr;
    return guarded([&] { *out = dup_string(atant::human_report(report->report)); });
}

atant_status atant_report_tier(const atant_run_report* report, char** out) {
    if (!report || !out) return invalid("atant_report_tier: null argument");
    *out = nullptr;
    return guarded([&] { *out = dup_string(report->report.compliance.tier); });
}

int atant_report_cp8_rate_tenths(const atant_run_report* report) {
    return report ? report->report.cp8_rate_tenths : 0;
}

int atant_report_stories_run(const atant_run_report* report) {
    return report ? report->report.stories_run : 0;
}

int atant_report_stories_errored(const atant_run_report* report) {
    if (!report) return 0;
    int n = 0;
    for (const atant::story_result& s : report->report.stories) n += s.errored ? 1 : 0;
    return n;
}

int atant_report_questions_total(const atant_run_report* report) {
    return report ? report->report.questions_total : 0;
}

int atant_report_questions_passed(const atant_run_report* report) {
    return report ? report->report.questions_passed : 0;
}

int atant_report_contamination_failures(const atant_run_report* report) {
    return report ? report->report.contamination.failures : 0;
}

void atant_report_free(atant_run_report* report) { delete report; }

/* ---- store inspection ------------------------------------------ */

atant_status atant_store_inspect(const char* store_dir, const char* context, char** out) {
    if (!store_dir || !out) return invalid("atant_store_inspect: null argument");
    *out = nullptr;
    return guarded([&] {
        namespace fs = std::filesystem;
        fs::path dir(store_dir);
        if (!fs::exists(dir / "traces.log")) {
            atant::fail(atant::errc::io, "no store log found in " + dir.string());
        }
        atant::trace_store store;
        store.open(dir);

        std::vector<std::string> contexts;
        if (context) {
            contexts.emplace_back(context);
        } else {
            contexts = store.contexts();
            std::sort(contexts.begin(), contexts.end());
        }

        std::ostringstream text;
        text << "store: " << dir.string() << "\n";
        for (const std::string& ctx : contexts) {
            atant::store_snapshot snap = store.snapshot(ctx);
            text << "\ncontext " << ctx << " (" << snap.traces.size() << " traces)\n";
            for (const atant::fact_trace& t : snap.traces) {
                text << "  " << t.trace_id << "  " << (t.status == atant::trace_status::active
                                                           ? "active    "
                                                           : "superseded")
                     << "  " << atant::to_iso(t.stored_at) << "  " << t.subject << " | "
                     << t.predicate << " | " << t.object;
                if (t.resolved_time) {
                    text << "  (" << atant::to_string(t.resolved_kind) << " -> "
                         << atant::to_iso(*t.resolved_time) << ")";
                }
                if (t.superseded_by) text << "  -> " << *t.superseded_by;
                text << "\n";
            }
        }
        store.close();
        *out = dup_string(text.str());
    });
}

/* ---- embedded engine ------------------------------------------- */

atant_status atant_engine_open(const char* store_dir, const atant_engine_options* options,
                               atant_engine** out) {
    if (!store_dir || !out) return invalid("atant_engine_open: null argument");
    *out = nullptr;
    return guarded([&] {
        atant::engine_options opts;
        if (options) {
            if (options->k > 0) opts.k = options->k;
            opts.scope_isolation = options->scope_isolation != 0;
            opts.supersession = options->supersession != 0;
            opts.lexicon_extensions =
                lexicon_paths_from(options->lexicon_paths, options->lexicon_path_count);
        }
        auto handle = std::make_unique<atant_engine>();
        handle->engine = std::make_unique<atant::reference_engine>(store_dir, opts);
        *out = handle.release();
    });
}

atant_status atant_engine_begin_context(atant_engine* engine, const char* context) {
    if (!engine || !context) return invalid("atant_engine_begin_context: null argument");
    return guarded([&] { engine->engine->begin_context(context); });
}

atant_status atant_engine_ingest(atant_engine* engine, const char* utterance,
                                 const char* batch_time_iso) {
    if (!engine || !utterance || !batch_time_iso) {
        return invalid("atant_engine_ingest: null argument");
    }
    return guarded([&] {
        auto t = atant::parse_sim_time(batch_time_iso);
        if (!t) {
            atant::fail(atant::errc::invalid_argument,
                        std::string("invalid timestamp '") + batch_time_iso + "'");
        }
        engine->engine->ingest(utterance, *t);
    });
}

atant_status atant_engine_answer(atant_engine* engine, const char* query, const char* ask_at_iso,
                                 char** json_out) {
    if (!engine || !query || !ask_at_iso || !json_out) {
        return invalid("atant_engine_answer: null argument");
    }
    *json_out = nullptr;
    return guarded([&] {
        auto t = atant::parse_sim_time(ask_at_iso);
        if (!t) {
            atant::fail(atant::errc::invalid_argument,
                        std::string("invalid timestamp '") + ask_at_iso + "'");
        }
        atant::sut_answer ans = engine->engine->answer(query, *t);
        nlohmann::ordered_json j;
        j["text"] = ans.text;
        j["traces_used"] = ans.traces_used;
        *json_out = dup_string(j.dump());
    });
}

atant_status atant_engine_restart(atant_engine* engine) {
    if (!engine) return invalid("atant_engine_restart: null engine");
    return guarded([&] { engine->engine->restart(); });
}

void atant_engine_free(atant_engine* engine) { delete engine; }

}  // extern "C"

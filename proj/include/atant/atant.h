/* ATANT continuity engine and evaluation harness — C API.
 *
 * Everything crosses this boundary as opaque handles, UTF-8 strings,
 * and status codes. Strings returned through char** are heap
 * allocations owned by the caller; release them with
 * atant_string_free. Handles are released with their _free function.
 * On any non-OK status, atant_last_error() describes the failure for
 * the calling thread.
 */

#ifndef ATANT_H
#define ATANT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum atant_status {
    ATANT_OK = 0,
    ATANT_ERR_INVALID = 1,       /* bad argument or configuration */
    ATANT_ERR_IO = 2,            /* missing path, unreadable file */
    ATANT_ERR_PARSE = 3,         /* malformed story or log record */
    ATANT_ERR_VALIDATION = 4,    /* well-formed but rule-breaking corpus */
    ATANT_ERR_CORRUPT_LOG = 5,   /* store log damaged; message names the byte offset */
    ATANT_ERR_SUPERSESSION = 6,  /* update applied to a missing or inactive fact */
    ATANT_ERR_SUT = 7,           /* system-under-test failed or misbehaved */
    ATANT_ERR_UNSUPPORTED = 8,   /* operation not available on this system */
    ATANT_ERR_INTERNAL = 9       /* unexpected library failure */
} atant_status;

/* Library version, static storage. */
const char* atant_version(void);

/* Message for the most recent failure on this thread; static until the
 * next API call. Never NULL. */
const char* atant_last_error(void);

/* Release a string returned through a char** out-parameter. */
void atant_string_free(char* s);

/* ---- corpus ---------------------------------------------------- */

typedef struct atant_corpus atant_corpus;

/* Strict load of a story file or directory of story files; fails on
 * the first invalid story. */
atant_status atant_corpus_load(const char* path, atant_corpus** out);

/* Tolerant whole-corpus lint: reports every finding, one per line
 * ("error: file: field: message"), and counts by severity. Returns
 * ATANT_OK even when findings exist; only an unreadable path fails. */
atant_status atant_corpus_lint(const char* path, char** findings_out, int* errors_out,
                               int* warnings_out);

/* Summary counts as a JSON object (stories, batches, turns, questions,
 * per_category). */
atant_status atant_corpus_stats(const atant_corpus* corpus, char** json_out);

void atant_corpus_free(atant_corpus* corpus);

/* ---- evaluation runs ------------------------------------------- */

/* System selector strings accepted by atant_run:
 *   "reference"               built-in engine
 *   "reference:noscope"       variant with context scoping disabled
 *   "reference:nosupersede"   variant that never replaces facts
 *   "external:<command>"      child process speaking the line protocol
 */
typedef struct atant_run_options {
    int cumulative;        /* 0 = isolated (fresh store per story) */
    int restart;           /* close/reopen between ingestion and questions */
    int k;                 /* retrieval depth; 0 means the default (5) */
    int jobs;              /* isolated-mode worker threads; 0/1 = serial */
    const char* sut;       /* selector; NULL means "reference" */
    const char* store_dir; /* working area; slot subdirectories are recreated per run */
    const char* const* lexicon_paths; /* predicate lexicon extension files */
    size_t lexicon_path_count;
    const char* corpus_label; /* echoed into reports */
} atant_run_options;

typedef struct atant_run_report atant_run_report;

atant_status atant_run(const atant_corpus* corpus, const atant_run_options* options,
                       atant_run_report** out);

/* Canonical machine report (JSON, stable key order) and the plain-text
 * human report. */
atant_status atant_report_machine(const atant_run_report* report, char** out);
atant_status atant_report_human(const atant_run_report* report, char** out);

/* Scalar results for exit-code decisions. Tier is one of Gold, Silver,
 * Bronze, none. */
atant_status atant_report_tier(const atant_run_report* report, char** out);
int atant_report_cp8_rate_tenths(const atant_run_report* report);
int atant_report_stories_run(const atant_run_report* report);
int atant_report_stories_errored(const atant_run_report* report);
int atant_report_questions_total(const atant_run_report* report);
int atant_report_questions_passed(const atant_run_report* report);
int atant_report_contamination_failures(const atant_run_report* report);

void atant_report_free(atant_run_report* report);

/* ---- store inspection ------------------------------------------ */

/* Human-readable listing of a store directory: every context (or just
 * `context` when non-NULL), traces in stored order, supersession
 * chains drawn old -> new. An unknown context lists as empty. */
atant_status atant_store_inspect(const char* store_dir, const char* context, char** out);

/* ---- embedded engine ------------------------------------------- */

/* Direct handle on the reference engine, for adapters and embedders.
 * Times are ISO-8601 with offset, e.g. "2026-03-02T09:00:00-08:00". */
typedef struct atant_engine atant_engine;

typedef struct atant_engine_options {
    int k;                 /* 0 means the default (5) */
    int scope_isolation;   /* nonzero keeps contexts partitioned (default) */
    int supersession;      /* nonzero lets updates replace facts (default) */
    const char* const* lexicon_paths;
    size_t lexicon_path_count;
} atant_engine_options;

/* options may be NULL for defaults. */
atant_status atant_engine_open(const char* store_dir, const atant_engine_options* options,
                               atant_engine** out);
atant_status atant_engine_begin_context(atant_engine* engine, const char* context);
atant_status atant_engine_ingest(atant_engine* engine, const char* utterance,
                                 const char* batch_time_iso);
/* JSON object {"text": ..., "traces_used": [...]}. */
atant_status atant_engine_answer(atant_engine* engine, const char* query, const char* ask_at_iso,
                                 char** json_out);
atant_status atant_engine_restart(atant_engine* engine);
void atant_engine_free(atant_engine* engine);

#ifdef __cplusplus
}
#endif

#endif /* ATANT_H */

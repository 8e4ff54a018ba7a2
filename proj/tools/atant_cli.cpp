// Command-line front end. Talks to the engine and harness exclusively
// through the public C API, exactly like any other embedder would.
//
// Exit codes: 0 success; 1 validation findings or required tier not
// met; 2 path problems; 3 system-under-test failure; 4 corrupt store
// log.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "atant/atant.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitPath = 2;
constexpr int kExitSut = 3;
constexpr int kExitCorrupt = 4;

/// Owns a char* from the library.
struct owned_string {
    char* ptr = nullptr;
    ~owned_string() { atant_string_free(ptr); }
    std::string str() const { return ptr ? ptr : ""; }
};

int tier_rank(std::string tier) {
    for (char& c : tier) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (tier == "gold") return 3;
    if (tier == "silver") return 2;
    if (tier == "bronze") return 1;
    return 0;
}

int cmd_validate(const std::string& corpus_path) {
    owned_string findings;
    int errors = 0;
    int warnings = 0;
    atant_status st = atant_corpus_lint(corpus_path.c_str(), &findings.ptr, &errors, &warnings);
    if (st != ATANT_OK) {
        std::cerr << "error: " << atant_last_error() << "\n";
        return st == ATANT_ERR_IO ? kExitPath : kExitValidation;
    }
    if (findings.ptr && findings.ptr[0]) std::cout << findings.str();
    std::cout << errors << " errors, " << warnings << " warnings\n";
    if (errors > 0) return kExitValidation;

    atant_corpus* corpus = nullptr;
    if (atant_corpus_load(corpus_path.c_str(), &corpus) == ATANT_OK) {
        owned_string stats;
        if (atant_corpus_stats(corpus, &stats.ptr) == ATANT_OK) std::cout << stats.str();
        atant_corpus_free(corpus);
    }
    return kExitOk;
}

struct run_config {
    std::string corpus_path;
    std::string mode = "isolated";
    bool restart = true;
    int k = 0;
    int jobs = 1;
    std::vector<std::string> lexicons;
    std::string report_dir;
    std::string require_tier;
    std::string sut = "reference";
    std::string store_dir;
    std::string label;
};

int cmd_run(const run_config& cfg) {
    atant_corpus* corpus = nullptr;
    atant_status st = atant_corpus_load(cfg.corpus_path.c_str(), &corpus);
    if (st != ATANT_OK) {
        std::cerr << "error: " << atant_last_error() << "\n";
        return st == ATANT_ERR_IO ? kExitPath : kExitValidation;
    }

    std::string store = cfg.store_dir;
    if (store.empty()) {
        if (const char* env = std::getenv("ATANT_STORE_DIR")) store = env;
    }
    if (store.empty()) {
        std::cerr << "error: no store directory (use --store or set ATANT_STORE_DIR)\n";
        atant_corpus_free(corpus);
        return kExitPath;
    }

    std::string label = cfg.label;
    if (label.empty()) {
        std::filesystem::path p(cfg.corpus_path);
        label = (p.has_filename() ? p : p.parent_path()).filename().string();
    }

    std::vector<const char*> lexicons;
    for (const std::string& l : cfg.lexicons) lexicons.push_back(l.c_str());

    atant_run_options options{};
    options.cumulative = cfg.mode == "cumulative" ? 1 : 0;
    options.restart = cfg.restart ? 1 : 0;
    options.k = cfg.k;
    options.jobs = cfg.jobs;
    options.sut = cfg.sut.c_str();
    options.store_dir = store.c_str();
    options.lexicon_paths = lexicons.empty() ? nullptr : lexicons.data();
    options.lexicon_path_count = lexicons.size();
    options.corpus_label = label.c_str();

    atant_run_report* report = nullptr;
    st = atant_run(corpus, &options, &report);
    atant_corpus_free(corpus);
    if (st != ATANT_OK) {
        std::cerr << "error: " << atant_last_error() << "\n";
        if (st == ATANT_ERR_SUT) return kExitSut;
        if (st == ATANT_ERR_IO) return kExitPath;
        if (st == ATANT_ERR_CORRUPT_LOG) return kExitCorrupt;
        return kExitValidation;
    }

    owned_string human;
    atant_report_human(report, &human.ptr);
    std::cout << human.str();

    if (!cfg.report_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(cfg.report_dir, ec);
        owned_string machine;
        atant_report_machine(report, &machine.ptr);
        std::filesystem::path dir(cfg.report_dir);
        std::ofstream(dir / "report.json", std::ios::binary) << machine.str();
        std::ofstream(dir / "report.txt", std::ios::binary) << human.str();
        std::cout << "\nreports written to " << dir.string() << "\n";
    }

    int stories = atant_report_stories_run(report);
    int errored = atant_report_stories_errored(report);
    owned_string tier;
    atant_report_tier(report, &tier.ptr);
    atant_report_free(report);

    if (stories > 0 && errored == stories) {
        std::cerr << "error: the system under test never became usable\n";
        return kExitSut;
    }
    if (!cfg.require_tier.empty() &&
        tier_rank(tier.str()) < tier_rank(cfg.require_tier)) {
        std::cerr << "required tier " << cfg.require_tier << " not met (achieved " << tier.str()
                  << ")\n";
        return kExitValidation;
    }
    return kExitOk;
}

int cmd_inspect(const std::string& store_dir, const std::string& context) {
    owned_string listing;
    atant_status st =
        atant_store_inspect(store_dir.c_str(), context.empty() ? nullptr : context.c_str(),
                            &listing.ptr);
    if (st != ATANT_OK) {
        std::cerr << "error: " << atant_last_error() << "\n";
        if (st == ATANT_ERR_CORRUPT_LOG) return kExitCorrupt;
        return kExitPath;
    }
    std::cout << listing.str();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"atant — deterministic continuity engine and evaluation harness"};
    app.set_version_flag("--version", std::string(atant_version()));
    app.require_subcommand(1);

    std::string validate_path;
    CLI::App* validate = app.add_subcommand("validate", "Lint a corpus of story files");
    validate->add_option("corpus", validate_path, "story file or directory")->required();

    run_config cfg;
    CLI::App* run = app.add_subcommand("run", "Evaluate a system against a corpus");
    run->add_option("corpus", cfg.corpus_path, "story file or directory")->required();
    run->add_option("--mode", cfg.mode, "isolated or cumulative")
        ->check(CLI::IsMember({"isolated", "cumulative"}))
        ->capture_default_str();
    run->add_flag("--restart,!--no-restart", cfg.restart,
                  "close and reopen the store between ingestion and questions")
        ->capture_default_str();
    run->add_option("--k", cfg.k, "retrieval depth (default 5)");
    run->add_option("--jobs", cfg.jobs, "parallel workers in isolated mode")
        ->check(CLI::PositiveNumber);
    run->add_option("--lexicon", cfg.lexicons, "predicate lexicon extension file (repeatable)");
    run->add_option("--report-dir", cfg.report_dir, "write report.json and report.txt here");
    run->add_option("--require-tier", cfg.require_tier, "fail unless this tier is reached")
        ->check(CLI::IsMember({"gold", "silver", "bronze"}, CLI::ignore_case));
    run->add_option("--sut", cfg.sut,
                    "reference | reference:noscope | reference:nosupersede | external:<command>")
        ->capture_default_str();
    run->add_option("--store", cfg.store_dir, "store directory (fallback: ATANT_STORE_DIR)");
    run->add_option("--label", cfg.label, "corpus label for reports (default: path basename)");

    std::string inspect_store;
    std::string inspect_context;
    CLI::App* inspect = app.add_subcommand("inspect", "Print the contents of a store");
    inspect->add_option("store", inspect_store, "store directory")->required();
    inspect->add_option("--context", inspect_context, "limit to one context");

    CLI11_PARSE(app, argc, argv);

    if (validate->parsed()) return cmd_validate(validate_path);
    if (run->parsed()) return cmd_run(cfg);
    if (inspect->parsed()) return cmd_inspect(inspect_store, inspect_context);
    return kExitOk;
}

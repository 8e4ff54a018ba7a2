#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "core/corpus.hpp"
#include "core/evaluator.hpp"
#include "core/sut.hpp"

namespace atant {

struct run_options {
    bool cumulative = false;  // isolated: fresh store per story
    bool restart = true;      // close/reopen between ingestion and questions
    int jobs = 1;             // isolated mode may fan stories out
    std::string corpus_label;
};

/// Builds the system for one storage slot. Isolated mode asks for one
/// system per story (slot = story id); cumulative mode asks once
/// (slot = "shared"). Must be callable from worker threads.
using sut_factory = std::function<std::unique_ptr<sut>(const std::string& slot)>;

struct checkpoint_totals {
    int assessed = 0;
    int passed = 0;
};

struct contamination_report {
    int probes = 0;
    int failures = 0;
    std::vector<std::string> details;  // one line per violation, naming both stories
};

struct compliance_result {
    std::string level = "none";  // Core | Stress | Cumulative | Scale | none
    std::string level_detail;    // e.g. "Core-equivalent at 12 stories"
    std::string tier = "none";   // Gold | Silver | Bronze | none
};

struct run_report {
    std::string mode;  // isolated | cumulative
    bool restart_requested = false;
    bool restart_honored = false;  // some systems cannot restart
    std::string corpus_label;
    int stories_run = 0;
    int stories_passed = 0;  // stories with every question answered correctly
    int questions_total = 0;
    int questions_passed = 0;
    bool no_data = false;
    int cp8_rate_tenths = 0;  // answer-accuracy rate in tenths of a percent
    std::array<checkpoint_totals, 10> checkpoints{};
    std::vector<story_result> stories;
    contamination_report contamination;
    compliance_result compliance;
    std::vector<std::string> errors;
};

/// passed/total as tenths of a percent, rounded half-up; 0 when total
/// is 0. 1761/1835 -> 960 (96.0%).
int rate_tenths(long long passed, long long total);

/// "96.0" for 960. Always one decimal.
std::string format_tenths(int tenths);

/// 1000 -> Gold; [950,1000) -> Silver; [900,950) -> Bronze; else none.
/// Applied after rounding, so 94.95% raw is already 95.0% here.
std::string_view tier_for_tenths(int tenths);

/// Level from (mode, story count): isolated earns Core at 50 and
/// Stress at 250; cumulative earns Cumulative at 50 and Scale at 250.
/// Short corpora earn no level and say what they were equivalent to.
compliance_result compliance_for(const std::string& mode, int stories_run, int cp8_tenths,
                                 bool no_data);

/// Run the whole corpus in one mode and score it. Stories are visited
/// in story-id order. Isolated mode builds a fresh system per story
/// and may run stories in parallel (results are merged back in story
/// order, so reports never depend on scheduling). Cumulative mode
/// ingests every story into one shared system first, then asks every
/// question, and probes cross-story contamination over shared
/// predicates.
run_report run_mode(const sut_factory& make_sut, const std::vector<story>& corpus,
                    const run_options& options);

/// Canonical machine-readable report: stable key order, no clocks, so
/// identical runs serialize byte-identically.
std::string machine_report(const run_report& r);

/// Plain-text summary with the ten-row checkpoint table.
std::string human_report(const run_report& r);

}  // namespace atant

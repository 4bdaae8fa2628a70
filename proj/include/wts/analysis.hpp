#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wts/config.hpp"

namespace wts {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchemaVersion = "1";

struct RunResult {
    nlohmann::ordered_json report;
    int exit_code = 0;  // 0 ok, 1 verification failure (2 is reserved for errors)
    // CSV tables keyed by a short name ("kernel", "power_norms", "defects").
    std::vector<std::pair<std::string, std::string>> tables;
};

// Runs the requested analyses (falling back to config.analyses) and builds the
// report. Deterministic: identical configs produce identical reports except
// for the "timing_ms" field.
RunResult run(const AnalysisConfig& config, std::vector<std::string> analyses = {});

// Writes the JSON report to path ("-" or empty = stdout) and, when format is
// "csv", one <stem>_<table>.csv file per collected table.
void emit(const RunResult& result, const std::string& format, const std::string& path);

// Parallelism cap from SEMIGROUP_LAB_THREADS (>=1); analyses run single
// threaded, the cap is recorded in the report.
int thread_cap();

}  // namespace wts

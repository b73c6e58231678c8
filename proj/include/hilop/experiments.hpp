#pragma once

#include <string>
#include <utility>
#include <vector>

namespace hilop::experiments {

struct ValidationResult {
    bool ok = false;
    std::vector<std::string> errors; // "line:col message" or "path: message"
};

// Syntax plus semantic validation of a JSON experiment config. Never throws;
// every problem found is reported, aggregated, with its location.
ValidationResult validate_config_text(const std::string &text);

struct RunResult {
    std::string report_json;   // deterministic apart from wall_clock_seconds
    std::string csv;           // the experiment's main scan as a versioned table
    bool passed = false;       // all criteria in the report hold
    std::string output_path;   // config's requested destination, empty if none
    std::string output_format; // "json" or "csv" when output_path is set
};

// Runs a validated config. Throws std::invalid_argument carrying the joined
// validation errors if the config is bad.
RunResult run_config_text(const std::string &text, unsigned jobs = 1);

// (name, one-line description) for every experiment this build knows.
std::vector<std::pair<std::string, std::string>> experiment_catalog();

} // namespace hilop::experiments

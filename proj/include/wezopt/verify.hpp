#pragma once

#include <string>
#include <vector>

#include "wezopt/config.hpp"

namespace wezopt {

/// Result of one self-check suite. Failures are content, not exceptions.
struct SuiteResult {
    std::string name;
    bool passed;
    std::string detail;
};

/// Built-in oracle suites: engagement-zone spot values, transition
/// probability simplex sampling, full-vs-reduced dynamics consistency, and
/// field persistence round-trips.
std::vector<SuiteResult> run_verification(const RunConfig& config);

/// JSON report, one entry per suite plus an overall flag.
std::string verification_report_json(const std::vector<SuiteResult>& results);

}  // namespace wezopt

// acceptance.hpp — the verification suite run by `bathlab verify` and the
// standalone acceptance binary: one oracle- or property-based criterion per
// entry, each printing a single pass/fail line.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace bathlab {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    double budget_seconds = 0.0;
};

struct AcceptanceOptions {
    std::size_t workers = 0;
    // run only these 1-based criterion indices; empty = all
    std::vector<int> only;
};

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream& log);

bool all_passed(const std::vector<CriterionResult>& results);

} // namespace bathlab

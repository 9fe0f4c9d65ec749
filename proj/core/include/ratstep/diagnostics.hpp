#pragma once

#include <string>
#include <vector>

namespace ratstep {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Quick property checks across all modules (runs in a few seconds). Used by
/// `ratstep check`; the full suites live in the test tree.
[[nodiscard]] std::vector<CheckResult> run_self_checks();

}  // namespace ratstep

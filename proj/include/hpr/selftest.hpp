#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hpr {

struct SelftestOptions {
    std::uint64_t seed = 1;
    /// Flips one sign in a copy of the octonion multiplication template used
    /// by the algebra group, proving the invariant suite detects table
    /// defects.
    bool inject_octonion_sign_defect = false;
};

struct SelftestResult {
    std::string group;
    bool passed = false;
    std::string detail;
};

/// Runs the algebra, representation, transform and gradient invariant groups
/// and reports one pass/fail line per group.
std::vector<SelftestResult> run_selftest(const SelftestOptions& options);

}  // namespace hpr

#pragma once

// Self-test harness behind `fiberq validate`: a fixed set of small,
// deterministic checks of the operator algebra, builders, integrator and
// configuration layer.

#include <string>
#include <vector>

namespace fiberq {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<CheckResult> run_invariant_suite();

}  // namespace fiberq

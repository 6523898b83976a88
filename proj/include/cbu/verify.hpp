#pragma once
// The ten-part certificate suite behind `cbu verify-all` and the
// acceptance runner.  Each criterion bundles named sub-checks with
// margins/residuals; stated tolerances that belong to a criterion
// (1e-12 radii, 1e-5 displacements, ...) are fixed here, while sampling
// density, seed and the identity tolerance come from the options.

#include <string>
#include <vector>

#include "cbu/report.hpp"
#include "cbu/sampling.hpp"

namespace cbu {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool pass = false;
    /** Wall time of this criterion alone. */
    double seconds = 0;
    std::vector<CheckResult> checks;
    explicit operator bool() const { return pass; }
};

/** One criterion by index (1..10); throws std::invalid_argument outside
    that range. */
CriterionResult run_criterion(int index, const ZeroTestOptions& opts = {});

/** All ten, in order. */
std::vector<CriterionResult> run_full_suite(const ZeroTestOptions& opts = {});

}  // namespace cbu

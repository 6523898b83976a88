// Acceptance gate: all ten criteria at their stated tolerances, one line
// each, nonzero exit on any failure.  Criteria with stated time budgets
// fail here when they blow them.

#include <cstdio>
#include <map>

#include "cbu/verify.hpp"

int main() {
    cbu::ZeroTestOptions opts;  // 256 samples, 1e-9, fixed seed
    const std::map<int, double> budget{{1, 5.0}, {7, 2.0}, {9, 30.0}};

    bool all_pass = true;
    for (int i = 1; i <= 10; ++i) {
        cbu::CriterionResult crit = cbu::run_criterion(i, opts);
        bool pass = crit.pass;
        std::string note;
        auto limit = budget.find(i);
        if (limit != budget.end() && crit.seconds >= limit->second) {
            pass = false;
            note = " [over time budget]";
        }
        if (!pass && crit.pass == false) {
            for (const cbu::CheckResult& c : crit.checks) {
                if (!c.pass) {
                    note = " [first failure: " + c.name +
                           (c.detail.empty() ? "" : ", " + c.detail) + "]";
                    break;
                }
            }
        }
        std::printf("%s criterion %2d: %s (%zu checks, %.2fs)%s\n", pass ? "PASS" : "FAIL", i,
                    crit.name.c_str(), crit.checks.size(), crit.seconds, note.c_str());
        all_pass = all_pass && pass;
    }
    return all_pass ? 0 : 1;
}

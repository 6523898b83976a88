#pragma once
// Cross-construction comparison: put surgery, gromov and cut models of a
// common weight (a, b) into radial-Hamiltonian shape and certify convex
// paths between every applicable pair.

#include <string>
#include <vector>

#include "cbu/radial.hpp"

namespace cbu {

enum class PairVerdict { Pass, Fail, NotApplicable };

struct ComparisonCell {
    std::string lhs;
    std::string rhs;
    PairVerdict verdict = PairVerdict::NotApplicable;
    double min_margin = 0;
    std::string detail;
};

struct ComparisonMatrix {
    int a = 1;
    int b = 1;
    std::vector<ComparisonCell> cells;
    bool all_applicable_pass = false;
    /** The shared relative band [band_lo, band_hi]. */
    double band_lo = 0;
    double band_hi = 0;
};

/** Builds every presentation available at weight (a, b) (surgery only
    when a = 1), checks each individually, then runs convex_path on each
    pair.  Throws std::invalid_argument for gcd(a, b) != 1. */
ComparisonMatrix compare_constructions(int a, int b, const ZeroTestOptions& opts = {});

}  // namespace cbu

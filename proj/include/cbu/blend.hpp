#pragma once
// Monotone C^2 interpolation between two increasing branches.
//
// The join keeps the inner branch up to x_in and the outer branch from
// x_out, and crosses the band through a straight segment: a short
// smoothstep blend onto the secant-like line, the line itself, and a
// second blend off it.  Smoothstep blending on *values* toward a line
// placed strictly between the branch values keeps the slope positive,
// which a plain derivative-matched Hermite blend does not (it undershoots
// when the branches' slopes differ enough); monotonicity is still
// certified by a dense sweep rather than assumed.

#include <string>

#include "cbu/sampling.hpp"

namespace cbu {

struct JoinResult {
    /** Piecewise expression in the named coordinate. */
    Expr value;
    /** Symbolic derivative of value. */
    Expr slope;
    double x_in = 0;
    double x1 = 0;  // straight segment edges
    double x2 = 0;
    double x_out = 0;
    /** min of slope over the certification sweep. */
    double min_slope = 0;
};

/** Joins inner (valid up to x_in) to outer (valid from x_out) across
    (x_in, x_out).  The result is C^2 at all four joints by construction
    (checked numerically) and certified strictly increasing on
    [cert_lo, cert_hi] by a grid sweep of the slope; a failed certificate
    throws instead of returning.  Requires outer(x2) > inner(x1). */
JoinResult monotone_join(const Expr& inner, const Expr& outer, const std::string& coord,
                         double x_in, double x_out, double cert_lo, double cert_hi,
                         const Binding& params = {}, int grid = 4096);

}  // namespace cbu

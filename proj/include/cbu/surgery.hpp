#pragma once
// Surgery blow-up along a transverse loop: interpolate the radial profile
// between lambda's r^2 and the twisted l - r^{-2}, glue the one-form
// H(r) dtheta + alpha_std on the tube chart, and certify the construction
// (contactness, inner coincidence with lambda, outer proportionality to
// the twist pullback of eta) before handing the model back.

#include <array>
#include <vector>

#include "cbu/blend.hpp"
#include "cbu/models.hpp"

namespace cbu {

struct InterpolationProfile {
    int l = 0;
    double r_in = 0;
    double r_out = 0;
    double R = 0;
    /** H as a piecewise expression in "r": r^2 below r_in, l - r^{-2}
        above r_out, monotone join between. */
    Expr H;
    /** dH/dr. */
    Expr Hp;
    double x1 = 0;  // straight-segment edges inside the band
    double x2 = 0;
    /** Monotonicity certificate: min Hp over the dense sweep. */
    double min_slope = 0;
};

/** Requires 0 < r_in < r_out < R and l >= 1.  Throws when the band is
    infeasible or the monotonicity certificate fails. */
InterpolationProfile build_profile(int l, double r_in = 0.5, double r_out = 1.5, double R = 2.0);

/** (r, H, H') rows on a uniform grid over (0, R], for plotting. */
std::vector<std::array<double, 3>> profile_grid(const InterpolationProfile& profile, int points);

struct SurgeryBlowupModel {
    int l = 0;
    TubeModel tube;
    InterpolationProfile profile;
    /** H(r) dtheta + alpha_std on the tube chart. */
    DiffForm alpha_glued;
    DivisorDescriptor divisor;
    /** Stored certificates, re-checked at construction. */
    ContactReport contact;
    FormZeroReport inner_coincidence;   // alpha_glued - lambda on [0.05, r_in]
    RatioReport outer_ratio;            // top(alpha_glued) / top(phi_l^* eta) outside r_out
};

/** Builds and verifies the glued model on the given tube (the blown-up
    chart; r_max plays R).  Band edges default to the proof's [0, 1/2] and
    (3/2, R).  Every stored certificate is checked before return. */
SurgeryBlowupModel build_surgery_blowup(int l, const TubeModel& tube, double r_in = 0.5,
                                        double r_out = 1.5);

/** Whether the k- and l-twist gluings are smoothly isotopic: (k - l) n
    must be even. */
bool isotopy_parity(int k, int l, int n);

}  // namespace cbu

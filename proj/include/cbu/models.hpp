#pragma once
// The named coordinate models: the standard tube S^1 x (r_min, r_max) x
// S^{2n-1} with its contact forms, the twist / covering / squeezing maps
// between tubes, and the two affine charts of the linear blow-up of C^2.
//
// Angles are 2*pi-periodic throughout; fiber spheres use Hopf coordinates
// (rho, phi1, phi2) for n = 2 and a single angle phi1 for n = 1.

#include <string>
#include <vector>

#include "cbu/forms.hpp"

namespace cbu {

struct TubeModel {
    int n;  // fiber half-dimension: S^{2n-1} fiber
    double r_min = 0;
    double r_max = 0;
    ChartPtr chart;
    /** Standard contact form of the fiber sphere (Hopf form for n = 2). */
    DiffForm alpha_std;
    /** Reeb field of alpha_std on the fiber (Hopf field). */
    VectorField reeb_std;
    /** dtheta - r^2 alpha_std. */
    DiffForm eta;
    /** r^2 dtheta + alpha_std. */
    DiffForm lambda;
    std::vector<std::string> fiber_angles;

    /** Representative (l - r^-2) dtheta + alpha_std of the structure xi_l. */
    DiffForm xi_rep(const Expr& l) const;
};

/** Standard tube; requires n in {1, 2} and 0 < r_min < r_max.  Both eta
    and lambda are contact-checked before return. */
TubeModel make_tube(int n, double r_min, double r_max);

/** What replaces the blown-up locus at r = 0: the fiber sphere S^{2n-1}
    carrying alpha_std, possibly quotiented to a lens space. */
struct DivisorDescriptor {
    int n = 0;
    /** 1 = the standard sphere; k > 1 = the lens quotient L(k; 1, ..., 1). */
    int lens_order = 1;
    std::string form_text;
    /** Caveats that are recorded but not certified, e.g. how strongly the
        divisor type depends on the construction weights. */
    std::string note;

    bool is_standard_sphere() const { return lens_order == 1; }
};

SmoothMap identity_map(const ChartPtr& chart);

/** Twist map: (theta, r, p, phi_i) -> (theta, r, p, phi_i + l theta). */
SmoothMap phi_map(const TubeModel& tube, int l);

/** Covering twist: theta -> a theta, phi_i -> phi_i + b theta; records an
    a-sheeted cover (a >= 1). */
SmoothMap phi_ab(const TubeModel& tube, int a, int b);

/** Deck rotation of the phi_ab cover: theta += 2 pi / a,
    phi_i -= 2 pi b / a. */
SmoothMap deck_ab(const TubeModel& tube, int a, int b);

/** Squeezing map: r -> r / sqrt(1 + k r^2) with a k-fold angular twist
    phi_i += k theta.  Pulls eta back to eta / (1 + k r^2). */
SmoothMap psi_squeeze(const TubeModel& tube, int k);

/** The radial part alone: r -> r / sqrt(1 + k r^2), angles fixed. */
SmoothMap radial_squeeze(const TubeModel& tube, int k);

/** Image radius R0 / sqrt(1 + k R0^2) of the squeezing map. */
double squeeze_radius(int k, double R0);

/** Smallest integer k >= 1 with squeeze_radius(k, R0) < eps. */
int min_squeeze_parameter(double R0, double eps);

/** Two affine charts of the blow-up of C^2 at the origin, in real
    coordinates.  chart0 covers p = (t, t w), chart1 covers p = (t w, t);
    the exceptional locus is t = 0 in either chart. */
struct BlowupChartPair {
    ChartPtr chart0;   // (w1, w2, t1, t2)
    ChartPtr chart1;   // same names, the other trivialization
    /** chart0 with the w-box kept away from w = 0, where the transition
        to chart1 is defined. */
    ChartPtr overlap;
    ChartPtr plane;    // C^2 as (x1, y1, x2, y2)
    SmoothMap transition;  // overlap -> chart1: w' = 1/w, t' = t w
    SmoothMap sigma0;      // chart0 -> plane, (w, t) -> (t, t w)
    SmoothMap sigma1;      // chart1 -> plane, (w, t) -> (t w, t)
};

BlowupChartPair linear_blowup_charts();

}  // namespace cbu

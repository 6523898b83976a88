#pragma once
// Radial contact fibrations over the disk: Hamiltonians H(r) with
// H = O(r^2) and dH/dr > 0, presentations of the three blow-up
// constructions in that common shape, and the convex-interpolation
// certificate connecting two presentations that agree near the boundary.

#include <string>
#include <utility>
#include <vector>

#include "cbu/models.hpp"

namespace cbu {

struct RadialHamiltonian {
    /** H as an expression in the chart's radial coordinate "r". */
    Expr H;
    /** dH/dr. */
    Expr Hp;
    /** Declared vanishing order at r = 0 (always 2 here). */
    int vanishing_order = 2;
    /** Z_a-equivariance flag; 1 means no finite quotient. */
    int equivariance = 1;
};

struct FibrationPresentation {
    std::string provenance;  // "surgery", "gromov" or "cut"
    DivisorDescriptor fiber;
    TubeModel chart;
    RadialHamiltonian ham;
    /** Band edges: H is pinned to the ambient b - a r^{-2} above r_out. */
    double r_in = 0;
    double r_out = 0;

    /** The fibration contact form H dtheta + alpha_std. */
    DiffForm alpha() const;
};

/** Common chart geometry for the three presentations of weight (a, b):
    critical radius sqrt(a/b), interpolation band, chart radius. */
struct PresentationBands {
    double crit = 0;
    double r_in = 0;
    double r_out = 0;
    double R = 0;
};

PresentationBands presentation_bands(int a, int b);

/** The glued surgery profile (a = 1 construction) as a presentation. */
FibrationPresentation surgery_presentation(int l);

/** Connection-style presentation from the pulled-back Reeb data of the
    (a, b) cover. */
FibrationPresentation gromov_presentation(int a, int b);

/** Presentation of the contact cut of weight (a, b): exact outer match
    b - a r^{-2} through the reparametrized radius. */
FibrationPresentation cut_presentation(int a, int b);

struct RadialCheckReport {
    bool ok = false;
    /** Empty when ok; names the violated inequality otherwise. */
    std::string violated;
    Binding witness;
    /** min dH/dr over [0.05, R]. */
    double slope_margin = 0;
    /** |H| and |dH/dr| at the core probe r = 1e-8. */
    double origin_value = 0;
    double origin_slope = 0;
    ContactReport contact;
    bool equivariant_ok = true;
    explicit operator bool() const { return ok; }
};

/** Certifies every RadialHamiltonian invariant: O(r^2) at the core,
    positive slope margin, contactness of H dtheta + alpha_std, and (for
    equivariance > 1) invariance under the diagonal Z_a rotation. */
RadialCheckReport check_radial(const FibrationPresentation& F, const ZeroTestOptions& opts = {});

struct ConvexPathReport {
    bool ok = false;
    /** (t, slope margin) per grid point, 33 values including endpoints. */
    std::vector<std::pair<double, double>> grid;
    double min_margin = 0;
    std::string failure;
    explicit operator bool() const { return ok; }
};

/** Certifies the straight-line path between two boundary-matched,
    equally-equivariant Hamiltonians: endpoints and every interior grid
    point must pass check_radial, and the path is relative to the band
    [band_lo, band_hi].  Mismatched inputs throw. */
ConvexPathReport convex_path(const FibrationPresentation& F0, const FibrationPresentation& F1,
                             double band_lo, double band_hi, const ZeroTestOptions& opts = {});

}  // namespace cbu

#pragma once
// Contact cut of the model tube along the zero level of the moment map
// of the weight-(a, b) circle action.

#include <string>

#include "cbu/bw.hpp"
#include "cbu/models.hpp"
#include "cbu/radial.hpp"

namespace cbu {

struct CircleActionSpec {
    int a = 1;
    int b = 1;
    TubeModel tube;
    /** Infinitesimal generator a d/dtheta + b R_std. */
    VectorField generator;
    /** L_X eta, certified zero at construction time. */
    FormZeroReport invariance;

    /** Time-s flow of the generator as a map of the tube. */
    SmoothMap flow(double s) const;
};

/** Builds the weight-(a, b) action on the tube and certifies that eta is
    invariant (Cartan residual at the stated tolerance).  Throws
    std::logic_error when the certificate fails. */
CircleActionSpec make_action(int a, int b, const TubeModel& tube, const ZeroTestOptions& opts = {});

struct MomentMap {
    int a = 1;
    int b = 1;
    /** mu = eta(X) = a - b r^2. */
    Expr mu;
    /** sqrt(a/b). */
    double zero_radius = 0;
    bool has_zero_level = false;
    /** d mu / dr at the zero radius; regular crossing needs |.| > 0. */
    double crossing_slope = 0;
};

/** Pairs the action with eta and locates the zero level.  Asserts the
    closed form mu = a - b r^2 against the contraction eta(X).  Throws
    "no zero level" when b = 0 (mu is constant in r). */
MomentMap moment_map(const CircleActionSpec& spec, const ZeroTestOptions& opts = {});

/** Radius of the zero level, sqrt(a/b).  Same error contract as
    moment_map. */
double zero_radius(const CircleActionSpec& spec, const ZeroTestOptions& opts = {});

/** Same, but through a radial profile Phi(r) with Phi(0) = 0 and
    Phi' > 0: mu = a - b Phi(r)^2, zero at Phi(r) = sqrt(a/b), located by
    bisection.  Monotonicity of Phi is sampled and enforced. */
MomentMap moment_map_with_profile(const CircleActionSpec& spec, const Expr& Phi,
                                  const ZeroTestOptions& opts = {});

struct CutModel {
    int a = 1;
    int b = 1;
    double zero_radius = 0;
    /** The half-tube r > zero_radius where mu < 0. */
    ChartPtr region;
    /** Integer data of the zero-level quotient. */
    QuotientDescriptor quotient;
    /** The divisor as a lens space L(a; 1, ..., 1). */
    DivisorDescriptor divisor;
    /** Pushforward certificate: d phi_ab (d/dtheta) = X o phi_ab. */
    FormZeroReport generator_pullback;
    FormZeroReport invariance;
    MomentMap mu;
    /** Radial presentation of the cut for uniqueness comparisons. */
    FibrationPresentation presentation;
};

/** Performs the cut.  Throws std::invalid_argument("action not free...")
    for gcd(a, b) != 1, std::invalid_argument("tube too small...") when
    the zero radius is outside the tube, and std::logic_error when any
    certificate fails. */
CutModel make_cut(const CircleActionSpec& spec, const ZeroTestOptions& opts = {});

}  // namespace cbu

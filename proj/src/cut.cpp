#include "cbu/cut.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cbu {

namespace {

VectorField action_generator(const TubeModel& tube, int a, int b) {
    VectorField dtheta = VectorField::basis(tube.chart, "theta");
    return dtheta.scaled(Expr::rational(a)) + tube.reeb_std.scaled(Expr::rational(b));
}

}  // namespace

SmoothMap CircleActionSpec::flow(double s) const {
    const ChartPtr& chart = tube.chart;
    std::vector<Expr> comps;
    comps.reserve(chart->coords.size());
    for (const std::string& name : chart->coords) {
        Expr slot = Expr::coordinate(name);
        if (name == "theta") {
            slot = slot + Expr::real(a * s);
        } else {
            for (const std::string& angle : tube.fiber_angles) {
                if (name == angle) slot = slot + Expr::real(b * s);
            }
        }
        comps.push_back(slot);
    }
    return SmoothMap(chart, chart, std::move(comps));
}

CircleActionSpec make_action(int a, int b, const TubeModel& tube, const ZeroTestOptions& opts) {
    if (a == 0 && b == 0) throw std::invalid_argument("action weights are both zero");
    VectorField X = action_generator(tube, a, b);
    FormZeroReport invariance = form_is_zero(lie_derivative(X, tube.eta), {}, opts);
    if (!invariance) {
        std::ostringstream msg;
        msg << "eta is not invariant under the (" << a << ", " << b
            << ") action: Lie derivative residual " << invariance.worst_ratio;
        throw std::logic_error(msg.str());
    }
    return CircleActionSpec{a, b, tube, std::move(X), std::move(invariance)};
}

MomentMap moment_map(const CircleActionSpec& spec, const ZeroTestOptions& opts) {
    if (spec.b == 0) {
        throw std::invalid_argument("no zero level: mu = a is constant when b = 0");
    }
    const TubeModel& tube = spec.tube;
    Expr contracted = interior_product(spec.generator, tube.eta).coefficient({});
    Expr r = Expr::coordinate("r");
    Expr closed = Expr::rational(spec.a) - Expr::rational(spec.b) * r * r;
    ZeroReport match = is_zero(contracted - closed, tube.chart->box, {}, opts);
    if (!match) {
        throw std::logic_error("moment map eta(X) does not reduce to a - b r^2");
    }

    MomentMap mm;
    mm.a = spec.a;
    mm.b = spec.b;
    mm.mu = closed;
    if (spec.b > 0 && spec.a > 0) {
        mm.has_zero_level = true;
        mm.zero_radius = std::sqrt(double(spec.a) / spec.b);
        mm.crossing_slope = -2.0 * spec.b * mm.zero_radius;
    }
    return mm;
}

double zero_radius(const CircleActionSpec& spec, const ZeroTestOptions& opts) {
    return moment_map(spec, opts).zero_radius;
}

MomentMap moment_map_with_profile(const CircleActionSpec& spec, const Expr& Phi,
                                  const ZeroTestOptions& opts) {
    if (spec.b == 0) {
        throw std::invalid_argument("no zero level: mu = a is constant when b = 0");
    }
    const TubeModel& tube = spec.tube;
    Binding probe{{"r", 1e-9}};
    if (std::abs(Phi.eval(probe)) > 1e-6) {
        throw std::invalid_argument("profile does not vanish at the origin");
    }
    Expr Phip = Phi.derivative("r");
    const DomainBox::Interval& range = tube.chart->box.interval("r");
    const double lo = range.lo;
    const double hi = range.hi;
    const int grid = 512;
    for (int i = 0; i <= grid; ++i) {
        double r = lo + (hi - lo) * i / grid;
        if (Phip.eval(Binding{{"r", r}}) <= 0) {
            std::ostringstream msg;
            msg << "profile not increasing at r = " << r;
            throw std::invalid_argument(msg.str());
        }
    }

    MomentMap mm;
    mm.a = spec.a;
    mm.b = spec.b;
    mm.mu = Expr::rational(spec.a) - Expr::rational(spec.b) * Phi * Phi;

    auto mu_at = [&](double r) { return mm.mu.eval(Binding{{"r", r}}); };
    double mu_lo = mu_at(lo);
    double mu_hi = mu_at(hi);
    if (mu_lo <= 0 || mu_hi >= 0) return mm;  // no regular crossing inside
    double left = lo;
    double right = hi;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (left + right);
        (mu_at(mid) > 0 ? left : right) = mid;
    }
    mm.has_zero_level = true;
    mm.zero_radius = 0.5 * (left + right);
    mm.crossing_slope = mm.mu.derivative("r").eval(Binding{{"r", mm.zero_radius}});
    (void)opts;
    return mm;
}

CutModel make_cut(const CircleActionSpec& spec, const ZeroTestOptions& opts) {
    const int a = spec.a;
    const int b = spec.b;
    if (a < 1 || b < 1) {
        throw std::invalid_argument("cut weights must be positive (no zero level otherwise)");
    }
    if (std::gcd(a, b) != 1) {
        throw std::invalid_argument("action not free: gcd(a, b) != 1");
    }

    MomentMap mu = moment_map(spec, opts);
    const TubeModel& tube = spec.tube;
    if (tube.r_max * tube.r_max < double(a) / b || mu.zero_radius <= tube.r_min) {
        std::ostringstream msg;
        msg << "tube too small: zero level at r = " << mu.zero_radius << " is outside ("
            << tube.r_min << ", " << tube.r_max << ")";
        throw std::invalid_argument(msg.str());
    }
    if (std::abs(mu.crossing_slope) <= 0) {
        throw std::logic_error("moment map crossing is not regular");
    }

    SmoothMap cover = phi_ab(tube, a, b);
    FormZeroReport related =
        vector_related(cover, VectorField::basis(tube.chart, "theta"), spec.generator, {}, opts);
    if (!related) {
        throw std::logic_error("covering map does not push d/dtheta to the action generator");
    }

    FibrationPresentation presentation = cut_presentation(a, b);
    RadialCheckReport radial = check_radial(presentation, opts);
    if (!radial) {
        throw std::logic_error("cut presentation fails its radial certificate: " + radial.violated);
    }

    DivisorDescriptor divisor{tube.n, a, tube.alpha_std.to_text()};
    divisor.note = "divisor type varies with the weights (a, b); recorded, not classified";

    return CutModel{a,
                    b,
                    mu.zero_radius,
                    restrict_chart(tube.chart, "r", mu.zero_radius, tube.r_max),
                    product_quotient(a, b),
                    std::move(divisor),
                    std::move(related),
                    spec.invariance,
                    std::move(mu),
                    std::move(presentation)};
}

}  // namespace cbu

#include "cbu/uniqueness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "cbu/surgery.hpp"

namespace cbu {

DiffForm FibrationPresentation::alpha() const {
    return DiffForm::d_coordinate(chart.chart, "theta").scaled(ham.H) + chart.alpha_std;
}

PresentationBands presentation_bands(int a, int b) {
    if (a < 1 || b < 1) throw std::invalid_argument("presentation weights must be positive");
    PresentationBands bands;
    bands.crit = std::sqrt(double(a) / b);
    bands.R = std::max(2.0, bands.crit + 0.5);
    bands.r_out = std::max(1.5, bands.crit + 0.6 * (bands.R - bands.crit));
    bands.r_in = 0.3 * bands.r_out;
    return bands;
}

namespace {

/* The straight-segment edges monotone_join will pick for this band; the
   cut presentation needs them before the join exists to scale its inner
   branch. */
std::pair<double, double> segment_edges(const PresentationBands& bands) {
    double delta = (bands.r_out - bands.r_in) / 10.0;
    return {bands.r_in + delta, bands.r_out - delta};
}

FibrationPresentation with_common_chart(std::string provenance, int lens_order,
                                        const PresentationBands& bands, RadialHamiltonian ham) {
    TubeModel tube = make_tube(2, 0.02, bands.R);
    DivisorDescriptor fiber{tube.n, lens_order, tube.alpha_std.to_text()};
    return FibrationPresentation{std::move(provenance), std::move(fiber), std::move(tube),
                                 std::move(ham),         bands.r_in,      bands.r_out};
}

}  // namespace

FibrationPresentation surgery_presentation(int l) {
    if (l < 1) throw std::invalid_argument("surgery twist must be >= 1");
    PresentationBands bands = presentation_bands(1, l);
    InterpolationProfile prof = build_profile(l, bands.r_in, bands.r_out, bands.R);
    return with_common_chart("surgery", 1, bands,
                             RadialHamiltonian{prof.H, prof.Hp, 2, 1});
}

FibrationPresentation gromov_presentation(int a, int b) {
    PresentationBands bands = presentation_bands(a, b);
    auto [x1, x2] = segment_edges(bands);
    // -g interpolates a/b + c2 r^2 up to r^2; c2 keeps the segment span
    // positive (x2 lies above the critical radius).
    double c2 = std::min(1.0, 0.5 * (x2 * x2 - double(a) / b) / (x1 * x1));
    Expr r = Expr::coordinate("r");
    Expr inner = Expr::rational(a, b) + Expr::real(c2) * r * r;
    Expr outer = r * r;
    JoinResult g = monotone_join(inner, outer, "r", bands.r_in, bands.r_out, 0.01, bands.R);
    Expr H = Expr::rational(b) - Expr::rational(a) / g.value;
    return with_common_chart("gromov", a, bands,
                             RadialHamiltonian{H, H.derivative("r"), 2, a});
}

FibrationPresentation cut_presentation(int a, int b) {
    PresentationBands bands = presentation_bands(a, b);
    auto [x1, x2] = segment_edges(bands);
    double span = b * x2 * x2 - a;
    if (span <= 0) throw std::logic_error("interpolation band sits below the critical radius");
    // Reparametrized radius: linear at the core, sqrt(b r^2 - a) outside,
    // so that H = b rho^2 / (rho^2 + a) hits b - a r^{-2} exactly.
    double c = 0.5 * std::sqrt(span) / x1;
    Expr r = Expr::coordinate("r");
    Expr inner = Expr::real(c) * r;
    Expr outer = Expr::sqrt(Expr::rational(b) * r * r - Expr::rational(a));
    JoinResult rho = monotone_join(inner, outer, "r", bands.r_in, bands.r_out, 0.01, bands.R);
    Expr rho2 = rho.value * rho.value;
    Expr H = (Expr::rational(b) * rho2) / (rho2 + Expr::rational(a));
    return with_common_chart("cut", a, bands,
                             RadialHamiltonian{H, H.derivative("r"), 2, a});
}

namespace {

SmoothMap diagonal_rotation(const TubeModel& tube, int order) {
    Expr turn = Expr::real(kTwoPi / order);
    std::vector<Expr> comps;
    for (const std::string& name : tube.chart->coords) {
        Expr slot = Expr::coordinate(name);
        bool shifted = name == "theta" ||
                       std::count(tube.fiber_angles.begin(), tube.fiber_angles.end(), name) > 0;
        comps.push_back(shifted ? slot + turn : slot);
    }
    return SmoothMap(tube.chart, tube.chart, std::move(comps));
}

}  // namespace

RadialCheckReport check_radial(const FibrationPresentation& F, const ZeroTestOptions& opts) {
    RadialCheckReport rep;
    auto fail = [&rep](const std::string& what, const Binding& where) {
        if (rep.violated.empty()) {
            rep.violated = what;
            rep.witness = where;
        }
    };

    const double r0 = 1e-8;
    Binding core{{"r", r0}};
    rep.origin_value = std::abs(F.ham.H.eval(core));
    rep.origin_slope = std::abs(F.ham.Hp.eval(core));
    if (rep.origin_value > 1e-10) fail("H = O(r^2) fails: H does not vanish at the core", core);
    if (rep.origin_slope > 1e-6) fail("H = O(r^2) fails: dH/dr does not vanish at the core", core);

    const double lo = 0.05;
    const double hi = F.chart.r_max - 0.02;
    const int grid = 1024;
    rep.slope_margin = std::numeric_limits<double>::infinity();
    double argmin = lo;
    for (int i = 0; i <= grid; ++i) {
        double r = lo + (hi - lo) * i / grid;
        double s = F.ham.Hp.eval(Binding{{"r", r}});
        if (s < rep.slope_margin) {
            rep.slope_margin = s;
            argmin = r;
        }
    }
    if (!(rep.slope_margin > 0)) fail("dH/dr > 0 fails away from the core", Binding{{"r", argmin}});

    rep.contact = contact_check(F.alpha(), {}, opts);
    if (!rep.contact) fail("H dtheta + alpha_std is not contact", rep.contact.witness);

    if (F.ham.equivariance > 1) {
        SmoothMap rot = diagonal_rotation(F.chart, F.ham.equivariance);
        FormZeroReport inv = form_is_zero(pullback(rot, F.alpha()) - F.alpha(), {}, opts);
        rep.equivariant_ok = bool(inv);
        if (!inv) fail("alpha is not invariant under the residual finite rotation", inv.witness);
    }

    rep.ok = rep.violated.empty();
    return rep;
}

ConvexPathReport convex_path(const FibrationPresentation& F0, const FibrationPresentation& F1,
                             double band_lo, double band_hi, const ZeroTestOptions& opts) {
    if (!F0.chart.chart->same_coords(*F1.chart.chart)) {
        throw std::invalid_argument("presentations live on different charts");
    }
    if (F0.ham.equivariance != F1.ham.equivariance) {
        throw std::invalid_argument("equivariance flags differ; no common quotient");
    }
    if (F0.fiber.lens_order != F1.fiber.lens_order || F0.fiber.n != F1.fiber.n) {
        throw std::invalid_argument("presentations have different divisors");
    }

    ChartPtr band = restrict_chart(F0.chart.chart, "r", band_lo, band_hi);
    ZeroReport boundary = is_zero(F0.ham.H - F1.ham.H, band->box, {}, opts);
    if (!boundary) {
        std::ostringstream msg;
        msg << "Hamiltonians differ on the boundary band [" << band_lo << ", " << band_hi
            << "]: worst ratio " << boundary.worst_ratio;
        throw std::invalid_argument(msg.str());
    }

    ConvexPathReport path;
    const int steps = 32;
    path.min_margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= steps; ++i) {
        Expr t = Expr::rational(i, steps);
        Expr s = Expr::rational(steps - i, steps);
        Expr Ht = s * F0.ham.H + t * F1.ham.H;
        FibrationPresentation Ft{"path",   F0.fiber, F0.chart,
                                 RadialHamiltonian{Ht, Ht.derivative("r"), 2, F0.ham.equivariance},
                                 F0.r_in,  F0.r_out};
        RadialCheckReport point = check_radial(Ft, opts);
        if (!point) {
            std::ostringstream msg;
            msg << "t = " << double(i) / steps << ": " << point.violated;
            path.failure = msg.str();
            path.ok = false;
            return path;
        }
        path.grid.emplace_back(double(i) / steps, point.slope_margin);
        path.min_margin = std::min(path.min_margin, point.slope_margin);
    }
    path.ok = true;
    return path;
}

ComparisonMatrix compare_constructions(int a, int b, const ZeroTestOptions& opts) {
    if (a < 1 || b < 1) throw std::invalid_argument("weights must be positive");
    if (std::gcd(a, b) != 1) throw std::invalid_argument("action not free: gcd(a, b) != 1");

    ComparisonMatrix matrix;
    matrix.a = a;
    matrix.b = b;
    PresentationBands bands = presentation_bands(a, b);
    matrix.band_lo = bands.r_out + 0.01;
    matrix.band_hi = bands.R - 0.02;

    struct Entry {
        std::string name;
        std::optional<FibrationPresentation> pres;
        RadialCheckReport check;
    };
    std::vector<Entry> entries(3);
    entries[0].name = "surgery";
    entries[1].name = "gromov";
    entries[2].name = "cut";
    if (a == 1) entries[0].pres = surgery_presentation(b);
    entries[1].pres = gromov_presentation(a, b);
    entries[2].pres = cut_presentation(a, b);
    for (Entry& e : entries) {
        if (e.pres) e.check = check_radial(*e.pres, opts);
    }

    bool all_pass = true;
    for (size_t i = 0; i < entries.size(); ++i) {
        for (size_t j = i + 1; j < entries.size(); ++j) {
            ComparisonCell cell;
            cell.lhs = entries[i].name;
            cell.rhs = entries[j].name;
            if (!entries[i].pres || !entries[j].pres) {
                cell.verdict = PairVerdict::NotApplicable;
                cell.detail = "surgery presentation needs a = 1";
                matrix.cells.push_back(std::move(cell));
                continue;
            }
            if (!entries[i].check || !entries[j].check) {
                const Entry& bad = entries[i].check ? entries[j] : entries[i];
                cell.verdict = PairVerdict::Fail;
                cell.detail = bad.name + " presentation fails: " + bad.check.violated;
            } else {
                try {
                    ConvexPathReport path = convex_path(*entries[i].pres, *entries[j].pres,
                                                        matrix.band_lo, matrix.band_hi, opts);
                    if (path) {
                        cell.verdict = PairVerdict::Pass;
                        cell.min_margin = path.min_margin;
                    } else {
                        cell.verdict = PairVerdict::Fail;
                        cell.detail = path.failure;
                    }
                } catch (const std::invalid_argument& e) {
                    cell.verdict = PairVerdict::Fail;
                    cell.detail = e.what();
                }
            }
            all_pass = all_pass && cell.verdict == PairVerdict::Pass;
            matrix.cells.push_back(std::move(cell));
        }
    }
    matrix.all_applicable_pass = all_pass;
    return matrix;
}

}  // namespace cbu

#include "cbu/surgery.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cbu {

InterpolationProfile build_profile(int l, double r_in, double r_out, double R) {
    if (l < 1) throw std::invalid_argument("twist parameter l must be >= 1");
    if (!(0 < r_in && r_in < r_out && r_out < R))
        throw std::invalid_argument("profile bands must satisfy 0 < r_in < r_out < R");

    auto r = Expr::coordinate("r");
    Expr inner = Expr::pow(r, Rational(2));
    Expr outer = Expr::rational(l) - Expr::pow(r, Rational(-2));
    auto join = monotone_join(inner, outer, "r", r_in, r_out, 0.01, R);

    InterpolationProfile profile;
    profile.l = l;
    profile.r_in = r_in;
    profile.r_out = r_out;
    profile.R = R;
    profile.H = join.value;
    profile.Hp = join.slope;
    profile.x1 = join.x1;
    profile.x2 = join.x2;
    profile.min_slope = join.min_slope;
    return profile;
}

std::vector<std::array<double, 3>> profile_grid(const InterpolationProfile& profile, int points) {
    if (points < 2) throw std::invalid_argument("profile grid needs at least two points");
    std::vector<std::array<double, 3>> rows;
    rows.reserve(points);
    for (int i = 1; i <= points; ++i) {
        double r = profile.R * i / points;
        Binding p;
        p.set("r", r);
        rows.push_back({r, profile.H.eval(p), profile.Hp.eval(p)});
    }
    return rows;
}

SurgeryBlowupModel build_surgery_blowup(int l, const TubeModel& tube, double r_in, double r_out) {
    auto profile = build_profile(l, r_in, r_out, tube.r_max);

    DiffForm alpha_glued =
        DiffForm::d_coordinate(tube.chart, "theta").scaled(profile.H) + tube.alpha_std;

    auto contact = contact_check(alpha_glued);
    if (!contact)
        throw std::logic_error("glued form failed its contact check at l = " + std::to_string(l));

    // Below r_in the profile is literally r^2, so the difference to lambda
    // must sample to zero on the inner band.
    double inner_lo = std::max(tube.r_min, 0.05);
    auto inner_chart = restrict_chart(tube.chart, "r", inner_lo, r_in);
    auto inner = form_is_zero(rechart(alpha_glued - tube.lambda, inner_chart));
    if (!inner) throw std::logic_error("glued form does not match lambda on the inner band");

    // Above r_out the model must be the twist pullback of eta up to a
    // single-signed factor (it is -r^-2 on the nose).
    auto pulled = pullback(phi_map(tube, l), tube.eta);
    int dim = tube.chart->dim();
    DiffForm top_glued = alpha_glued;
    DiffForm top_pulled = pulled;
    DiffForm d_glued = alpha_glued.d();
    DiffForm d_pulled = pulled.d();
    for (int i = 0; i < (dim - 1) / 2; ++i) {
        top_glued = top_glued.wedge(d_glued);
        top_pulled = top_pulled.wedge(d_pulled);
    }
    auto outer = top_coefficient_ratio(top_glued, top_pulled, "r", r_out, tube.r_max - 0.05);
    if (!outer.single_signed || !(outer.min_abs > 0))
        throw std::logic_error("outer band is not a conformal match of the twist pullback");

    DivisorDescriptor divisor{tube.n, 1, tube.alpha_std.to_text()};
    return SurgeryBlowupModel{l,       tube,  profile, std::move(alpha_glued),
                              divisor, contact, inner,   outer};
}

bool isotopy_parity(int k, int l, int n) { return ((k - l) * n) % 2 == 0; }

}  // namespace cbu

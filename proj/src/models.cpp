#include "cbu/models.hpp"

#include <cmath>
#include <stdexcept>

namespace cbu {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

Expr C(const std::string& name) { return Expr::coordinate(name); }

Expr square(const Expr& e) { return Expr::pow(e, Rational(2)); }

/** cos^2(rho) and sin^2(rho) weights of the Hopf form. */
std::pair<Expr, Expr> hopf_weights() {
    auto rho = C("rho");
    return {square(Expr::cos(rho)), square(Expr::sin(rho))};
}

}  // namespace

DiffForm TubeModel::xi_rep(const Expr& l) const {
    auto r = C("r");
    auto coeff = l - Expr::pow(r, Rational(-2));
    return alpha_std + DiffForm::d_coordinate(chart, "theta").scaled(coeff);
}

TubeModel make_tube(int n, double r_min, double r_max) {
    if (n != 1 && n != 2)
        throw std::invalid_argument("tube fiber half-dimension must be 1 or 2");
    if (!(0 < r_min && r_min < r_max))
        throw std::invalid_argument("tube radii must satisfy 0 < r_min < r_max");

    DomainBox box;
    box.add_angle("theta");
    box.add_interval("r", r_min, r_max);
    std::vector<std::string> coords{"theta", "r"};
    std::vector<std::string> fibers;
    if (n == 2) {
        // Hopf coordinates degenerate at the poles; the guard band keeps
        // samples off rho in {0, pi/2}.
        box.add_interval("rho", 0.0, kHalfPi);
        coords.push_back("rho");
    }
    fibers.push_back("phi1");
    if (n == 2) fibers.push_back("phi2");
    for (const auto& name : fibers) {
        box.add_angle(name);
        coords.push_back(name);
    }
    auto chart = make_chart(coords, box);

    DiffForm alpha(chart, 1);
    std::vector<Expr> reeb_components(chart->dim(), Expr::rational(0));
    if (n == 1) {
        alpha = DiffForm::d_coordinate(chart, "phi1");
        reeb_components[chart->index_of("phi1")] = Expr::rational(1);
    } else {
        auto [cos2, sin2] = hopf_weights();
        alpha = DiffForm::d_coordinate(chart, "phi1").scaled(cos2) +
                DiffForm::d_coordinate(chart, "phi2").scaled(sin2);
        reeb_components[chart->index_of("phi1")] = Expr::rational(1);
        reeb_components[chart->index_of("phi2")] = Expr::rational(1);
    }

    auto r = C("r");
    auto dtheta = DiffForm::d_coordinate(chart, "theta");
    TubeModel tube{n,
                   r_min,
                   r_max,
                   chart,
                   alpha,
                   VectorField(chart, std::move(reeb_components)),
                   dtheta - alpha.scaled(square(r)),
                   dtheta.scaled(square(r)) + alpha,
                   fibers};

    if (!contact_check(tube.eta) || !contact_check(tube.lambda))
        throw std::logic_error("tube forms failed their contact check");
    return tube;
}

SmoothMap identity_map(const ChartPtr& chart) {
    std::vector<Expr> comps;
    comps.reserve(chart->coords.size());
    for (const auto& name : chart->coords) comps.push_back(C(name));
    return SmoothMap(chart, chart, std::move(comps));
}

SmoothMap phi_map(const TubeModel& tube, int l) {
    auto map = identity_map(tube.chart);
    auto twist = Expr::rational(l) * C("theta");
    for (const auto& name : tube.fiber_angles) {
        int i = tube.chart->index_of(name);
        map.components[i] = map.components[i] + twist;
    }
    return map;
}

SmoothMap phi_ab(const TubeModel& tube, int a, int b) {
    if (a < 1) throw std::invalid_argument("covering multiplicity a must be >= 1");
    auto map = phi_map(tube, 0);
    auto twist = Expr::rational(b) * C("theta");
    map.components[tube.chart->index_of("theta")] = Expr::rational(a) * C("theta");
    for (const auto& name : tube.fiber_angles) {
        int i = tube.chart->index_of(name);
        map.components[i] = map.components[i] + twist;
    }
    map.cover_degree = a;
    return map;
}

SmoothMap deck_ab(const TubeModel& tube, int a, int b) {
    if (a < 1) throw std::invalid_argument("covering multiplicity a must be >= 1");
    auto map = identity_map(tube.chart);
    auto step = Expr::real(kTwoPi) / Expr::rational(a);
    map.components[tube.chart->index_of("theta")] = C("theta") + step;
    for (const auto& name : tube.fiber_angles) {
        int i = tube.chart->index_of(name);
        map.components[i] = map.components[i] - Expr::rational(b) * step;
    }
    return map;
}

SmoothMap radial_squeeze(const TubeModel& tube, int k) {
    if (k < 1) throw std::invalid_argument("squeeze parameter must be >= 1");
    auto map = identity_map(tube.chart);
    auto r = C("r");
    auto denom = Expr::rational(1) + Expr::rational(k) * square(r);
    map.components[tube.chart->index_of("r")] = r * Expr::pow(denom, Rational(-1, 2));
    return map;
}

SmoothMap psi_squeeze(const TubeModel& tube, int k) {
    auto map = radial_squeeze(tube, k);
    auto twist = Expr::rational(k) * C("theta");
    for (const auto& name : tube.fiber_angles) {
        int i = tube.chart->index_of(name);
        map.components[i] = map.components[i] + twist;
    }
    return map;
}

double squeeze_radius(int k, double R0) { return R0 / std::sqrt(1.0 + k * R0 * R0); }

int min_squeeze_parameter(double R0, double eps) {
    if (!(eps > 0)) throw std::invalid_argument("target radius must be positive");
    for (int k = 1;; ++k) {
        if (squeeze_radius(k, R0) < eps) return k;
        if (k > 1 << 26) throw std::invalid_argument("no feasible squeeze parameter");
    }
}

BlowupChartPair linear_blowup_charts() {
    std::vector<std::string> coords{"w1", "w2", "t1", "t2"};
    DomainBox full;
    for (const auto& c : coords) full.add_interval(c, -1.2, 1.2);
    auto chart0 = make_chart(coords, full);
    auto chart1 = make_chart(coords, full);

    DomainBox ovl;
    ovl.add_interval("w1", 0.35, 1.2);
    ovl.add_interval("w2", -0.4, 0.4);
    ovl.add_interval("t1", -1.2, 1.2);
    ovl.add_interval("t2", -1.2, 1.2);
    auto overlap = make_chart(coords, ovl);

    DomainBox pbox;
    for (const auto& c : {"x1", "y1", "x2", "y2"}) pbox.add_interval(c, -2.0, 2.0);
    auto plane = make_chart({"x1", "y1", "x2", "y2"}, pbox);

    auto w1 = C("w1"), w2 = C("w2"), t1 = C("t1"), t2 = C("t2");
    // Complex products t*w and t/w spelled out in real parts.
    Expr tw_re = t1 * w1 - t2 * w2;
    Expr tw_im = t1 * w2 + t2 * w1;
    Expr wnorm = square(w1) + square(w2);

    SmoothMap transition(overlap, chart1,
                         {w1 / wnorm, -(w2 / wnorm), tw_re, tw_im});
    SmoothMap sigma0(chart0, plane, {t1, t2, tw_re, tw_im});
    SmoothMap sigma1(chart1, plane, {tw_re, tw_im, t1, t2});

    return BlowupChartPair{chart0,  chart1, overlap, plane,
                           transition, sigma0, sigma1};
}

}  // namespace cbu

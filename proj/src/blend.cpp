#include "cbu/blend.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cbu {

namespace {

/** Quintic smoothstep in (x - a)/width: 0 at a, 1 at a + width, first and
    second derivatives zero at both ends. */
Expr smoothstep(const Expr& x, double a, double width) {
    Expr u = (x - Expr::real(a)) * Expr::real(1.0 / width);
    Expr u3 = u * u * u;
    return u3 * (Expr::rational(10) + u * (Expr::rational(-15) + Expr::rational(6) * u));
}

double eval_at(const Expr& e, const std::string& coord, double x, const Binding& params) {
    Binding point;
    point.set(coord, x);
    return e.eval(point, params);
}

}  // namespace

JoinResult monotone_join(const Expr& inner, const Expr& outer, const std::string& coord,
                         double x_in, double x_out, double cert_lo, double cert_hi,
                         const Binding& params, int grid) {
    if (!(x_in < x_out)) throw std::invalid_argument("join band is reversed or empty");
    if (!(cert_lo < cert_hi) || grid < 16)
        throw std::invalid_argument("bad certification range");

    double delta = (x_out - x_in) / 10.0;
    double x1 = x_in + delta;
    double x2 = x_out - delta;

    double inner_at = eval_at(inner, coord, x1, params);
    double outer_at = eval_at(outer, coord, x2, params);
    double span = outer_at - inner_at;
    if (!(span > 0))
        throw std::invalid_argument("join infeasible: outer branch does not exceed inner");

    // Straight segment strictly between the branch values.
    double y1 = inner_at + 0.1 * span;
    double y2 = outer_at - 0.1 * span;
    double m = (y2 - y1) / (x2 - x1);
    Expr x = Expr::coordinate(coord);
    Expr line = Expr::real(y1) + Expr::real(m) * (x - Expr::real(x1));

    Expr s_in = smoothstep(x, x_in, delta);
    Expr s_out = smoothstep(x, x2, delta);
    Expr blend_in = inner + s_in * (line - inner);
    Expr blend_out = line + s_out * (outer - line);

    JoinResult join;
    join.value = Expr::piecewise(x, {x_in, x1, x2, x_out},
                                 {inner, blend_in, line, blend_out, outer});
    join.slope = join.value.derivative(coord);
    join.x_in = x_in;
    join.x1 = x1;
    join.x2 = x2;
    join.x_out = x_out;

    // Joint smoothness to second order: the one-sided limits are the
    // adjacent pieces evaluated at the joint itself, so comparing them
    // there measures the true jump with no truncation term.
    struct Joint {
        double x;
        const Expr* left;
        const Expr* right;
    };
    const Joint joints[] = {{x_in, &inner, &blend_in},
                            {x1, &blend_in, &line},
                            {x2, &line, &blend_out},
                            {x_out, &blend_out, &outer}};
    for (const auto& joint : joints) {
        Expr left = *joint.left;
        Expr right = *joint.right;
        for (int order = 0; order <= 2; ++order) {
            double a = eval_at(left, coord, joint.x, params);
            double b = eval_at(right, coord, joint.x, params);
            if (std::fabs(a - b) > 1e-4 * (1.0 + std::fabs(a)))
                throw std::logic_error("join is not C^2 at " + std::to_string(joint.x));
            left = left.derivative(coord);
            right = right.derivative(coord);
        }
    }
    // And the assembled piecewise switches pieces where it should.
    for (double joint : {x_in, x1, x2, x_out}) {
        double a = eval_at(join.value, coord, joint - 1e-10, params);
        double b = eval_at(join.value, coord, joint + 1e-10, params);
        if (std::fabs(a - b) > 1e-6 * (1.0 + std::fabs(a)))
            throw std::logic_error("piecewise assembly is discontinuous at " +
                                   std::to_string(joint));
    }

    join.min_slope = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= grid; ++i) {
        double xv = cert_lo + (cert_hi - cert_lo) * i / grid;
        join.min_slope = std::min(join.min_slope, eval_at(join.slope, coord, xv, params));
    }
    if (!(join.min_slope > 0))
        throw std::logic_error("join monotonicity certificate failed: min slope " +
                               std::to_string(join.min_slope));
    return join;
}

}  // namespace cbu

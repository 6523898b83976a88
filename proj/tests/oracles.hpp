#pragma once
// Test-side oracles, written independently of the library's own
// verification helpers so the two can disagree.

#include <cmath>
#include <functional>
#include <vector>

#include "cbu/expr.hpp"

namespace oracles {

/** Five-point fourth-order finite difference, distinct from the library's
    three-point stencil. */
inline double derivative_fd5(const std::function<double(double)>& f, double x, double h = 1e-3) {
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

inline std::function<double(double)> as_function_of(const cbu::Expr& e, const std::string& coord,
                                                    cbu::Binding point, cbu::Binding params = {}) {
    return [e, coord, point, params](double x) mutable {
        point.set(coord, x);
        return e.eval(point, params);
    };
}

}  // namespace oracles

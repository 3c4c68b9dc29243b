#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "minsurf/errors.hpp"

namespace minsurf {

/// Adaptive Gauss-Kronrod quadrature on a finite interval. tol is the
/// relative error target; tolerances below ~1e-12 make the G7/K15 error
/// estimate stall on rounding noise and force full-depth subdivision, so the
/// default stays at 1e-12 with a moderate depth cap.
template <class F>
double integrate(F&& f, double a, double b, double tol = 1e-12, unsigned max_depth = 12) {
    if (!(a <= b)) throw ConfigError("integrate: need a <= b");
    if (a == b) return 0.0;
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        std::forward<F>(f), a, b, max_depth, tol, &err);
    return v;
}

} // namespace minsurf

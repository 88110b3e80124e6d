#pragma once

#include <functional>

namespace bellrmt {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int intervals = 0;
};

/// Adaptive Gauss-Kronrod (7/15) integration of f over [a, b] by global bisection of
/// the interval with the largest error estimate. Stops when the summed error estimate
/// is below abs_tol. Throws QuadratureFailure when max_intervals is exhausted or the
/// integrand is not finite.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tol = 1e-9, int max_intervals = 2000);

/// Iterated 1-d integration of f(x, y) over [ax, bx] x [ay, by].
QuadratureResult integrate_2d(const std::function<double(double, double)>& f, double ax, double bx, double ay,
                              double by, double abs_tol = 1e-9);

}  // namespace bellrmt

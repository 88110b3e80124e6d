#include "bellrmt/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <sstream>

#include "bellrmt/error.hpp"

namespace bellrmt {
namespace {

// Kronrod nodes (descending) with Kronrod and Gauss weights.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5 and the centre.
constexpr std::array<double, 4> kGauss = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(centre);
    double kronrod = kKronrod[7] * fc;
    double gauss = kGauss[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kNodes[i];
        const double pair = f(centre - dx) + f(centre + dx);
        kronrod += kKronrod[i] * pair;
        if (i % 2 == 1) gauss += kGauss[i / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    if (!std::isfinite(kronrod)) {
        std::ostringstream msg;
        msg << "non-finite integrand on [" << a << ", " << b << "]";
        throw Error(ErrorCode::QuadratureFailure, msg.str());
    }
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                           int max_intervals) {
    std::priority_queue<Segment> segments;
    Segment first = gauss_kronrod(f, a, b);
    double total = first.value;
    double error = first.error;
    segments.push(first);

    while (error > abs_tol) {
        if (static_cast<int>(segments.size()) >= max_intervals) {
            std::ostringstream msg;
            msg << "no convergence on [" << a << ", " << b << "] after " << max_intervals
                << " intervals (error estimate " << error << ")";
            throw Error(ErrorCode::QuadratureFailure, msg.str());
        }
        const Segment worst = segments.top();
        segments.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Segment left = gauss_kronrod(f, worst.a, mid);
        const Segment right = gauss_kronrod(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        segments.push(left);
        segments.push(right);
    }

    // Re-sum to drop the drift from incremental updates.
    QuadratureResult result;
    result.intervals = static_cast<int>(segments.size());
    while (!segments.empty()) {
        result.value += segments.top().value;
        result.error_estimate += segments.top().error;
        segments.pop();
    }
    return result;
}

QuadratureResult integrate_2d(const std::function<double(double, double)>& f, double ax, double bx, double ay,
                              double by, double abs_tol) {
    const double inner_tol = abs_tol / std::max(1.0, std::abs(bx - ax));
    return integrate(
        [&](double x) { return integrate([&](double y) { return f(x, y); }, ay, by, inner_tol).value; }, ax, bx,
        abs_tol);
}

}  // namespace bellrmt

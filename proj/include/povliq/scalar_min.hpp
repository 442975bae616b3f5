#pragma once

#include <cmath>
#include <limits>

namespace povliq {

struct ScalarMinimum {
    double x;
    double fx;
    int iterations;
};

// Brent's derivative-free minimization of f on [lo, hi]: golden-section steps
// safeguarded by successive parabolic interpolation. Stops once the bracket is
// within 2 * (sqrt(eps) * |x| + abs_tol) of the current best point.
template <class F>
ScalarMinimum brent_minimize(F&& f, double lo, double hi, double abs_tol, int max_iter = 500) {
    constexpr double golden = 0.3819660112501051; // (3 - sqrt(5)) / 2
    const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());

    double a = lo;
    double b = hi;
    double x = a + golden * (b - a);
    double w = x;
    double v = x;
    double fx = f(x);
    double fw = fx;
    double fv = fx;
    double d = 0.0;
    double e = 0.0;

    int iter = 0;
    for (; iter < max_iter; ++iter) {
        const double mid = 0.5 * (a + b);
        const double tol1 = sqrt_eps * std::abs(x) + abs_tol / 3.0;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - mid) <= tol2 - 0.5 * (b - a)) {
            break;
        }

        if (std::abs(e) > tol1) {
            // parabola through (v, fv), (w, fw), (x, fx)
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) {
                p = -p;
            } else {
                q = -q;
            }
            const double e_prev = e;
            e = d;
            if (std::abs(p) >= std::abs(0.5 * q * e_prev) || p <= q * (a - x) || p >= q * (b - x)) {
                e = (x >= mid) ? a - x : b - x;
                d = golden * e;
            } else {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) {
                    d = (mid >= x) ? tol1 : -tol1;
                }
            }
        } else {
            e = (x >= mid) ? a - x : b - x;
            d = golden * e;
        }

        const double u = (std::abs(d) >= tol1) ? x + d : x + ((d > 0.0) ? tol1 : -tol1);
        const double fu = f(u);

        if (fu <= fx) {
            if (u < x) {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if (u < x) {
                a = u;
            } else {
                b = u;
            }
            if (fu <= fw || w == x) {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u;
                fv = fu;
            }
        }
    }
    return {x, fx, iter};
}

} // namespace povliq

// Bracketed scalar root finding: bisection refined to a residual target,
// plus a scan-and-bisect helper for collecting every zero in an interval.
#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gss/errors.hpp"

namespace gss {

// Bisection on [lo, hi]. Requires a sign change (endpoints with f == 0
// count as roots). Refines until |f(mid)| <= f_tol or the bracket
// collapses to machine width. Throws NumericalError when the bracket is
// invalid, with the endpoint values as diagnostics.
template <class F>
double bisect(F&& f, double lo, double hi, double f_tol = 1e-12) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::signbit(flo) == std::signbit(fhi)) {
        throw NumericalError("bisect: no sign change on bracket [" + std::to_string(lo) +
                             ", " + std::to_string(hi) + "], f = (" + std::to_string(flo) +
                             ", " + std::to_string(fhi) + ")");
    }
    double mid = lo;
    for (int i = 0; i < 200; ++i) {
        mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;  // bracket at machine width
        const double fm = f(mid);
        if (std::abs(fm) <= f_tol) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return mid;
}

// Scans [lo, hi] at the given step, brackets every sign change and
// refines each with bisect(). Roots are returned in ascending order.
// A sample that is exactly zero is taken as a root directly.
template <class F>
std::vector<double> scan_roots(F&& f, double lo, double hi, double step,
                               double f_tol = 1e-12) {
    std::vector<double> roots;
    double a = lo;
    double fa = f(a);
    while (a < hi) {
        double b = std::min(a + step, hi);
        const double fb = f(b);
        if (fa == 0.0) {
            roots.push_back(a);
        } else if (fb != 0.0 && std::signbit(fa) != std::signbit(fb)) {
            roots.push_back(bisect(f, a, b, f_tol));
        }
        a = b;
        fa = fb;
    }
    if (fa == 0.0) roots.push_back(hi);
    return roots;
}

}  // namespace gss

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

#include "delidx/errors.hpp"

namespace delidx {

// Composite 16-point Gauss-Legendre with panel doubling. Stops when two
// successive refinements differ by less than tol (relative to max(1,|I|)).
double integrate_refining(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-10, int max_doublings = 16);

// Plain bisection; requires a sign change (or a zero) on [lo, hi].
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double xtol = 1e-15, int max_iter = 200);

// Cubic Hermite interpolation on [x0, x0+h] from values and first derivatives.
inline double hermite3(double f0, double d0, double f1, double d1, double h, double t) {
    const double t2 = t * t, t3 = t2 * t;
    return f0 * (2 * t3 - 3 * t2 + 1) + h * d0 * (t3 - 2 * t2 + t) +
           f1 * (-2 * t3 + 3 * t2) + h * d1 * (t3 - t2);
}

inline double hermite3_deriv(double f0, double d0, double f1, double d1, double h, double t) {
    const double t2 = t * t;
    return (f0 * (6 * t2 - 6 * t) + h * d0 * (3 * t2 - 4 * t + 1) +
            f1 * (-6 * t2 + 6 * t) + h * d1 * (3 * t2 - 2 * t)) / h;
}

// Quintic Hermite from values, first and second derivatives at both ends.
struct Quintic {
    double f0, d0, dd0, f1, d1, dd1, h;

    double value(double t) const {
        const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
        return f0 * (1 - 10 * t3 + 15 * t4 - 6 * t5) +
               h * d0 * (t - 6 * t3 + 8 * t4 - 3 * t5) +
               h * h * dd0 * 0.5 * (t2 - 3 * t3 + 3 * t4 - t5) +
               f1 * (10 * t3 - 15 * t4 + 6 * t5) +
               h * d1 * (-4 * t3 + 7 * t4 - 3 * t5) +
               h * h * dd1 * 0.5 * (t3 - 2 * t4 + t5);
    }

    double deriv(double t) const {
        const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
        return (f0 * (-30 * t2 + 60 * t3 - 30 * t4) +
                h * d0 * (1 - 18 * t2 + 32 * t3 - 15 * t4) +
                h * h * dd0 * 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4) +
                f1 * (30 * t2 - 60 * t3 + 30 * t4) +
                h * d1 * (-12 * t2 + 28 * t3 - 15 * t4) +
                h * h * dd1 * 0.5 * (3 * t2 - 8 * t3 + 5 * t4)) / h;
    }

    double second(double t) const {
        const double t2 = t * t, t3 = t2 * t;
        return (f0 * (-60 * t + 180 * t2 - 120 * t3) +
                h * d0 * (-36 * t + 96 * t2 - 60 * t3) +
                h * h * dd0 * 0.5 * (2 - 18 * t + 36 * t2 - 20 * t3) +
                f1 * (60 * t - 180 * t2 + 120 * t3) +
                h * d1 * (-24 * t + 84 * t2 - 60 * t3) +
                h * h * dd1 * 0.5 * (6 * t - 24 * t2 + 20 * t3)) / (h * h);
    }
};

// Least-squares slope of y against x.
double lsq_slope(const double* x, const double* y, std::size_t m);

} // namespace delidx

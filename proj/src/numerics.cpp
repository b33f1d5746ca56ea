#include "delidx/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace delidx {

namespace {

// 16-point Gauss-Legendre rule on [-1, 1]; the positive nodes and weights are
// computed once by Newton iteration on the Legendre polynomial.
struct GlRule {
    static constexpr int half = 8;
    double node[half];
    double weight[half];

    GlRule() {
        const int n = 2 * half;
        for (int i = 0; i < half; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int j = 2; j <= n; ++j) {
                    const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-16) break;
            }
            node[i] = x;
            weight[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }
};

const GlRule& gl16() {
    static const GlRule rule;
    return rule;
}

double gl16_panel(const std::function<double(double)>& f, double a, double b) {
    const GlRule& rule = gl16();
    const double mid = 0.5 * (a + b), half_width = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < GlRule::half; ++i) {
        const double dx = half_width * rule.node[i];
        sum += rule.weight[i] * (f(mid - dx) + f(mid + dx));
    }
    return half_width * sum;
}

} // namespace

double integrate_refining(const std::function<double(double)>& f, double a, double b,
                          double tol, int max_doublings) {
    double prev = gl16_panel(f, a, b);
    double diff = std::abs(prev);
    std::size_t panels = 1;
    for (int level = 1; level <= max_doublings; ++level) {
        panels *= 2;
        const double h = (b - a) / static_cast<double>(panels);
        double cur = 0.0;
        for (std::size_t j = 0; j < panels; ++j)
            cur += gl16_panel(f, a + static_cast<double>(j) * h, a + static_cast<double>(j + 1) * h);
        diff = std::abs(cur - prev);
        if (diff <= tol * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    throw numeric_error("quadrature did not converge after " + std::to_string(max_doublings) +
                            " refinements (last change " + std::to_string(diff) + ")",
                        diff);
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double xtol, int max_iter) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw numeric_error("bisection bracket has no sign change");
    for (int it = 0; it < max_iter && hi - lo > xtol * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double lsq_slope(const double* x, const double* y, std::size_t m) {
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / static_cast<double>(m), my = sy / static_cast<double>(m);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < m; ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

} // namespace delidx

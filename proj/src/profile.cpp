#include "delidx/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "delidx/errors.hpp"
#include "delidx/numerics.hpp"

namespace delidx {

namespace detail {

double hyp_G(int n, double H, double phi) {
    const double t = std::tan(phi);
    return std::pow(t, n - 1) / std::cos(phi) - H * std::pow(t, n);
}

double hyp_G_deriv(int n, double H, double phi) {
    const double s = std::sin(phi), c = std::cos(phi);
    const double W = std::pow(s, n - 1) / std::pow(c, n);
    const double R = ((n - 1) + s * s) / (s * c) - n * H / c;
    return W * R;
}

double hyp_G_second(int n, double H, double phi) {
    const double s = std::sin(phi), c = std::cos(phi);
    const double W = std::pow(s, n - 1) / std::pow(c, n);
    const double u = (n - 1) + s * s;
    const double R = u / (s * c) - n * H / c;
    const double Rp = 2.0 - u * (c * c - s * s) / (s * s * c * c) - n * H * s / (c * c);
    const double Wp = W * u / (s * c);
    return Wp * R + W * Rp;
}

} // namespace detail

namespace {

double eucl_P(int n, double mu, double x) {
    double p = 1.0;
    for (int i = 0; i < n - 1; ++i) p *= x;
    return p * (x - 1.0) + mu;
}

// Deflate P(X) = X^n - X^{n-1} + mu by its two positive roots; the quotient is
// positive on [lo, hi] and removes the endpoint zeros from the period integrand.
std::vector<double> deflated_quotient(int n, double mu, double lo, double hi) {
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    c[0] = 1.0;
    c[1] = -1.0;
    c[static_cast<std::size_t>(n)] = mu;
    auto deflate = [](const std::vector<double>& in, double r) {
        std::vector<double> out(in.size() - 1);
        out[0] = in[0];
        for (std::size_t k = 1; k < out.size(); ++k) out[k] = in[k] + out[k - 1] * r;
        return out;
    };
    return deflate(deflate(c, hi), lo);
}

double horner(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (double ck : c) v = v * x + ck;
    return v;
}

struct Rk4State {
    double v, d;
};

Rk4State rk4_step(const DelaunayFamily& fam, Rk4State y, double h) {
    auto f = [&](const Rk4State& s) {
        return Rk4State{s.d, profile_second_deriv(fam, s.v, s.d)};
    };
    const Rk4State k1 = f(y);
    const Rk4State k2 = f({y.v + 0.5 * h * k1.v, y.d + 0.5 * h * k1.d});
    const Rk4State k3 = f({y.v + 0.5 * h * k2.v, y.d + 0.5 * h * k2.d});
    const Rk4State k4 = f({y.v + h * k3.v, y.d + h * k3.d});
    return {y.v + h / 6.0 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v),
            y.d + h / 6.0 * (k1.d + 2 * k2.d + 2 * k3.d + k4.d)};
}

int pow2_at_least(double x) {
    int k = 1;
    while (k < x && k < (1 << 20)) k *= 2;
    return k;
}

} // namespace

double profile_second_deriv(const DelaunayFamily& family, double v, double d) {
    const double one = 1.0 + d * d;
    if (family.space == Space::Euclidean)
        return (family.n - 1) * one / v - family.n * one * std::sqrt(one);
    const double s = std::sin(v), c = std::cos(v);
    return one * ((family.n - 1) + s * s) / (s * c) -
           family.n * family.H * one * std::sqrt(one) / c;
}

double conservation_defect(const DelaunayFamily& family, double v, double d) {
    const double root = std::sqrt(1.0 + d * d);
    if (family.space == Space::Euclidean) {
        const double fn1 = std::pow(v, family.n - 1);
        return fn1 / root - fn1 * v - family.mu;
    }
    const double t = std::tan(v);
    const double tn1 = std::pow(t, family.n - 1);
    return tn1 / (std::cos(v) * root) - family.H * tn1 * t - family.mu;
}

std::pair<double, double> turning_radii(const DelaunayFamily& family) {
    validate(family);
    if (is_cylinder(family)) {
        const double v = cylinder_data(family.space, family.n, family.H).value;
        return {v, v};
    }
    const int n = family.n;
    const double mu = family.mu;
    if (family.space == Space::Euclidean) {
        const double f0 = static_cast<double>(n - 1) / n;
        const double left = std::pow(mu, 1.0 / (n - 1));
        auto P = [&](double x) { return eucl_P(n, mu, x); };
        const double lo = bisect_root(P, left, f0);
        const double hi = bisect_root(P, f0, 1.0);
        return {lo, hi};
    }
    const double H = family.H;
    const double nh = n * H;
    const double phi_star = std::asin(0.5 * (nh - std::sqrt(nh * nh - 4.0 * (n - 1))));
    auto g = [&](double phi) { return detail::hyp_G(n, H, phi) - mu; };
    const double lo = bisect_root(g, 1e-12, phi_star);
    double hi_bracket = phi_star + 0.5 * (M_PI / 2 - phi_star);
    for (int it = 0; it < 200 && g(hi_bracket) > 0; ++it)
        hi_bracket = 0.5 * (hi_bracket + M_PI / 2);
    const double hi = bisect_root(g, phi_star, hi_bracket);
    return {lo, hi};
}

double period(const DelaunayFamily& family) {
    validate(family);
    const double cap = mu_max(family.space, family.n, family.H);
    if (is_cylinder(family) ||
        (family.space == Space::Hyperbolic && cap - family.mu <= 1e-9 * cap))
        return cylinder_data(family.space, family.n, family.H).period;

    const auto [lo, hi] = turning_radii(family);
    const double mid = 0.5 * (lo + hi), rad = 0.5 * (hi - lo);
    const int n = family.n;
    const double mu = family.mu;
    const int cap_doublings = family.mu < kMuDegenerate ? 22 : 16;

    std::function<double(double)> integrand;
    if (family.space == Space::Euclidean) {
        const auto S = deflated_quotient(n, mu, lo, hi);
        integrand = [=](double theta) {
            const double f = mid + rad * std::sin(theta);
            const double fn1 = std::pow(f, n - 1);
            const double fn = fn1 * f;
            return (fn + mu) / std::sqrt(horner(S, f) * (fn1 + fn + mu));
        };
    } else {
        const double H = family.H;
        const double len = hi - lo;
        const double edge = 1e-4 * len;
        integrand = [=](double theta) {
            const double phi = mid + rad * std::sin(theta);
            double q;
            if (phi - lo < edge) {
                q = (detail::hyp_G_deriv(n, H, lo) +
                     0.5 * detail::hyp_G_second(n, H, lo) * (phi - lo)) /
                    (hi - phi);
            } else if (hi - phi < edge) {
                q = (-detail::hyp_G_deriv(n, H, hi) +
                     0.5 * detail::hyp_G_second(n, H, hi) * (hi - phi)) /
                    (phi - lo);
            } else {
                q = (detail::hyp_G(n, H, phi) - mu) / ((phi - lo) * (hi - phi));
            }
            const double t = std::tan(phi);
            const double tn = std::pow(t, n);
            const double W = tn / (t * std::cos(phi)); // tan^{n-1} / cos
            const double denom = mu + H * tn;
            return denom / std::sqrt(q * (W + denom));
        };
    }
    try {
        return 2.0 * integrate_refining(integrand, -M_PI / 2, M_PI / 2, 1e-10, cap_doublings);
    } catch (const numeric_error& e) {
        throw numeric_error(std::string("period quadrature failed: ") + e.what(), e.residual());
    }
}

double period_from_ode(const DelaunayFamily& family) {
    validate(family);
    if (is_cylinder(family)) return cylinder_data(family.space, family.n, family.H).period;
    const auto [lo, hi] = turning_radii(family);
    (void)hi;

    auto estimate = [&](double h) {
        Rk4State y{lo, 0.0};
        double x = 0.0;
        // Skip the bulge (first derivative sign change), then find the next neck.
        bool past_bulge = false;
        for (long step = 0; step < 4000000; ++step) {
            const Rk4State next = rk4_step(family, y, h);
            const double xn = x + h;
            if (past_bulge && y.d < 0.0 && next.d >= 0.0) {
                const double dd0 = profile_second_deriv(family, y.v, y.d);
                const double dd1 = profile_second_deriv(family, next.v, next.d);
                const double t = bisect_root(
                    [&](double s) { return hermite3(y.d, dd0, next.d, dd1, h, s); }, 0.0, 1.0);
                return x + t * h;
            }
            if (!past_bulge && y.d > 0.0 && next.d <= 0.0) past_bulge = true;
            y = next;
            x = xn;
            if (x > 100.0) throw numeric_error("profile minimum not found within 100 length units");
        }
        throw numeric_error("profile minimum not found (step limit)");
    };

    double h = std::min(1e-3, lo / 16.0);
    double prev = estimate(h);
    for (int level = 0; level < 8; ++level) {
        h *= 0.5;
        const double cur = estimate(h);
        if (std::abs(cur - prev) <= 1e-9 * std::max(1.0, std::abs(cur))) return cur;
        prev = cur;
    }
    return prev;
}

ProfileCurve solve_profile(const DelaunayFamily& family, int samples, double conservation_tol) {
    validate(family);
    if (samples < 64)
        throw domain_error("samples must be at least 64; got " + std::to_string(samples));

    ProfileCurve curve;
    curve.family = family;
    curve.near_degenerate = family.mu < kMuDegenerate;

    if (is_cylinder(family)) {
        const CylinderData c = cylinder_data(family.space, family.n, family.H);
        curve.is_cylinder = true;
        curve.period = c.period;
        curve.turning_lo = curve.turning_hi = c.value;
        curve.x.resize(samples + 1);
        curve.value.assign(samples + 1, c.value);
        curve.deriv.assign(samples + 1, 0.0);
        const double h = c.period / samples;
        for (int i = 0; i <= samples; ++i) curve.x[i] = h * i;
        curve.conservation_residual = 0.0;
        return curve;
    }

    const auto [lo, hi] = turning_radii(family);
    const double T = period(family);
    curve.period = T;
    curve.turning_lo = lo;
    curve.turning_hi = hi;

    const double h = T / samples;
    int k_sub = pow2_at_least(h / (lo / 8.0));
    double residual = 0.0;
    for (;; k_sub *= 2) {
        curve.x.assign(samples + 1, 0.0);
        curve.value.assign(samples + 1, 0.0);
        curve.deriv.assign(samples + 1, 0.0);
        Rk4State y{lo, 0.0};
        curve.value[0] = y.v;
        residual = 0.0;
        const double hs = h / k_sub;
        for (int i = 1; i <= samples; ++i) {
            for (int j = 0; j < k_sub; ++j) y = rk4_step(family, y, hs);
            curve.x[i] = h * i;
            curve.value[i] = y.v;
            curve.deriv[i] = y.d;
            residual = std::max(residual, std::abs(conservation_defect(family, y.v, y.d)));
        }
        if (residual <= conservation_tol) break;
        if (k_sub >= 8192)
            throw numeric_error("profile integration could not meet the conservation tolerance " +
                                    std::to_string(conservation_tol),
                                residual);
    }
    curve.conservation_residual = residual;

    const double slack = 1e-6 * std::max(1.0, hi);
    for (int i = 0; i <= samples; ++i) {
        if (curve.value[i] < lo - slack || curve.value[i] > hi + slack)
            throw internal_error("profile escaped the turning-radius pinching band");
    }
    return curve;
}

void ProfileCurve::eval(double xq, double& v, double& d) const {
    if (is_cylinder) {
        v = value[0];
        d = 0.0;
        return;
    }
    double r = std::fmod(xq, period);
    if (r < 0) r += period;
    const int m = static_cast<int>(value.size()) - 1;
    const double h = period / m;
    int i = static_cast<int>(r / h);
    i = std::clamp(i, 0, m - 1);
    const double t = (r - i * h) / h;
    v = hermite3(value[i], deriv[i], value[i + 1], deriv[i + 1], h, t);
    const double dd0 = profile_second_deriv(family, value[i], deriv[i]);
    const double dd1 = profile_second_deriv(family, value[i + 1], deriv[i + 1]);
    d = hermite3(deriv[i], dd0, deriv[i + 1], dd1, h, t);
}

double ProfileCurve::value_at(double xq) const {
    double v, d;
    eval(xq, v, d);
    return v;
}

double ProfileCurve::deriv_at(double xq) const {
    double v, d;
    eval(xq, v, d);
    return d;
}

std::pair<double, double> neumann_cut_points(const ProfileCurve& curve) {
    const DelaunayFamily& fam = curve.family;
    const double T = curve.period;
    if (curve.is_cylinder) return {0.25 * T, 0.75 * T};

    if (fam.space == Space::Euclidean) {
        const double target = std::pow((fam.n - 1) * fam.mu, 1.0 / fam.n);
        if (!(curve.turning_lo < target && target < curve.turning_hi))
            throw internal_error("cut-point radius outside the pinching band");
        auto g = [&](double x) { return curve.value_at(x) - target; };
        const double z1 = bisect_root(g, 0.0, 0.5 * T);
        const double z2 = bisect_root(g, 0.5 * T, T);
        return {z1, z2};
    }

    // Hyperbolic: locate the sign changes of a' via its analytic expression
    // a' ~ phi'' + phi'^2 tan(phi) (1 + phi'^2), up to a positive factor.
    auto aprime = [&](double x) {
        double v, d;
        curve.eval(x, v, d);
        return profile_second_deriv(fam, v, d) + d * d * std::tan(v) * (1.0 + d * d);
    };
    auto locate = [&](double a, double b) {
        const int scan = 4096;
        double prev = aprime(a + (b - a) / scan * 1e-3);
        double found = -1.0;
        for (int i = 1; i <= scan; ++i) {
            const double xi = a + (b - a) * i / scan;
            const double cur = aprime(xi);
            if ((prev > 0) != (cur > 0)) {
                if (found >= 0)
                    throw numeric_error("cut-point bracketing found multiple sign changes");
                found = bisect_root(aprime, a + (b - a) * (i - 1) / scan, xi);
            }
            prev = cur;
        }
        if (found < 0) throw numeric_error("cut-point bracketing found no sign change");
        return found;
    };
    return {locate(0.0, 0.5 * T), locate(0.5 * T, T)};
}

void write_profile_csv(const ProfileCurve& curve, std::ostream& out) {
    out << (curve.family.space == Space::Euclidean ? "x,f,fprime\n" : "t,phi,phiprime\n");
    char buf[128];
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", curve.x[i], curve.value[i],
                      curve.deriv[i]);
        out << buf;
    }
}

} // namespace delidx

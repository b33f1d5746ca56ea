#include "delidx/family.hpp"

#include <cmath>
#include <cstdio>

#include "delidx/errors.hpp"
#include "delidx/profile.hpp"

namespace delidx {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// sin(phi*) of the hyperbolic cylinder: the interior critical point of G.
double hyp_cylinder_sin(int n, double H) {
    const double nh = static_cast<double>(n) * H;
    return 0.5 * (nh - std::sqrt(nh * nh - 4.0 * (n - 1)));
}

} // namespace

double mu_max(Space space, int n, double H) {
    if (space == Space::Euclidean) {
        const double f0 = static_cast<double>(n - 1) / n;
        return std::pow(f0, n - 1) / n;
    }
    const double phi_star = std::asin(hyp_cylinder_sin(n, H));
    return detail::hyp_G(n, H, phi_star);
}

void validate(const DelaunayFamily& family) {
    if (family.n < 2)
        throw domain_error("hypersurface dimension n must be at least 2; got " +
                           std::to_string(family.n));
    if (family.space == Space::Euclidean) {
        if (family.H != 1.0)
            throw domain_error("Euclidean families are normalized to H = 1; got H = " +
                               fmt(family.H));
    } else {
        if (!(family.H > 1.0))
            throw domain_error("H must exceed 1 in hyperbolic space; got H = " + fmt(family.H));
    }
    const double cap = mu_max(family.space, family.n, family.H);
    if (!(family.mu > 0.0) || family.mu > cap * (1.0 + 1e-14))
        throw domain_error("mu must lie in (0, " + fmt(cap) + "] for " +
                           space_name(family.space) + " n=" + std::to_string(family.n) +
                           (family.space == Space::Hyperbolic ? ", H=" + fmt(family.H) : "") +
                           "; got mu = " + fmt(family.mu));
    if (family.mu < kMuMin)
        throw domain_error("mu below " + fmt(kMuMin) +
                           " is rejected: the neck radius underflows the grid resolution"
                           " (valid interval [" +
                           fmt(kMuMin) + ", " + fmt(cap) + "])");
}

bool is_cylinder(const DelaunayFamily& family) {
    const double cap = mu_max(family.space, family.n, family.H);
    return family.mu >= cap * (1.0 - kCylinderRelTol);
}

CylinderData cylinder_data(Space space, int n, double H) {
    CylinderData c{};
    const double cap = mu_max(space, n, H);
    if (space == Space::Euclidean) {
        c.value = static_cast<double>(n - 1) / n;
        c.A = 1.0;
        c.B = c.value;
        c.V = n * (1.0 + (n - 1) * cap * cap * std::pow(c.value, -2 * n));
    } else {
        const double s = hyp_cylinder_sin(n, H);
        c.value = std::asin(s);
        const double t = std::tan(c.value);
        c.A = 1.0 / std::cos(c.value);
        c.B = t;
        c.V = n * (H * H - 1.0) + n * (n - 1) * cap * cap * std::pow(t, -2 * n);
    }
    c.period = 2.0 * M_PI / (c.A * std::sqrt(c.V));
    return c;
}

std::string space_name(Space space) {
    return space == Space::Euclidean ? "euclidean" : "hyperbolic";
}

} // namespace delidx

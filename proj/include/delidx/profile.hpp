#pragma once

#include <ostream>
#include <utility>
#include <vector>

#include "delidx/family.hpp"

namespace delidx {

// One period of a Delaunay profile, sampled on a uniform grid starting at a
// neck (value = turning_lo, derivative = 0). "value" is the radius f in the
// Euclidean case and the angle phi in the hyperbolic case.
struct ProfileCurve {
    DelaunayFamily family;
    double period = 0;
    double turning_lo = 0, turning_hi = 0;
    std::vector<double> x;
    std::vector<double> value;
    std::vector<double> deriv;
    // Max over the grid of the recomputed first integral minus mu.
    double conservation_residual = 0;
    bool is_cylinder = false;
    bool near_degenerate = false;

    // Periodic evaluation anywhere (cubic Hermite on the stored samples).
    void eval(double xq, double& v, double& d) const;
    double value_at(double xq) const;
    double deriv_at(double xq) const;
};

// Profile second derivative from the ODE, as a function of (value, derivative).
double profile_second_deriv(const DelaunayFamily& family, double v, double d);

// Recomputed weight (the conserved quantity) minus mu, at one state.
double conservation_defect(const DelaunayFamily& family, double v, double d);

// Neck and bulge radii: the two roots of X^n - X^{n-1} + mu (Euclidean) or of
// G(phi) = mu (hyperbolic). Returns (lo, hi); equal at mu = mu_max.
std::pair<double, double> turning_radii(const DelaunayFamily& family);

// Full period from endpoint-desingularized quadrature between the turning
// radii; the bifurcation period for the cylinder member.
double period(const DelaunayFamily& family);

// Independent cross-check: the distance between two successive profile minima,
// located by direct ODE integration (no quadrature involved).
double period_from_ode(const DelaunayFamily& family);

ProfileCurve solve_profile(const DelaunayFamily& family, int samples,
                           double conservation_tol = 1e-10);

// The two interior zeros of a' on (0, period), where a is the axis Jacobi
// field. Euclidean closed form: value(zeta) = ((n-1) mu)^{1/n}. For the
// cylinder the limits (P/4, 3P/4) are returned.
std::pair<double, double> neumann_cut_points(const ProfileCurve& curve);

// CSV export: "x,f,fprime" (Euclidean) or "t,phi,phiprime" (hyperbolic),
// 17 significant digits.
void write_profile_csv(const ProfileCurve& curve, std::ostream& out);

namespace detail {
// Hyperbolic turning-point function G and derivatives (for root finding and
// desingularized quadrature). Only meaningful for phi in (0, pi/2).
double hyp_G(int n, double H, double phi);
double hyp_G_deriv(int n, double H, double phi);
double hyp_G_second(int n, double H, double phi);
} // namespace detail

} // namespace delidx

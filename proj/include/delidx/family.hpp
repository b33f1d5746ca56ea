#pragma once

#include <string>

namespace delidx {

enum class Space { Euclidean, Hyperbolic };

// One Delaunay unduloid family: ambient space form, hypersurface dimension n,
// normalized mean curvature H (1 in R^{n+1}, > 1 in H^{n+1}) and the weight
// parameter mu, the first integral of the profile equation.
struct DelaunayFamily {
    Space space = Space::Euclidean;
    int n = 2;
    double H = 1.0;
    double mu = 0.0;
};

// Largest admissible weight (the cylinder). Euclidean: (1/n)((n-1)/n)^{n-1}.
// Hyperbolic: the maximum of G(phi) = tan^{n-1}(phi)/cos(phi) - H tan^n(phi),
// attained at sin(phi*) = (nH - sqrt(n^2 H^2 - 4(n-1)))/2.
double mu_max(Space space, int n, double H);

// Weights this far below mu_max (relatively) are treated as the exact cylinder.
inline constexpr double kCylinderRelTol = 1e-12;

// Weights below this are rejected: the neck radius underflows the grid resolution.
inline constexpr double kMuMin = 1e-5;

// Weights below 100*kMuMin are accepted but flagged (sphere-chain degeneration);
// quadrature refinement caps are raised for them.
inline constexpr double kMuDegenerate = 1e-3;

// Throws domain_error (naming the valid interval) if the family is invalid.
void validate(const DelaunayFamily& family);

bool is_cylinder(const DelaunayFamily& family);

// Constant data of the cylinder member of a family: profile value (radius f0 or
// angle phi*), metric coefficients and potential, and the bifurcation period
// (wavelength of the k = 0 zero mode, 2*pi/(A*sqrt(V))).
struct CylinderData {
    double value;
    double A, B, V;
    double period;
};

CylinderData cylinder_data(Space space, int n, double H);

std::string space_name(Space space);

} // namespace delidx

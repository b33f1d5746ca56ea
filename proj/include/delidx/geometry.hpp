#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "delidx/profile.hpp"

namespace delidx {

enum class GeometrySource { ExactDelaunay, PerturbedProfile };

// The reduced data of a rotationally invariant geometry on an interval: metric
// g = A^2 dx^2 + B^2 g_S and the stability potential V, so the operator under
// study is always Delta_g - V. Carries a resampler so spectral grids can be
// refined without interpolating the coefficients themselves.
struct ReducedGeometry {
    int n = 2;
    double x_lo = 0, x_hi = 0;
    std::vector<double> x, A, B, V;
    GeometrySource source = GeometrySource::ExactDelaunay;
    std::optional<DelaunayFamily> family;
    std::function<void(double, double&, double&, double&)> sample;

    std::size_t size() const { return x.size(); }
};

// Coefficients of the exact Delaunay geometry on the curve's own grid, or
// resampled on [x_lo, x_hi] (periodic extension of the profile).
ReducedGeometry delaunay_coefficients(const ProfileCurve& curve);
ReducedGeometry delaunay_coefficients(const ProfileCurve& curve, double x_lo, double x_hi,
                                      int nodes);

struct RotationSample {
    double x, r, dr, ddr;
};

// Generic Euclidean rotation-hypersurface coefficients built from principal
// curvatures; signs are pinned so an exact Delaunay profile has mean curvature
// +1. Throws domain_error if the radius is not positive everywhere.
ReducedGeometry rotation_coefficients(const std::vector<RotationSample>& samples, int n);

// Same, from a radius callable r(x) -> (r, r', r''); exact at any grid.
using RadiusField = std::function<void(double, double&, double&, double&)>;
ReducedGeometry rotation_coefficients(const RadiusField& radius, int n, double x_lo, double x_hi,
                                      int nodes);

// Principal curvature pair of a rotation profile at one state.
void rotation_curvatures(double r, double dr, double ddr, double& kappa_axial,
                         double& kappa_orbital);

// Coefficient-level perturbation (A,B scaled, V shifted); the hyperbolic route
// for almost-Delaunay geometries, where no closed graph-curvature formula exists.
ReducedGeometry perturb_coefficients(const ReducedGeometry& base,
                                     const std::function<double(double)>& rel_delta_ab,
                                     const std::function<double(double)>& shift_v);

struct JacobiField {
    int mode_k = 0;
    std::vector<double> x, values;
    std::vector<double> zeros;
};

// Normal component of the translation along the axis (mode 0); vanishes at
// half-period multiples.
JacobiField axis_jacobi_field(const ProfileCurve& curve);
JacobiField axis_jacobi_field(const ProfileCurve& curve, double x_lo, double x_hi, int nodes);

// Normal component of the translation orthogonal to the axis (mode 1);
// strictly positive. Throws internal_error if positivity fails.
JacobiField translation_jacobi_field(const ProfileCurve& curve);
JacobiField translation_jacobi_field(const ProfileCurve& curve, double x_lo, double x_hi,
                                     int nodes);

// sup over the grid of B^2 V. For exact Euclidean Delaunay geometries values
// above n^2 raise internal_error.
double potential_bounds(const ReducedGeometry& geom);

void write_coefficients_csv(const ReducedGeometry& geom, std::ostream& out);

} // namespace delidx

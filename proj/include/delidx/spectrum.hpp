#pragma once

#include <utility>
#include <vector>

#include "delidx/geometry.hpp"

namespace delidx {

enum class BC { Dirichlet, Neumann };

struct Tridiag {
    std::vector<double> diag;
    std::vector<double> off; // size diag.size() - 1
    std::size_t size() const { return diag.size(); }
};

// One separated spherical-harmonic sector: the Sturm-Liouville pencil
//   -(p u')' + q u = lambda w u,  p = B^{n-1}/A,  q = A B^{n-3} (L_k - B^2 V),
//   w = A B^{n-1},  L_k = k(k+n-2),
// with a boundary condition per endpoint.
struct ModeProblem {
    ReducedGeometry geom;
    int k = 0;
    BC bc_lo = BC::Dirichlet;
    BC bc_hi = BC::Dirichlet;

    double lambda_k() const { return static_cast<double>(k) * (k + geom.n - 2); }

    struct Coeffs {
        std::vector<double> x, p, q, w;
        double h = 0;
    };
    // Nodal coefficient samples on a uniform grid (resampled via the geometry).
    Coeffs coefficients(int nodes) const;
};

// Piecewise-linear finite elements; coefficients vary linearly per element so
// Neumann ends are natural and the form matches the weak formulation directly.
std::pair<Tridiag, Tridiag> assemble(const ModeProblem& problem, int nodes);
std::pair<Tridiag, Tridiag> assemble_from(const ModeProblem::Coeffs& coeffs, BC bc_lo, BC bc_hi);

// Number of pencil eigenvalues below `shift`, by pivot signs of the symmetric
// tridiagonal factorization of K - shift*M (Sylvester inertia; exact integers).
int inertia_count(const Tridiag& K, const Tridiag& M, double shift);

// Discrete eigenvalues within (-band, band) approximate exact zero modes;
// half-width: 10 h^2 (sup|q| / inf w + 1).
double zero_band_width(const ModeProblem::Coeffs& coeffs);

struct GridControls {
    int nodes_per_period = 512; // initial resolution per period-length unit
    int max_refinements = 4;    // grid doublings
    double period_hint = 0;     // 0: treat the whole interval as one period
    int fixed_nodes = 0;        // > 0: single grid, no refinement loop
    double zero_band_override = -1; // >= 0: use this band instead of the h^2 rule
    int smallest_count = 0;     // also bracket this many lowest eigenvalues
};

struct Spectrum {
    int neg_count = 0;
    int zero_modes = 0;
    std::vector<std::pair<double, double>> smallest; // (eigenvalue, bracket width)
    int grid_nodes = 0;
    int refinements = 0;
    bool refinement_agreement = false;
    double zero_band = 0;
};

// Negative-eigenvalue count, refined (grid doubling) until the pair
// (neg_count, zero_modes) agrees on two successive grids.
Spectrum count_negative(const ModeProblem& problem, const GridControls& ctl = {});

// The `count` algebraically smallest pencil eigenvalues by bisection on the
// inertia function, each bracketed to width 1e-10 * scale.
std::vector<double> smallest_eigenvalues(const ModeProblem& problem, int count,
                                         const GridControls& ctl = {});

// Smallest k* with k*(k*+n-2) >= sup(B^2 V); all modes k >= k* are positive.
int mode_cutoff(const ReducedGeometry& geom);

// ||K u|| / ||M u|| over interior test functions for a sampled field u that
// should solve L_k u = 0; decays at the discretization order.
double jacobi_residual(const ModeProblem& problem, const std::vector<double>& field_values);

int initial_nodes(const GridControls& ctl, double interval_length);

} // namespace delidx

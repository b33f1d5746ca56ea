#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "delidx/blocks.hpp"

namespace delidx {

// Total multiplicity-weighted index of the slab [0, X] with the given ends.
std::int64_t slab_index(const DelaunayFamily& family, double X, BC bc_lo, BC bc_hi,
                        const GridControls& ctl = {});

struct GrowthExperiment {
    DelaunayFamily family;
    std::vector<double> lengths;
    BC bc_lo = BC::Dirichlet, bc_hi = BC::Dirichlet;
    std::vector<std::pair<double, std::int64_t>> results;
    double fitted_slope = 0;
    double target_slope = 0; // 2 / period per end
    int num_ends = 1;
};

GrowthExperiment run_growth(const DelaunayFamily& family, const std::vector<double>& lengths,
                            BC bc_lo, BC bc_hi, const GridControls& ctl = {});

// Least-squares slope of index against length over the final 60% of the
// samples (suppresses the additive transient). Requires >= 5 lengths spanning
// >= 20 periods.
double slope_fit(GrowthExperiment& exp);

struct BracketingResult {
    bool ok = false;
    double split = 0; // split snapped to a grid node
    std::int64_t d_full = 0, d_left = 0, d_right = 0;
    std::int64_t n_full = 0, n_left = 0, n_right = 0;
};

// Dirichlet-Neumann bracketing on [0, X] cut at `split`:
//   Ind_D[0,X] >= Ind_D[0,s] + Ind_D[s,X],
//   Ind_N[0,X] <= Ind_N[0,s] + Ind_N[s,X],
//   Ind_D[0,X] <= Ind_N[0,X],
// computed on matched grids so the inequalities are exact matrix statements.
BracketingResult bracketing_check(const DelaunayFamily& family, double X, double split,
                                  const GridControls& ctl = {});

struct Perturbation {
    enum class Decay { Exponential, Bump };
    Decay decay = Decay::Exponential;
    double amplitude = 0;
    double rate = 0.5;               // exponential: w = eps * exp(-rate * x)
    double bump_lo = 0, bump_hi = 1; // bump: compactly supported mollifier
};

// A radial graph over a Delaunay end on [0, length]; Euclidean only (the
// hyperbolic route perturbs coefficients directly, see perturb_coefficients).
struct PerturbedEnd {
    DelaunayFamily base;
    Perturbation pert;
    double x_lo = 0, x_hi = 0;
    double c2_distance = 0; // sup |w| + |w'| + |w''|
    RadiusField base_radius;
    RadiusField radius;
};

PerturbedEnd make_perturbed_end(const DelaunayFamily& family, const Perturbation& pert,
                                double length);

struct StabilityResult {
    std::int64_t ind_base = 0;
    std::int64_t ind_perturbed = 0;
    std::int64_t zero_modes_cap = 0;
    bool ok = false; // ind_base <= ind_perturbed <= ind_base + cap
};

// Index of the unperturbed and perturbed geometries on the same interval,
// grids and zero bands, so the difference is purely geometric.
StabilityResult perturbed_index_stability(const PerturbedEnd& end, BC bc_lo, BC bc_hi,
                                          const GridControls& ctl = {});

// Sum of per-end slab indexes divided by X; approaches sum_j 2/T(mu_j).
double multi_end_growth(const std::vector<DelaunayFamily>& families, double X,
                        const GridControls& ctl = {});

struct GrowthRow {
    double X = 0;
    std::int64_t index_dirichlet = 0;
    std::int64_t index_neumann = 0;
};

std::vector<GrowthRow> growth_table(const std::vector<DelaunayFamily>& families,
                                    const std::vector<double>& lengths,
                                    const GridControls& ctl = {});

void write_growth_csv(const std::vector<GrowthRow>& rows, std::ostream& out);
std::string fit_summary_json(const GrowthExperiment& exp, double rel_err);

} // namespace delidx

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "delidx/spectrum.hpp"

namespace delidx {

enum class BlockKind { DirichletBlock, NeumannBlock, Slab };

// A piece of an unduloid: ell glued half-periods between necks/bulges (B_ell),
// ell glued full periods between the cut points (C_ell), or a plain slab.
struct BlockSpec {
    DelaunayFamily family;
    BlockKind kind = BlockKind::Slab;
    int ell = 1;
    double x_lo = 0, x_hi = 0;
    BC bc_lo = BC::Dirichlet;
    BC bc_hi = BC::Dirichlet;
    bool shifted = false; // start at the bulge instead of the neck
};

BlockSpec make_dirichlet_block(const DelaunayFamily& family, int ell, bool shifted = false);
BlockSpec make_neumann_block(const DelaunayFamily& family, int ell);
BlockSpec make_slab(const DelaunayFamily& family, double length, BC bc_lo, BC bc_hi);

// Multiplicity of the k-th Laplace eigenvalue on S^{n-1}.
std::int64_t sphere_multiplicity(int n, int k);

struct ModeEntry {
    int k = 0;
    std::int64_t mult = 1;
    int neg = 0;
    double lambda_min = 0;
    int zeros = 0;
};

struct IndexReport {
    BlockSpec block;
    int k_max = 0;
    std::vector<ModeEntry> per_mode; // k = 0..k_max; the last row audits the cutoff
    std::int64_t total_index = 0;
    std::optional<bool> check_prop42, check_prop43, check_cap, check_nodal;
    int grid_nodes = 0;
    int refinements = 0;
    double zero_band = 0;
    double sup_B2V = 0;

    bool all_checks_pass() const;
    std::string to_json() const;
};

// Mode-by-mode negative counts with Dirichlet/Neumann conditions, summed with
// spherical-harmonic multiplicities. Check failures are data in the report, so
// parameter sweeps complete; numeric non-convergence still throws.
IndexReport block_index(const BlockSpec& block, const GridControls& ctl = {});

// True iff every mode k = 1..k_max-1 has Neumann negative count <= 2 on C_ell.
bool mode_neumann_cap_check(const DelaunayFamily& family, int ell, const GridControls& ctl = {});

// Number of sign-constant components of a sampled field between its zeros.
int nodal_count(const JacobiField& field);

} // namespace delidx

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "delidx/dense_oracle.hpp"
#include "delidx/errors.hpp"
#include "delidx/spectrum.hpp"

using namespace delidx;

namespace {

DelaunayFamily euclid(int n, double mu) { return {Space::Euclidean, n, 1.0, mu}; }

ReducedGeometry cylinder_geom(double x_lo, double x_hi, int nodes) {
    return delaunay_coefficients(solve_profile(euclid(2, 0.25), 128), x_lo, x_hi, nodes);
}

} // namespace

TEST_CASE("cylinder mode 0 on [0,pi] has lowest Dirichlet eigenvalue -3") {
    // Continuous problem -u'' - 4u = lambda u with sine eigenfunctions.
    ModeProblem p{cylinder_geom(0.0, M_PI, 4096), 0, BC::Dirichlet, BC::Dirichlet};
    GridControls ctl;
    ctl.fixed_nodes = 4096;
    const auto eigs = smallest_eigenvalues(p, 3, ctl);
    CHECK(std::abs(eigs[0] + 3.0) < 1e-4);
    CHECK(std::abs(eigs[1] - 0.0) < 1e-4);
    CHECK(std::abs(eigs[2] - 5.0) < 1e-3);
}

TEST_CASE("cylinder mode 1 has q = 0: free Laplacian in the weighted form") {
    ModeProblem p{cylinder_geom(0.0, 2.0, 512), 1, BC::Dirichlet, BC::Dirichlet};
    const auto c = p.coefficients(512);
    for (double q : c.q) CHECK(std::abs(q) < 1e-13);

    GridControls ctl;
    ctl.fixed_nodes = 512;
    CHECK(smallest_eigenvalues(p, 1, ctl)[0] > zero_band_width(c));

    ModeProblem pn{cylinder_geom(0.0, 2.0, 512), 1, BC::Neumann, BC::Neumann};
    const Spectrum sn = count_negative(pn, ctl);
    CHECK(sn.neg_count == 0);
    CHECK(sn.zero_modes == 1); // lowest Neumann eigenvalue is exactly 0
}

TEST_CASE("assembled matrices are symmetric tridiagonal with positive mass") {
    ModeProblem p{cylinder_geom(0.0, 3.0, 200), 0, BC::Neumann, BC::Neumann};
    const auto [K, M] = assemble(p, 200);
    CHECK(K.size() == 200);
    CHECK(K.off.size() == 199);
    for (std::size_t i = 0; i < M.size(); ++i) {
        double row = M.diag[i];
        if (i > 0) row += M.off[i - 1];
        if (i + 1 < M.size()) row += M.off[i];
        CHECK(row > 0.0);
    }
}

TEST_CASE("cylinder closed-form counts, Dirichlet and Neumann") {
    for (int ell = 1; ell <= 8; ++ell) {
        ModeProblem p{cylinder_geom(0.0, 0.5 * ell * M_PI, 64 * ell + 1), 0, BC::Dirichlet,
                      BC::Dirichlet};
        GridControls ctl;
        ctl.period_hint = M_PI;
        const Spectrum s = count_negative(p, ctl);
        CHECK(s.neg_count == ell - 1);
        CHECK(s.refinement_agreement);
    }
    for (int ell = 1; ell <= 4; ++ell) {
        ModeProblem p{cylinder_geom(0.0, ell * M_PI, 128 * ell + 1), 0, BC::Neumann, BC::Neumann};
        GridControls ctl;
        ctl.period_hint = M_PI;
        CHECK(count_negative(p, ctl).neg_count == 2 * ell);
    }
}

TEST_CASE("modes at or above the cutoff have no negative eigenvalues") {
    const ReducedGeometry g =
        delaunay_coefficients(solve_profile(euclid(2, 0.15), 2048), 0.0, 5.0, 1024);
    const int kstar = mode_cutoff(g);
    for (int k = kstar; k < kstar + 2; ++k) {
        for (BC bc : {BC::Dirichlet, BC::Neumann}) {
            ModeProblem p{g, k, bc, bc};
            CHECK(count_negative(p).neg_count == 0);
        }
    }
}

TEST_CASE("block eigenvalues: zero mode for k=0, strict positivity for k=1") {
    const ProfileCurve curve = solve_profile(euclid(2, 0.15), 2048);
    const double T = curve.period;
    const ReducedGeometry g = delaunay_coefficients(curve, 0.0, 0.5 * T, 1024);

    ModeProblem p0{g, 0, BC::Dirichlet, BC::Dirichlet};
    const Spectrum s0 = count_negative(p0);
    CHECK(s0.neg_count == 0); // the zero mode is the first eigenvalue on B_1
    CHECK(s0.zero_modes == 1);
    GridControls ctl;
    ctl.fixed_nodes = s0.grid_nodes;
    const double l0 = smallest_eigenvalues(p0, 1, ctl)[0];
    CHECK(std::abs(l0) <= s0.zero_band);

    ModeProblem p1{g, 1, BC::Dirichlet, BC::Dirichlet};
    const Spectrum s1 = count_negative(p1);
    CHECK(s1.neg_count == 0);
    CHECK(s1.zero_modes == 0);
    const double l1 = smallest_eigenvalues(p1, 1, ctl)[0];
    CHECK(l1 > s1.zero_band);
}

TEST_CASE("mode cutoff examples") {
    const ProfileCurve c15 = solve_profile(euclid(2, 0.15), 2048);
    CHECK(mode_cutoff(delaunay_coefficients(c15)) == 2); // sup B^2 V = 1.4, 1 < 1.4 <= 4
    const ProfileCurve ccyl = solve_profile(euclid(2, 0.25), 128);
    CHECK(mode_cutoff(delaunay_coefficients(ccyl)) == 1); // sup = 1.0 exactly
    for (int n : {2, 3, 4}) {
        const double cap = mu_max(Space::Euclidean, n, 1.0);
        const ProfileCurve c = solve_profile({Space::Euclidean, n, 1.0, 0.6 * cap}, 1024);
        CHECK(mode_cutoff(delaunay_coefficients(c)) <= n);
    }
}

TEST_CASE("inertia counts match a dense eigendecomposition") {
    std::mt19937_64 rng(271828);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        const double mu = 0.05 + 0.19 * u01(rng);
        const ProfileCurve curve = solve_profile(euclid(2, mu), 1024);
        const double T = curve.period;
        const double x_lo = u01(rng) * T;
        const double x_hi = x_lo + (0.5 + 2.0 * u01(rng)) * T;
        const int nodes = 40 + static_cast<int>(u01(rng) * 160);
        const int k = static_cast<int>(u01(rng) * 3);
        const BC lo = u01(rng) < 0.5 ? BC::Dirichlet : BC::Neumann;
        const BC hi = u01(rng) < 0.5 ? BC::Dirichlet : BC::Neumann;
        ModeProblem p{delaunay_coefficients(curve, x_lo, x_hi, nodes), k, lo, hi};
        const auto coeffs = p.coefficients(nodes);
        const double band = zero_band_width(coeffs);
        const auto [K, M] = assemble_from(coeffs, lo, hi);
        CHECK(inertia_count(K, M, -band) == dense_negative_count(K, M, band));
    }
}

TEST_CASE("boundary-condition monotonicity of the counts") {
    const ProfileCurve curve = solve_profile(euclid(2, 0.1), 2048);
    const ReducedGeometry g = delaunay_coefficients(curve, 0.0, 2.5 * curve.period, 2048);
    for (int k : {0, 1}) {
        const auto coeffs = ModeProblem{g, k, BC::Dirichlet, BC::Dirichlet}.coefficients(2048);
        const double band = zero_band_width(coeffs);
        auto count = [&](BC lo, BC hi) {
            const auto [K, M] = assemble_from(coeffs, lo, hi);
            return inertia_count(K, M, -band);
        };
        const int dd = count(BC::Dirichlet, BC::Dirichlet);
        const int dn = count(BC::Dirichlet, BC::Neumann);
        const int nn = count(BC::Neumann, BC::Neumann);
        CHECK(dd <= dn);
        CHECK(dn <= nn);
    }
}

TEST_CASE("reported lowest eigenvalues are simple and separated") {
    ModeProblem p{cylinder_geom(0.0, 2.0 * M_PI, 1024), 0, BC::Dirichlet, BC::Dirichlet};
    GridControls ctl;
    ctl.fixed_nodes = 1024;
    const auto eigs = smallest_eigenvalues(p, 5, ctl);
    for (std::size_t i = 1; i < eigs.size(); ++i)
        CHECK(eigs[i] - eigs[i - 1] > 1e-8); // simple spectrum, gaps far above bracket width

    ctl.smallest_count = 4;
    const Spectrum s = count_negative(p, ctl);
    REQUIRE(s.smallest.size() == 4);
    for (std::size_t i = 0; i < s.smallest.size(); ++i) {
        CHECK(s.smallest[i].second <= 1e-9); // bracket width
        if (i > 0) CHECK(s.smallest[i].first - s.smallest[i - 1].first > s.smallest[i].second);
    }
}

TEST_CASE("jacobi residuals decay at second order") {
    const DelaunayFamily fam = euclid(2, 0.15);
    const ProfileCurve curve = solve_profile(fam, 4096);
    const double T = curve.period;
    for (int mode : {0, 1}) {
        double res[3];
        for (int level = 0; level < 3; ++level) {
            const int nodes = 512 << level;
            const ReducedGeometry g = delaunay_coefficients(curve, 0.0, T, nodes);
            const JacobiField f = mode == 0 ? axis_jacobi_field(curve, 0.0, T, nodes)
                                            : translation_jacobi_field(curve, 0.0, T, nodes);
            res[level] = jacobi_residual({g, mode, BC::Neumann, BC::Neumann}, f.values);
        }
        CHECK(std::log2(res[0] / res[2]) / 2.0 >= 1.9);
    }
}

TEST_CASE("grids refuse nonpositive coefficient samples") {
    ReducedGeometry g;
    g.n = 2;
    g.x_lo = 0;
    g.x_hi = 1;
    g.sample = [](double x, double& A, double& B, double& V) {
        A = 1.0;
        B = 0.5 - x; // turns negative inside the interval
        V = 1.0;
    };
    ModeProblem p{g, 0, BC::Dirichlet, BC::Dirichlet};
    CHECK_THROWS_AS(p.coefficients(64), domain_error);
}

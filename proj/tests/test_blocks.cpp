#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "json.hpp"

#include "delidx/blocks.hpp"
#include "delidx/errors.hpp"
#include "delidx/par.hpp"

using namespace delidx;

namespace {

DelaunayFamily euclid(int n, double mu) { return {Space::Euclidean, n, 1.0, mu}; }
DelaunayFamily hyper(double H, double mu) { return {Space::Hyperbolic, 2, H, mu}; }

} // namespace

TEST_CASE("sphere multiplicities") {
    // Circle harmonics: 1, 2, 2, 2, ...
    CHECK(sphere_multiplicity(2, 0) == 1);
    for (int k = 1; k <= 6; ++k) CHECK(sphere_multiplicity(2, k) == 2);
    // 2-sphere: 2k+1
    CHECK(sphere_multiplicity(3, 5) == 11);
    for (int k = 0; k <= 6; ++k) CHECK(sphere_multiplicity(3, k) == 2 * k + 1);
    // 3-sphere: (k+1)^2
    CHECK(sphere_multiplicity(4, 3) == 16);
    for (int k = 0; k <= 6; ++k) CHECK(sphere_multiplicity(4, k) == (k + 1) * (k + 1));
}

TEST_CASE("block intervals have the prescribed lengths") {
    const DelaunayFamily fam = euclid(2, 0.15);
    const double T = period(fam);
    for (int ell : {1, 3, 6}) {
        const BlockSpec b = make_dirichlet_block(fam, ell);
        CHECK(std::abs((b.x_hi - b.x_lo) - 0.5 * ell * T) < 1e-12);
        const BlockSpec c = make_neumann_block(fam, ell);
        CHECK(std::abs((c.x_hi - c.x_lo) - ell * T) < 1e-12);
    }
    const BlockSpec shifted = make_dirichlet_block(fam, 2, true);
    CHECK(shifted.x_lo == doctest::Approx(0.5 * T));
}

TEST_CASE("axis field boundary behavior on blocks") {
    const DelaunayFamily fam = euclid(2, 0.15);
    const ProfileCurve curve = solve_profile(fam, 4096);
    const BlockSpec b = make_dirichlet_block(fam, 3);
    const JacobiField a = axis_jacobi_field(curve, b.x_lo, b.x_hi, 4096);
    double scale = 0;
    for (double v : a.values) scale = std::max(scale, std::abs(v));
    CHECK(std::abs(a.values.front()) < 1e-9 * scale);
    CHECK(std::abs(a.values.back()) < 1e-6 * scale);

    // Derivative of the axis field vanishes at the Neumann cut points.
    const BlockSpec c = make_neumann_block(fam, 1);
    const double h = 1e-6;
    auto a_at = [&](double x) {
        double v, d;
        curve.eval(x, v, d);
        return d / std::sqrt(1.0 + d * d);
    };
    CHECK(std::abs((a_at(c.x_lo + h) - a_at(c.x_lo - h)) / (2 * h)) < 1e-5);
    CHECK(std::abs((a_at(c.x_hi + h) - a_at(c.x_hi - h)) / (2 * h)) < 1e-5);
}

TEST_CASE("Dirichlet block index is exactly ell - 1") {
    const IndexReport r = block_index(make_dirichlet_block(euclid(2, 0.15), 4));
    CHECK(r.total_index == 3);
    CHECK(r.check_prop42.has_value());
    CHECK(*r.check_prop42);
    CHECK(r.k_max == 2);
    CHECK(r.per_mode.size() == 3);
    CHECK(r.per_mode.back().neg == 0);
}

TEST_CASE("cylinder Neumann block has index 2*ell with silent higher modes") {
    const IndexReport r = block_index(make_neumann_block(euclid(2, 0.25), 3));
    CHECK(r.total_index == 6);
    CHECK(r.per_mode[0].neg == 6);
    CHECK(*r.check_prop43);
}

TEST_CASE("Neumann block index lands in the sandwich") {
    const IndexReport r = block_index(make_neumann_block(euclid(2, 0.15), 2));
    CHECK(r.total_index >= 4);
    CHECK(r.total_index <= 8); // 2l + 2 m(Lambda_1) with k_max = 2
    CHECK(*r.check_prop43);
    CHECK(*r.check_cap);
    CHECK(r.per_mode[0].neg == 4);
}

TEST_CASE("zero-mode rank equals the nodal count of the axis field") {
    const DelaunayFamily fam = euclid(2, 0.15);
    const int ell = 3;
    const IndexReport r = block_index(make_dirichlet_block(fam, ell));
    CHECK(r.per_mode[0].neg == ell - 1);
    CHECK(r.per_mode[0].zeros == 1);
    const ProfileCurve curve = solve_profile(fam, 4096);
    const BlockSpec b = make_dirichlet_block(fam, ell);
    CHECK(nodal_count(axis_jacobi_field(curve, b.x_lo, b.x_hi, 8192)) ==
          r.per_mode[0].neg + r.per_mode[0].zeros);
}

TEST_CASE("exactness persists at higher dimension and curvature") {
    const double cap4 = mu_max(Space::Euclidean, 4, 1.0);
    const DelaunayFamily fam4{Space::Euclidean, 4, 1.0, 0.4 * cap4};
    for (int ell = 1; ell <= 3; ++ell)
        CHECK(block_index(make_dirichlet_block(fam4, ell)).total_index == ell - 1);

    const double caph = mu_max(Space::Hyperbolic, 2, 2.0);
    const DelaunayFamily famh{Space::Hyperbolic, 2, 2.0, 0.4 * caph};
    CHECK(block_index(make_dirichlet_block(famh, 3)).total_index == 2);
    const IndexReport rc = block_index(make_neumann_block(famh, 2));
    CHECK(rc.per_mode[0].neg == 4);
    CHECK(*rc.check_prop43);
}

TEST_CASE("shifted blocks give the same index (translation invariance)") {
    const DelaunayFamily fam = euclid(2, 0.15);
    const IndexReport a = block_index(make_dirichlet_block(fam, 2, false));
    const IndexReport b = block_index(make_dirichlet_block(fam, 2, true));
    CHECK(a.total_index == b.total_index);
    CHECK(*b.check_prop42);
}

TEST_CASE("mode k >= 1 Dirichlet spectra stay strictly above the zero band") {
    const DelaunayFamily fam = euclid(2, 0.15);
    const ProfileCurve curve = solve_profile(fam, 4096);
    const BlockSpec b = make_dirichlet_block(fam, 4);
    const ReducedGeometry geom = delaunay_coefficients(curve, b.x_lo, b.x_hi, 2048);
    for (int k = 1; k <= 2; ++k) {
        ModeProblem p{geom, k, BC::Dirichlet, BC::Dirichlet};
        GridControls ctl;
        ctl.period_hint = curve.period;
        ctl.smallest_count = 1;
        const Spectrum s = count_negative(p, ctl);
        CHECK(s.smallest.front().first > s.zero_band);
    }
}

TEST_CASE("Neumann mode cap holds") {
    CHECK(mode_neumann_cap_check(euclid(2, 0.15), 3));
    CHECK(mode_neumann_cap_check(euclid(2, 0.25), 2));
    CHECK(mode_neumann_cap_check(hyper(1.2, 0.1), 2));
}

TEST_CASE("nodal counts on blocks") {
    const DelaunayFamily fam = euclid(2, 0.15);
    const ProfileCurve curve = solve_profile(fam, 4096);
    const double T = curve.period;
    const auto [z1, z2] = neumann_cut_points(curve);
    (void)z2;
    CHECK(nodal_count(axis_jacobi_field(curve, 0.0, 0.5 * T, 8192)) == 1);
    CHECK(nodal_count(axis_jacobi_field(curve, 0.0, 2.5 * T, 8192)) == 5);
    CHECK(nodal_count(axis_jacobi_field(curve, z1, z1 + 3.0 * T, 8192)) == 7);
}

TEST_CASE("nodal count rejects an identically vanishing field") {
    const ProfileCurve cyl = solve_profile(euclid(2, 0.25), 128);
    CHECK_THROWS_AS(nodal_count(axis_jacobi_field(cyl, 0.0, cyl.period, 512)), numeric_error);
}

TEST_CASE("index report serializes with the documented schema") {
    const IndexReport r = block_index(make_dirichlet_block(euclid(2, 0.15), 2));
    const auto j = nlohmann::json::parse(r.to_json());
    CHECK(j["space"] == "euclidean");
    CHECK(j["n"] == 2);
    CHECK(j["mu"] == 0.15);
    CHECK(j["block"]["kind"] == "B");
    CHECK(j["block"]["ell"] == 2);
    CHECK(j["block"]["bc"] == "dd");
    CHECK(j["block"]["interval"].size() == 2);
    CHECK(j["k_max"] == 2);
    CHECK(j["per_mode"].size() == 3);
    for (const auto& key : {"k", "mult", "neg", "lambda_min", "zeros"})
        CHECK(j["per_mode"][0].contains(key));
    CHECK(j["total_index"] == 1);
    CHECK(j["checks"]["prop42"] == true);
    CHECK(j["checks"]["prop43"].is_null());
    CHECK(j["grid"].contains("nodes"));
    CHECK(j["grid"].contains("zero_band"));
    CHECK(j["bounds"]["sup_B2V"].get<double>() == doctest::Approx(1.4).epsilon(1e-6));
}

TEST_CASE("slabs carry no block checks") {
    const BlockSpec s = make_slab(euclid(2, 0.15), 3.0, BC::Dirichlet, BC::Neumann);
    const IndexReport r = block_index(s);
    CHECK(!r.check_prop42.has_value());
    CHECK(!r.check_prop43.has_value());
    CHECK(!r.check_nodal.has_value());
    CHECK(r.all_checks_pass());
}

TEST_CASE("serial reference and parallel mode solves agree byte for byte") {
    const BlockSpec spec = make_neumann_block(euclid(2, 0.15), 2);
    par::set_max_threads(1);
    const std::string serial = block_index(spec).to_json();
    par::set_max_threads(0);
    const std::string parallel = block_index(spec).to_json();
    par::set_max_threads(0);
    CHECK(serial == parallel);
}

TEST_CASE("invalid block parameters") {
    CHECK_THROWS_AS(make_dirichlet_block(euclid(2, 0.15), 0), domain_error);
    CHECK_THROWS_AS(make_slab(euclid(2, 0.15), -1.0, BC::Dirichlet, BC::Dirichlet), domain_error);
    CHECK_THROWS_AS(sphere_multiplicity(1, 0), domain_error);
}

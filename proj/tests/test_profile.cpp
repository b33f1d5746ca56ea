#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "delidx/errors.hpp"
#include "delidx/profile.hpp"

using namespace delidx;

namespace {

DelaunayFamily euclid(int n, double mu) { return {Space::Euclidean, n, 1.0, mu}; }
DelaunayFamily hyper(double H, double mu) { return {Space::Hyperbolic, 2, H, mu}; }

// Independent oracle for the hyperbolic cylinder: golden-section maximization
// of G on (0, pi/2), no derivative information.
double golden_max_G(int n, double H) {
    double a = 1e-6, b = M_PI / 2 - 1e-6;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = detail::hyp_G(n, H, x1), f2 = detail::hyp_G(n, H, x2);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = detail::hyp_G(n, H, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = detail::hyp_G(n, H, x1);
        }
    }
    return detail::hyp_G(n, H, 0.5 * (a + b));
}

} // namespace

TEST_CASE("euclidean turning radii match the quadratic formula") {
    const auto [lo, hi] = turning_radii(euclid(2, 0.15));
    const double root = std::sqrt(1.0 - 4.0 * 0.15);
    CHECK(lo == doctest::Approx(0.5 * (1.0 - root)).epsilon(1e-12));
    CHECK(hi == doctest::Approx(0.5 * (1.0 + root)).epsilon(1e-12));
    CHECK(lo == doctest::Approx(0.18377223398316206).epsilon(1e-9));
    CHECK(hi == doctest::Approx(0.81622776601683794).epsilon(1e-9));
}

TEST_CASE("cylinder weight gives a double root at (n-1)/n") {
    const auto [lo, hi] = turning_radii(euclid(2, 0.25));
    CHECK(lo == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(hi == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("euclidean root ordering over a weight sweep") {
    for (int i = 1; i <= 20; ++i) {
        const double mu = 0.25 * i / 20.0;
        const auto [lo, hi] = turning_radii(euclid(2, mu));
        CHECK(lo >= mu - 1e-12); // mu^{1/(n-1)} = mu for n = 2
        CHECK(lo <= 0.5 + 1e-12);
        CHECK(hi >= 0.5 - 1e-12);
        CHECK(hi <= 1.0 + 1e-12);
    }
    for (double mu : {0.02, 0.08, 0.14}) {
        const auto [lo, hi] = turning_radii(euclid(3, mu));
        CHECK(lo >= std::sqrt(mu) - 1e-12);
        CHECK(lo <= 2.0 / 3.0 + 1e-12);
        CHECK(hi >= 2.0 / 3.0 - 1e-12);
        CHECK(hi <= 1.0 + 1e-12);
    }
}

TEST_CASE("hyperbolic cylinder: closed form against golden-section oracle") {
    const double cap = mu_max(Space::Hyperbolic, 2, 1.2);
    CHECK(cap == doctest::Approx(golden_max_G(2, 1.2)).epsilon(1e-10));
    CHECK(cap == doctest::Approx(0.268).epsilon(2e-3));

    const auto [lo, hi] = turning_radii(hyper(1.2, cap));
    const double sin_star = 0.5 * (2.4 - std::sqrt(1.76));
    CHECK(lo == doctest::Approx(std::asin(sin_star)).epsilon(1e-12));
    CHECK(hi == doctest::Approx(lo).epsilon(1e-12));
}

TEST_CASE("hyperbolic turning radii solve G = mu on both branches") {
    const auto [lo, hi] = turning_radii(hyper(1.2, 0.1));
    CHECK(detail::hyp_G(2, 1.2, lo) == doctest::Approx(0.1).epsilon(1e-11));
    CHECK(detail::hyp_G(2, 1.2, hi) == doctest::Approx(0.1).epsilon(1e-11));
    CHECK(lo < hi);
}

TEST_CASE("invalid weights and curvatures raise domain errors") {
    CHECK_THROWS_AS(turning_radii(euclid(2, 0.3)), domain_error);
    CHECK_THROWS_AS(turning_radii(euclid(2, -0.1)), domain_error);
    CHECK_THROWS_AS(turning_radii(euclid(2, 1e-6)), domain_error);
    CHECK_THROWS_AS(turning_radii({Space::Hyperbolic, 2, 1.0, 0.1}), domain_error);
    CHECK_THROWS_AS(turning_radii({Space::Euclidean, 1, 1.0, 0.1}), domain_error);
    try {
        turning_radii(euclid(2, 0.3));
        CHECK(false);
    } catch (const domain_error& e) {
        CHECK(std::string(e.what()).find("0.25") != std::string::npos);
    }
    try {
        turning_radii({Space::Hyperbolic, 2, 1.0, 0.1});
        CHECK(false);
    } catch (const domain_error& e) {
        CHECK(std::string(e.what()).find("H must exceed 1") != std::string::npos);
    }
}

TEST_CASE("cylinder period is the zero-mode wavelength") {
    CHECK(period(euclid(2, 0.25)) == doctest::Approx(M_PI).epsilon(1e-14));
    // n = 3: 2*pi*sqrt(n-1)/n
    CHECK(period({Space::Euclidean, 3, 1.0, 4.0 / 27.0}) ==
          doctest::Approx(2.0 * M_PI * std::sqrt(2.0) / 3.0).epsilon(1e-13));
}

TEST_CASE("period bounds and the quadrature/ODE cross-check") {
    for (int i = 1; i <= 10; ++i) {
        const double mu = 0.25 * i / 10.0;
        const double T = period(euclid(2, mu));
        CHECK(T >= 2.0 - 1e-12);
        CHECK(T <= M_PI + 1e-12);
    }
    const double T = period(euclid(2, 0.15));
    CHECK(std::abs(T - period_from_ode(euclid(2, 0.15))) < 1e-6);
    CHECK(std::abs(period(euclid(2, 0.2499)) - M_PI) < 1e-3);
}

TEST_CASE("hyperbolic period approaches the cylinder bifurcation period") {
    const double cap = mu_max(Space::Hyperbolic, 2, 1.2);
    const double tau_cyl = period(hyper(1.2, cap));
    CHECK(tau_cyl == doctest::Approx(2.0 * M_PI / std::sqrt(2.4 / (0.5 * (2.4 - std::sqrt(1.76))) - 2.0))
                         .epsilon(1e-12));
    CHECK(period(hyper(1.2, cap * 0.999)) < tau_cyl);
    CHECK(period(hyper(1.2, cap * 0.999)) == doctest::Approx(tau_cyl).epsilon(2e-2));
}

TEST_CASE("cylinder profile is constant") {
    const ProfileCurve c = solve_profile(euclid(2, 0.25), 128);
    CHECK(c.is_cylinder);
    for (std::size_t i = 0; i < c.value.size(); ++i) {
        CHECK(c.value[i] == 0.5);
        CHECK(c.deriv[i] == 0.0);
    }
    CHECK(c.conservation_residual == 0.0);
}

TEST_CASE("profile reaches the bulge radius at half period") {
    const ProfileCurve c = solve_profile(euclid(2, 0.15), 2048);
    CHECK(std::abs(c.value[1024] - 0.81622776601683794) < 1e-6);
    CHECK(std::abs(c.value.front() - c.turning_lo) < 1e-12);
    CHECK(std::abs(c.value.back() - c.turning_lo) < 1e-8);
}

TEST_CASE("conservation residual stays below 1e-8 for n=3") {
    const DelaunayFamily fam = euclid(3, 0.08);
    const ProfileCurve c = solve_profile(fam, 2048);
    for (std::size_t i = 0; i < c.value.size(); ++i)
        CHECK(std::abs(conservation_defect(fam, c.value[i], c.deriv[i])) <= 1e-8);
}

TEST_CASE("pinching and symmetry of the sampled profile") {
    for (const DelaunayFamily& fam : {euclid(2, 0.15), euclid(3, 0.08), hyper(1.2, 0.1)}) {
        const ProfileCurve c = solve_profile(fam, 2048);
        double lo = c.value[0], hi = c.value[0];
        for (double v : c.value) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(std::abs(lo - c.turning_lo) < 1e-6);
        CHECK(std::abs(hi - c.turning_hi) < 1e-6);
        for (std::size_t i = 0; i < c.value.size(); ++i) {
            const std::size_t j = c.value.size() - 1 - i;
            CHECK(c.value[i] == doctest::Approx(c.value[j]).epsilon(1e-7));
        }
    }
}

TEST_CASE("conservation defect shrinks at order >= 1.9 under refinement") {
    const DelaunayFamily fam = euclid(2, 0.15);
    double res[3];
    for (int level = 0; level < 3; ++level) {
        // Loose tolerance keeps the integrator at a single substep per sample.
        const ProfileCurve c = solve_profile(fam, 256 << level, 1.0);
        res[level] = c.conservation_residual;
    }
    const double order = std::log2(res[0] / res[2]) / 2.0;
    CHECK(order >= 1.9);
}

TEST_CASE("profile rejects tiny sample counts") {
    CHECK_THROWS_AS(solve_profile(euclid(2, 0.15), 32), domain_error);
}

TEST_CASE("the sphere-chain boundary weight is accepted but flagged") {
    for (const DelaunayFamily& fam : {euclid(2, 1e-5), hyper(1.2, 1e-5)}) {
        const ProfileCurve c = solve_profile(fam, 2048);
        CHECK(c.near_degenerate);
        CHECK(c.conservation_residual <= 1e-10);
        CHECK(c.turning_lo == doctest::Approx(1e-5).epsilon(1e-3));
    }
    // n = 2 Euclidean periods approach the sphere-chain value 2 from above.
    CHECK(period(euclid(2, 1e-5)) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("hyperbolic cut points are symmetric about the half period") {
    const ProfileCurve c = solve_profile(hyper(1.2, 0.1), 4096);
    const auto [z1, z2] = neumann_cut_points(c);
    CHECK(std::abs(z2 - (c.period - z1)) < 1e-7);
}

TEST_CASE("euclidean cut points match the closed-form radius") {
    const DelaunayFamily fam = euclid(2, 0.15);
    const ProfileCurve c = solve_profile(fam, 2048);
    const auto [z1, z2] = neumann_cut_points(c);
    const double target = std::sqrt(0.15);
    CHECK(std::abs(c.value_at(z1) - target) <= 1e-8);
    CHECK(std::abs(c.value_at(z2) - target) <= 1e-8);
    CHECK(c.turning_lo < target);
    CHECK(target < c.turning_hi);
    CHECK(0.0 < z1);
    CHECK(z1 < 0.5 * c.period);
    CHECK(0.5 * c.period < z2);
    CHECK(z2 < c.period);
    CHECK(std::abs(z2 - (c.period - z1)) < 1e-8);
}

TEST_CASE("hyperbolic cut points agree with a finite-difference scan of a") {
    const ProfileCurve c = solve_profile(hyper(1.2, 0.1), 4096);
    const auto [z1, z2] = neumann_cut_points(c);

    // Oracle: central differences of the sampled axis field a = phi'/(cos(phi) sqrt(1+phi'^2)).
    std::vector<double> a(c.value.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] = c.deriv[i] / (std::cos(c.value[i]) * std::sqrt(1.0 + c.deriv[i] * c.deriv[i]));
    const double h = c.period / static_cast<double>(a.size() - 1);
    std::vector<double> crossings;
    for (std::size_t i = 2; i + 2 < a.size(); ++i) {
        const double d0 = (a[i + 1] - a[i - 1]) / (2 * h);
        const double d1 = (a[i + 2] - a[i]) / (2 * h);
        if ((d0 > 0) != (d1 > 0)) crossings.push_back(c.x[i] + h * 0.5);
    }
    REQUIRE(crossings.size() == 2);
    CHECK(std::abs(crossings[0] - z1) < 2 * h);
    CHECK(std::abs(crossings[1] - z2) < 2 * h);
}

TEST_CASE("cylinder cut points sit at quarter periods") {
    const ProfileCurve c = solve_profile(euclid(2, 0.25), 128);
    const auto [z1, z2] = neumann_cut_points(c);
    CHECK(z1 == doctest::Approx(0.25 * c.period));
    CHECK(z2 == doctest::Approx(0.75 * c.period));
}

TEST_CASE("periodic evaluation reproduces samples and periodicity") {
    const ProfileCurve c = solve_profile(euclid(2, 0.15), 1024);
    for (std::size_t i = 0; i < c.x.size(); i += 37) {
        CHECK(c.value_at(c.x[i]) == doctest::Approx(c.value[i]).epsilon(1e-12));
        CHECK(c.value_at(c.x[i] + 3 * c.period) == doctest::Approx(c.value[i]).epsilon(1e-9));
    }
    const DelaunayFamily fam = euclid(2, 0.15);
    for (double x : {0.1, 0.7, 1.9}) {
        double v, d;
        c.eval(x, v, d);
        CHECK(std::abs(conservation_defect(fam, v, d)) < 1e-8);
    }
}

#include "delidx/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>

#include "delidx/numerics.hpp"

#include "delidx/dense_oracle.hpp"
#include "delidx/growth.hpp"
#include "delidx/par.hpp"

namespace delidx::acceptance {

namespace {

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof(buf), f, args);
    va_end(args);
    return buf;
}

DelaunayFamily euclid(int n, double mu) { return {Space::Euclidean, n, 1.0, mu}; }
DelaunayFamily hyper(double H, double mu) { return {Space::Hyperbolic, 2, H, mu}; }

std::vector<double> half_period_ladder(double T, int count) {
    std::vector<double> lengths(count);
    for (int j = 1; j <= count; ++j) lengths[j - 1] = 0.5 * T * j;
    return lengths;
}

// --- criterion bodies -------------------------------------------------------

CriterionResult crit_prop42() {
    CriterionResult r{1, "prop42"};
    struct Case {
        DelaunayFamily fam;
        int ell;
    };
    std::vector<Case> cases;
    for (double mu : {0.05, 0.15, 0.24})
        for (int ell = 1; ell <= 6; ++ell) cases.push_back({euclid(2, mu), ell});
    for (double mu : {0.02, 0.08, 0.14})
        for (int ell = 1; ell <= 6; ++ell) cases.push_back({euclid(3, mu), ell});
    std::vector<std::string> failures(cases.size());
    par::parallel_for(cases.size(), [&](std::size_t i) {
        const auto rep = block_index(make_dirichlet_block(cases[i].fam, cases[i].ell));
        if (rep.total_index != cases[i].ell - 1)
            failures[i] = fmt("n=%d mu=%g l=%d got %lld", cases[i].fam.n, cases[i].fam.mu,
                              cases[i].ell, static_cast<long long>(rep.total_index));
    });
    int bad = 0;
    std::string first;
    for (const auto& f : failures)
        if (!f.empty() && bad++ == 0) first = f;
    r.pass = bad == 0;
    r.detail = r.pass ? fmt("Dirichlet index of B_l equals l-1 on all %zu cases", cases.size())
                      : fmt("%d/%zu cases failed; first: %s", bad, cases.size(), first.c_str());
    return r;
}

CriterionResult crit_prop43() {
    CriterionResult r{2, "prop43"};
    struct Case {
        DelaunayFamily fam;
        int ell;
    };
    std::vector<Case> cases;
    for (double mu : {0.05, 0.15, 0.24})
        for (int ell = 1; ell <= 4; ++ell) cases.push_back({euclid(2, mu), ell});
    for (double mu : {0.02, 0.08, 0.14})
        for (int ell = 1; ell <= 4; ++ell) cases.push_back({euclid(3, mu), ell});
    std::vector<std::string> failures(cases.size());
    par::parallel_for(cases.size(), [&](std::size_t i) {
        const auto rep = block_index(make_neumann_block(cases[i].fam, cases[i].ell));
        const bool ok = rep.check_prop43.value_or(false) && rep.check_cap.value_or(false);
        if (!ok)
            failures[i] = fmt("n=%d mu=%g l=%d total=%lld mode0=%d", cases[i].fam.n,
                              cases[i].fam.mu, cases[i].ell,
                              static_cast<long long>(rep.total_index), rep.per_mode[0].neg);
    });
    int bad = 0;
    std::string first;
    for (const auto& f : failures)
        if (!f.empty() && bad++ == 0) first = f;
    r.pass = bad == 0;
    r.detail = r.pass ? fmt("Neumann index of C_l in [2l, 2l+2*sum(m)] with mode-0 = 2l "
                            "on all %zu cases",
                            cases.size())
                      : fmt("%d/%zu cases failed; first: %s", bad, cases.size(), first.c_str());
    return r;
}

CriterionResult crit_cylinder() {
    CriterionResult r{3, "cylinder"};
    const DelaunayFamily fam = euclid(2, 0.25);
    const double pi = M_PI;
    bool ok = true;
    std::string detail;
    for (int ell = 1; ell <= 6 && ok; ++ell) {
        const auto got = slab_index(fam, 0.5 * ell * pi, BC::Dirichlet, BC::Dirichlet);
        if (got != ell - 1) {
            ok = false;
            detail = fmt("Dirichlet slab l*pi/2, l=%d: got %lld", ell, (long long)got);
        }
    }
    for (int ell = 1; ell <= 3 && ok; ++ell) {
        const auto got = slab_index(fam, ell * pi, BC::Neumann, BC::Neumann);
        if (got != 2 * ell) {
            ok = false;
            detail = fmt("Neumann slab l*pi, l=%d: got %lld", ell, (long long)got);
        }
    }
    double lambda1 = 0;
    if (ok) {
        const ProfileCurve curve = solve_profile(fam, 256);
        const ReducedGeometry geom = delaunay_coefficients(curve, 0.0, pi, 4096);
        ModeProblem problem{geom, 0, BC::Dirichlet, BC::Dirichlet};
        GridControls ctl;
        ctl.fixed_nodes = 4096;
        lambda1 = smallest_eigenvalues(problem, 1, ctl)[0];
        if (std::abs(lambda1 + 3.0) > 1e-4) {
            ok = false;
            detail = fmt("lowest Dirichlet eigenvalue on [0,pi]: %.8f (want -3 +- 1e-4)", lambda1);
        }
    }
    r.pass = ok;
    r.detail = ok ? fmt("closed-form slab counts exact; lambda_1[0,pi] = %.6f", lambda1) : detail;
    return r;
}

CriterionResult crit_hyperbolic() {
    CriterionResult r{4, "hyperbolic"};
    const double H = 1.2;
    struct Case {
        double mu;
        int ell;
        bool neumann;
    };
    std::vector<Case> cases;
    for (double mu : {0.05, 0.15, 0.25}) {
        for (int ell = 1; ell <= 6; ++ell) cases.push_back({mu, ell, false});
        for (int ell = 1; ell <= 4; ++ell) cases.push_back({mu, ell, true});
    }
    std::vector<std::string> failures(cases.size());
    par::parallel_for(cases.size(), [&](std::size_t i) {
        const DelaunayFamily fam = hyper(H, cases[i].mu);
        if (!cases[i].neumann) {
            const auto rep = block_index(make_dirichlet_block(fam, cases[i].ell));
            if (rep.total_index != cases[i].ell - 1)
                failures[i] = fmt("B: mu=%g l=%d got %lld", cases[i].mu, cases[i].ell,
                                  (long long)rep.total_index);
        } else {
            const auto rep = block_index(make_neumann_block(fam, cases[i].ell));
            if (!(rep.check_prop43.value_or(false) && rep.check_cap.value_or(false)))
                failures[i] = fmt("C: mu=%g l=%d total=%lld", cases[i].mu, cases[i].ell,
                                  (long long)rep.total_index);
        }
    });
    int bad = 0;
    std::string first;
    for (const auto& f : failures)
        if (!f.empty() && bad++ == 0) first = f;
    if (bad) {
        r.pass = false;
        r.detail = fmt("%d/%zu block cases failed; first: %s", bad, cases.size(), first.c_str());
        return r;
    }
    const DelaunayFamily fam = hyper(H, 0.1);
    const double tau = period(fam);
    GrowthExperiment exp =
        run_growth(fam, half_period_ladder(tau, 60), BC::Dirichlet, BC::Dirichlet);
    const double rel = std::abs(exp.fitted_slope - exp.target_slope) / exp.target_slope;
    r.pass = rel <= 0.05;
    r.detail = fmt("blocks exact; slope fit 2/tau rel err %.2e at 30 periods (tau=%.6f)", rel, tau);
    return r;
}

CriterionResult crit_slope() {
    CriterionResult r{5, "slope"};
    const DelaunayFamily fam = euclid(2, 0.15);
    const double T = period(fam);
    GrowthExperiment exp = run_growth(fam, half_period_ladder(T, 60), BC::Dirichlet, BC::Dirichlet);
    const double target = exp.target_slope;
    const double rel = std::abs(exp.fitted_slope - target) / target;

    // index/X against 2/T at 10, 20 and 30 periods: errors must decrease.
    double errs[3];
    for (int m = 0; m < 3; ++m) {
        const int periods = 10 * (m + 1);
        const auto& [X, idx] = exp.results[2 * periods - 1]; // X = periods * T
        errs[m] = std::abs(static_cast<double>(idx) / X - target) / target;
    }
    const bool decreasing = errs[0] > errs[1] && errs[1] > errs[2];

    const DelaunayFamily fam2 = euclid(2, 0.24);
    const double T2 = period(fam2);
    const double target2 = 2.0 / T + 2.0 / T2;
    const auto lengths = half_period_ladder(std::max(T, T2), 60);
    const auto rows = growth_table({fam, fam2}, lengths);
    std::vector<double> xs, ys;
    for (std::size_t i = lengths.size() * 2 / 5; i < lengths.size(); ++i) {
        xs.push_back(rows[i].X);
        ys.push_back(static_cast<double>(rows[i].index_dirichlet));
    }
    const double slope2 = lsq_slope(xs.data(), ys.data(), xs.size());
    const double rel2 = std::abs(slope2 - target2) / target2;

    r.pass = rel <= 0.05 && decreasing && rel2 <= 0.05;
    r.detail = fmt("single-end rel err %.2e; index/X err %.3f>%.3f>%.3f; two-end rel err %.2e",
                   rel, errs[0], errs[1], errs[2], rel2);
    return r;
}

CriterionResult crit_bounds() {
    CriterionResult r{6, "bounds"};
    bool ok = true;
    std::string detail;
    double worst_gap = 0;
    for (int i = 1; i <= 20 && ok; ++i) {
        const double mu = 0.25 * i / 20.0;
        const DelaunayFamily fam = euclid(2, mu);
        const double sup = potential_bounds(delaunay_coefficients(solve_profile(fam, 2048)));
        if (sup > 4.0 + 1e-9) {
            ok = false;
            detail = fmt("sup(B^2 V) = %.12f exceeds n^2 at mu=%g", sup, mu);
        }
        const double gap = std::abs(sup - 2.0 * (1.0 - 2.0 * mu));
        worst_gap = std::max(worst_gap, gap);
        if (gap > 1e-6) {
            ok = false;
            detail = fmt("closed form 2(1-2mu) off by %.3e at mu=%g", gap, mu);
        }
    }
    double neck_value = 0, empirical_c = 0;
    if (ok) {
        const double H = 1.2;
        const double cap = mu_max(Space::Hyperbolic, 2, H);
        std::vector<double> sweep;
        for (int i = 0; i < 20; ++i)
            sweep.push_back(1e-3 * std::pow(cap / 1e-3, i / 19.0));
        for (double mu : sweep) {
            const ProfileCurve curve = solve_profile(hyper(H, mu), 2048);
            const ReducedGeometry geom = delaunay_coefficients(curve);
            const double sup = potential_bounds(geom);
            if (!std::isfinite(sup)) {
                ok = false;
                detail = fmt("hyperbolic sup(B^2 V) not finite at mu=%g", mu);
                break;
            }
            empirical_c = std::max(empirical_c, sup);
            if (mu == sweep.front())
                neck_value = geom.B[0] * geom.B[0] * geom.V[0];
        }
        if (ok && std::abs(neck_value - 2.0) > 0.1 * 2.0) {
            ok = false;
            detail = fmt("neck-limit value %.6f not within 10%% of n(n-1)=2", neck_value);
        }
    }
    r.pass = ok;
    r.detail = ok ? fmt("Euclidean sup <= n^2, closed form within %.1e; hyperbolic bounded "
                        "(empirical c(2,1.2) = %.4f), neck value %.4f",
                        worst_gap, empirical_c, neck_value)
                  : detail;
    return r;
}

CriterionResult crit_jacobi() {
    CriterionResult r{7, "jacobi"};
    bool ok = true;
    std::string detail, summary;
    for (const DelaunayFamily& fam : {euclid(2, 0.15), hyper(1.2, 0.1)}) {
        const ProfileCurve curve = solve_profile(fam, 4096);
        const double T = curve.period;
        for (int mode = 0; mode <= 1 && ok; ++mode) {
            double res[3];
            for (int level = 0; level < 3; ++level) {
                const int nodes = 512 << level;
                const ReducedGeometry geom = delaunay_coefficients(curve, 0.0, T, nodes);
                const JacobiField field = mode == 0
                                              ? axis_jacobi_field(curve, 0.0, T, nodes)
                                              : translation_jacobi_field(curve, 0.0, T, nodes);
                ModeProblem problem{geom, mode, BC::Neumann, BC::Neumann};
                res[level] = jacobi_residual(problem, field.values);
            }
            const double order = std::log2(res[0] / res[2]) / 2.0;
            summary += fmt("%s L%d order %.2f; ", space_name(fam.space).c_str(), mode, order);
            if (!(order >= 1.9)) {
                ok = false;
                detail = fmt("%s mode %d residual order %.3f < 1.9 (res %.3e -> %.3e)",
                             space_name(fam.space).c_str(), mode, order, res[0], res[2]);
            }
        }
    }
    r.pass = ok;
    r.detail = ok ? summary : detail;
    return r;
}

CriterionResult crit_period() {
    CriterionResult r{8, "period"};
    bool ok = true;
    std::string detail;
    double worst_gap = 0;
    for (int i = 1; i <= 20 && ok; ++i) {
        const double mu = 0.25 * i / 20.0;
        const DelaunayFamily fam = euclid(2, mu);
        const double T = period(fam);
        if (!(T >= 2.0 - 1e-12 && T <= M_PI + 1e-12)) {
            ok = false;
            detail = fmt("T(%g) = %.12f outside [2, pi]", mu, T);
            break;
        }
        const double gap = std::abs(T - period_from_ode(fam));
        worst_gap = std::max(worst_gap, gap);
        if (gap > 1e-6) {
            ok = false;
            detail = fmt("quadrature/ODE disagreement %.3e at mu=%g", gap, mu);
        }
    }
    double t_near = 0;
    if (ok) {
        t_near = period(euclid(2, 0.2499));
        if (std::abs(t_near - M_PI) > 1e-3) {
            ok = false;
            detail = fmt("T(0.2499) = %.8f not within 1e-3 of pi", t_near);
        }
    }
    r.pass = ok;
    r.detail = ok ? fmt("2 <= T <= pi on the sweep; max |quad - ODE| = %.2e; T(0.2499) = %.6f",
                        worst_gap, t_near)
                  : detail;
    return r;
}

CriterionResult crit_bracketing(const Config& cfg) {
    CriterionResult r{9, "bracketing"};
    const int trials = cfg.trials;
    struct Trial {
        double mu, X, split;
    };
    std::vector<Trial> params(trials);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> umu(0.03, 0.24), ux(2.0, 6.0), us(0.25, 0.75);
    for (auto& t : params) {
        t.mu = umu(rng);
        const double T = period(euclid(2, t.mu));
        t.X = ux(rng) * T;
        t.split = us(rng) * t.X;
    }
    std::vector<int> fails(trials, 0);
    par::parallel_for(params.size(), [&](std::size_t i) {
        const auto res = bracketing_check(euclid(2, params[i].mu), params[i].X, params[i].split);
        fails[i] = res.ok ? 0 : 1;
    });
    int bad = 0;
    for (int f : fails) bad += f;
    r.pass = bad == 0;
    r.detail = fmt("%d/%d seeded trials satisfied all three inequalities (seed %llu)",
                   trials - bad, trials, static_cast<unsigned long long>(cfg.seed));
    return r;
}

CriterionResult crit_oracle(const Config& cfg) {
    CriterionResult r{10, "oracle"};
    const int trials = 50;
    struct Trial {
        DelaunayFamily fam;
        int k, nodes;
        BC lo, hi;
        double x_lo, x_hi;
    };
    std::vector<Trial> params(trials);
    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (auto& t : params) {
        const bool hyp = u01(rng) < 0.5;
        const double cap = hyp ? mu_max(Space::Hyperbolic, 2, 1.2) : 0.25;
        const double mu = (0.2 + 0.7 * u01(rng)) * cap;
        t.fam = hyp ? hyper(1.2, mu) : euclid(2, mu);
        t.k = static_cast<int>(u01(rng) * 3);
        t.nodes = 40 + static_cast<int>(u01(rng) * 161);
        t.lo = u01(rng) < 0.5 ? BC::Dirichlet : BC::Neumann;
        t.hi = u01(rng) < 0.5 ? BC::Dirichlet : BC::Neumann;
        const double T = period(t.fam);
        t.x_lo = u01(rng) * T;
        t.x_hi = t.x_lo + (0.5 + 2.0 * u01(rng)) * T;
    }
    std::vector<int> fails(trials, 0);
    par::parallel_for(params.size(), [&](std::size_t i) {
        const Trial& t = params[i];
        const ProfileCurve curve = solve_profile(t.fam, 2048);
        const ReducedGeometry geom = delaunay_coefficients(curve, t.x_lo, t.x_hi, t.nodes);
        ModeProblem problem{geom, t.k, t.lo, t.hi};
        const auto coeffs = problem.coefficients(t.nodes);
        const double band = zero_band_width(coeffs);
        const auto [K, M] = assemble_from(coeffs, t.lo, t.hi);
        const int sturm = inertia_count(K, M, -band);
        const int dense = dense_negative_count(K, M, band);
        fails[i] = sturm == dense ? 0 : 1;
    });
    int bad = 0;
    for (int f : fails) bad += f;
    r.pass = bad == 0;
    r.detail = fmt("inertia count matched the dense eigensolver on %d/%d seeded problems",
                   trials - bad, trials);
    return r;
}

CriterionResult crit_stability() {
    CriterionResult r{11, "stability"};
    const DelaunayFamily fam = euclid(2, 0.15);
    const double T = period(fam);
    bool ok = true;
    std::string detail;
    long long prev_diff = -1;
    std::string diffs;
    long long last_diff = -1;
    for (double eps : {1e-3, 1e-4, 1e-5}) {
        Perturbation p;
        p.decay = Perturbation::Decay::Exponential;
        p.amplitude = eps;
        p.rate = 0.5;
        const PerturbedEnd end = make_perturbed_end(fam, p, 6.0 * T);
        const StabilityResult s = perturbed_index_stability(end, BC::Dirichlet, BC::Dirichlet);
        const long long diff = s.ind_perturbed - s.ind_base;
        diffs += fmt("eps=%g: %lld..+%lld cap %lld; ", eps, (long long)s.ind_base, diff,
                     (long long)s.zero_modes_cap);
        if (!s.ok) {
            ok = false;
            detail = fmt("sandwich failed at eps=%g: base %lld pert %lld cap %lld", eps,
                         (long long)s.ind_base, (long long)s.ind_perturbed,
                         (long long)s.zero_modes_cap);
        }
        if (prev_diff >= 0 && diff > prev_diff) {
            ok = false;
            detail = fmt("index difference grew as eps shrank (%lld -> %lld)", prev_diff, diff);
        }
        prev_diff = diff;
        last_diff = diff;
    }
    if (ok && last_diff != 0) {
        ok = false;
        detail = fmt("difference %lld at the smallest eps (want 0)", last_diff);
    }
    r.pass = ok;
    r.detail = ok ? diffs : detail;
    return r;
}

CriterionResult crit_nodal() {
    CriterionResult r{12, "nodal"};
    bool ok = true;
    std::string detail;
    for (const DelaunayFamily& fam : {euclid(2, 0.15), hyper(1.2, 0.1)}) {
        const ProfileCurve curve = solve_profile(fam, 4096);
        const double T = curve.period;
        const auto [z1, z2] = neumann_cut_points(curve);
        (void)z2;
        for (int ell = 1; ell <= 5 && ok; ++ell) {
            const int got_b = nodal_count(axis_jacobi_field(curve, 0.0, 0.5 * ell * T, 8192));
            const int got_c = nodal_count(axis_jacobi_field(curve, z1, z1 + ell * T, 8192));
            if (got_b != ell || got_c != 2 * ell + 1) {
                ok = false;
                detail = fmt("%s l=%d: B_l -> %d (want %d), C_l -> %d (want %d)",
                             space_name(fam.space).c_str(), ell, got_b, ell, got_c, 2 * ell + 1);
            }
        }
    }
    r.pass = ok;
    r.detail = ok ? "axis field has l nodal domains on B_l and 2l+1 on C_l, both space forms"
                  : detail;
    return r;
}

} // namespace

std::vector<CriterionResult> run(const Config& config) {
    std::vector<CriterionResult> out;
    auto want = [&](const char* name) {
        return config.only.empty() || config.only == name;
    };
    auto timed = [&](auto&& body) {
        const auto t0 = std::chrono::steady_clock::now();
        CriterionResult r = body();
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        out.push_back(std::move(r));
    };
    if (want("prop42")) timed([] { return crit_prop42(); });
    if (want("prop43")) timed([] { return crit_prop43(); });
    if (want("cylinder")) timed([] { return crit_cylinder(); });
    if (want("hyperbolic")) timed([] { return crit_hyperbolic(); });
    if (want("slope")) timed([] { return crit_slope(); });
    if (want("bounds")) timed([] { return crit_bounds(); });
    if (want("jacobi")) timed([] { return crit_jacobi(); });
    if (want("period")) timed([] { return crit_period(); });
    if (want("bracketing")) timed([&] { return crit_bracketing(config); });
    if (want("oracle")) timed([&] { return crit_oracle(config); });
    if (want("stability")) timed([] { return crit_stability(); });
    if (want("nodal")) timed([] { return crit_nodal(); });
    return out;
}

void print_table(const std::vector<CriterionResult>& results, std::ostream& out) {
    for (const auto& r : results) {
        char line[640];
        std::snprintf(line, sizeof(line), "[%s] %2d %-11s %6.2fs  %s\n",
                      r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                      r.detail.c_str());
        out << line;
    }
}

bool all_pass(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.pass) return false;
    return true;
}

} // namespace delidx::acceptance

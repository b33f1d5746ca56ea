#include "delidx/growth.hpp"

#include <algorithm>
#include <cmath>

#include "delidx/errors.hpp"
#include "delidx/numerics.hpp"
#include "delidx/par.hpp"
#include "json.hpp"

namespace delidx {

std::int64_t slab_index(const DelaunayFamily& family, double X, BC bc_lo, BC bc_hi,
                        const GridControls& ctl) {
    return block_index(make_slab(family, X, bc_lo, bc_hi), ctl).total_index;
}

GrowthExperiment run_growth(const DelaunayFamily& family, const std::vector<double>& lengths,
                            BC bc_lo, BC bc_hi, const GridControls& ctl) {
    validate(family);
    GrowthExperiment exp;
    exp.family = family;
    exp.lengths = lengths;
    exp.bc_lo = bc_lo;
    exp.bc_hi = bc_hi;
    exp.target_slope = 2.0 / period(family);
    exp.results.resize(lengths.size());
    par::parallel_for(lengths.size(), [&](std::size_t i) {
        exp.results[i] = {lengths[i], slab_index(family, lengths[i], bc_lo, bc_hi, ctl)};
    });
    slope_fit(exp);
    return exp;
}

double slope_fit(GrowthExperiment& exp) {
    const std::size_t m = exp.results.size();
    if (m < 5) throw usage_error("slope fits need at least 5 lengths");
    double min_len = exp.results.front().first, max_len = min_len;
    for (const auto& [x, idx] : exp.results) {
        min_len = std::min(min_len, x);
        max_len = std::max(max_len, x);
    }
    const double T = period(exp.family);
    if (max_len < 20.0 * T)
        throw usage_error("slope fits need lengths spanning at least 20 periods");
    const std::size_t start = static_cast<std::size_t>(0.4 * static_cast<double>(m));
    std::vector<double> xs, ys;
    for (std::size_t i = start; i < m; ++i) {
        xs.push_back(exp.results[i].first);
        ys.push_back(static_cast<double>(exp.results[i].second));
    }
    exp.fitted_slope = lsq_slope(xs.data(), ys.data(), xs.size());
    return exp.fitted_slope;
}

namespace {

struct SlicedCounts {
    std::int64_t full = 0, left = 0, right = 0;
};

// Counts for one mode on the full grid and on the two sub-grids sharing its
// nodes, all at the same shift, so interlacing holds at the matrix level.
SlicedCounts sliced_counts(const ModeProblem::Coeffs& c, std::size_t split_idx, BC outer_lo,
                           BC outer_hi, BC at_split, double shift) {
    auto slice = [&](std::size_t a, std::size_t b) {
        ModeProblem::Coeffs s;
        s.h = c.h;
        s.x.assign(c.x.begin() + a, c.x.begin() + b + 1);
        s.p.assign(c.p.begin() + a, c.p.begin() + b + 1);
        s.q.assign(c.q.begin() + a, c.q.begin() + b + 1);
        s.w.assign(c.w.begin() + a, c.w.begin() + b + 1);
        return s;
    };
    SlicedCounts out;
    {
        const auto [K, M] = assemble_from(c, outer_lo, outer_hi);
        out.full = inertia_count(K, M, shift);
    }
    {
        const auto [K, M] = assemble_from(slice(0, split_idx), outer_lo, at_split);
        out.left = inertia_count(K, M, shift);
    }
    {
        const auto [K, M] =
            assemble_from(slice(split_idx, c.x.size() - 1), at_split, outer_hi);
        out.right = inertia_count(K, M, shift);
    }
    return out;
}

} // namespace

BracketingResult bracketing_check(const DelaunayFamily& family, double X, double split,
                                  const GridControls& ctl_in) {
    validate(family);
    if (!(0 < split && split < X)) throw domain_error("split must lie inside (0, X)");
    const ProfileCurve curve = solve_profile(family, 4096);
    GridControls ctl = ctl_in;
    if (ctl.period_hint == 0) ctl.period_hint = curve.period;

    int nodes = initial_nodes(ctl, X);
    const ReducedGeometry geom = delaunay_coefficients(curve, 0.0, X, nodes);
    const int k_max = mode_cutoff(geom);

    BracketingResult res;
    res.ok = true;
    for (int level = 0; level < 2; ++level) {
        std::size_t split_idx =
            static_cast<std::size_t>(std::lround(split / X * (nodes - 1)));
        split_idx = std::clamp<std::size_t>(split_idx, 4, nodes - 5);
        std::int64_t d_full = 0, d_left = 0, d_right = 0;
        std::int64_t n_full = 0, n_left = 0, n_right = 0;
        for (int k = 0; k < k_max; ++k) {
            ModeProblem problem{geom, k, BC::Dirichlet, BC::Dirichlet};
            const auto coeffs = problem.coefficients(nodes);
            const double band = zero_band_width(coeffs);
            const std::int64_t mult = sphere_multiplicity(family.n, k);
            const SlicedCounts d = sliced_counts(coeffs, split_idx, BC::Dirichlet,
                                                 BC::Dirichlet, BC::Dirichlet, -band);
            const SlicedCounts nn = sliced_counts(coeffs, split_idx, BC::Neumann,
                                                  BC::Neumann, BC::Neumann, -band);
            d_full += mult * d.full;
            d_left += mult * d.left;
            d_right += mult * d.right;
            n_full += mult * nn.full;
            n_left += mult * nn.left;
            n_right += mult * nn.right;
        }
        res.ok = res.ok && d_full >= d_left + d_right && n_full <= n_left + n_right &&
                 d_full <= n_full;
        res.d_full = d_full;
        res.d_left = d_left;
        res.d_right = d_right;
        res.n_full = n_full;
        res.n_left = n_left;
        res.n_right = n_right;
        res.split = split_idx * (X / (nodes - 1));
        nodes = 2 * (nodes - 1) + 1; // keeps the split on a node
    }
    return res;
}

PerturbedEnd make_perturbed_end(const DelaunayFamily& family, const Perturbation& pert,
                                double length) {
    validate(family);
    if (family.space != Space::Euclidean)
        throw domain_error("perturbed ends use the exact-geometry path, Euclidean only");
    if (!(length > 0)) throw domain_error("perturbed ends need a positive length");

    const auto [lo, hi] = turning_radii(family);
    (void)hi;
    if (!(std::abs(pert.amplitude) < lo / 10.0))
        throw domain_error("perturbation amplitude must stay below a tenth of the neck radius");

    auto curve = std::make_shared<ProfileCurve>(solve_profile(family, 4096));
    const DelaunayFamily fam = family;
    RadiusField base_radius = [curve, fam](double x, double& r, double& dr, double& ddr) {
        double v, d;
        curve->eval(x, v, d);
        r = v;
        dr = d;
        ddr = profile_second_deriv(fam, v, d);
    };

    const Perturbation p = pert;
    auto w_eval = [p](double x, double& w, double& dw, double& ddw) {
        if (p.decay == Perturbation::Decay::Exponential) {
            w = p.amplitude * std::exp(-p.rate * x);
            dw = -p.rate * w;
            ddw = p.rate * p.rate * w;
            return;
        }
        // Mollifier bump on (bump_lo, bump_hi).
        const double c = 0.5 * (p.bump_lo + p.bump_hi), s = 0.5 * (p.bump_hi - p.bump_lo);
        const double u = (x - c) / s;
        if (std::abs(u) >= 1.0) {
            w = dw = ddw = 0.0;
            return;
        }
        const double g = 1.0 / (u * u - 1.0);
        const double psi = std::exp(g);
        const double dpsi = psi * (-2.0 * u * g * g);
        const double ddpsi =
            psi * (4.0 * u * u * g * g * g * g - 2.0 * g * g + 8.0 * u * u * g * g * g);
        w = p.amplitude * psi;
        dw = p.amplitude * dpsi / s;
        ddw = p.amplitude * ddpsi / (s * s);
    };

    PerturbedEnd end;
    end.base = family;
    end.pert = pert;
    end.x_lo = 0.0;
    end.x_hi = length;
    end.base_radius = base_radius;
    end.radius = [base_radius, w_eval](double x, double& r, double& dr, double& ddr) {
        double w, dw, ddw;
        base_radius(x, r, dr, ddr);
        w_eval(x, w, dw, ddw);
        r += w;
        dr += dw;
        ddr += ddw;
    };
    double c2 = 0.0;
    const int scan = 2048;
    for (int i = 0; i <= scan; ++i) {
        double w, dw, ddw;
        w_eval(length * i / scan, w, dw, ddw);
        c2 = std::max(c2, std::abs(w) + std::abs(dw) + std::abs(ddw));
    }
    end.c2_distance = c2;
    return end;
}

StabilityResult perturbed_index_stability(const PerturbedEnd& end, BC bc_lo, BC bc_hi,
                                          const GridControls& ctl_in) {
    GridControls ctl = ctl_in;
    if (ctl.period_hint == 0) ctl.period_hint = period(end.base);

    const int probe = std::max(1024, initial_nodes(ctl, end.x_hi - end.x_lo));
    const ReducedGeometry g_base =
        rotation_coefficients(end.base_radius, end.base.n, end.x_lo, end.x_hi, probe);
    const ReducedGeometry g_pert =
        rotation_coefficients(end.radius, end.base.n, end.x_lo, end.x_hi, probe);
    const int k_max = std::max(mode_cutoff(g_base), mode_cutoff(g_pert));

    StabilityResult out;
    for (int k = 0; k < k_max; ++k) {
        ModeProblem base_problem{g_base, k, bc_lo, bc_hi};
        const Spectrum s = count_negative(base_problem, ctl);
        GridControls matched = ctl;
        matched.fixed_nodes = s.grid_nodes;
        matched.zero_band_override = s.zero_band;
        ModeProblem pert_problem{g_pert, k, bc_lo, bc_hi};
        const Spectrum sp = count_negative(pert_problem, matched);
        const std::int64_t mult = sphere_multiplicity(end.base.n, k);
        out.ind_base += mult * s.neg_count;
        out.ind_perturbed += mult * sp.neg_count;
        out.zero_modes_cap += mult * s.zero_modes;
    }
    out.ok = out.ind_base <= out.ind_perturbed &&
             out.ind_perturbed <= out.ind_base + out.zero_modes_cap;
    return out;
}

double multi_end_growth(const std::vector<DelaunayFamily>& families, double X,
                        const GridControls& ctl) {
    if (families.empty()) throw usage_error("multi-end growth needs at least one end");
    std::int64_t total = 0;
    for (const auto& fam : families) total += slab_index(fam, X, BC::Dirichlet, BC::Dirichlet, ctl);
    return static_cast<double>(total) / X;
}

std::vector<GrowthRow> growth_table(const std::vector<DelaunayFamily>& families,
                                    const std::vector<double>& lengths,
                                    const GridControls& ctl) {
    if (families.empty()) throw usage_error("growth tables need at least one end");
    for (const auto& f : families) validate(f);
    std::vector<GrowthRow> rows(lengths.size());
    par::parallel_for(lengths.size(), [&](std::size_t i) {
        GrowthRow row;
        row.X = lengths[i];
        for (const auto& fam : families) {
            row.index_dirichlet += slab_index(fam, lengths[i], BC::Dirichlet, BC::Dirichlet, ctl);
            row.index_neumann += slab_index(fam, lengths[i], BC::Neumann, BC::Neumann, ctl);
        }
        rows[i] = row;
    });
    return rows;
}

void write_growth_csv(const std::vector<GrowthRow>& rows, std::ostream& out) {
    out << "X,index_dirichlet,index_neumann\n";
    char buf[96];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%lld,%lld\n", r.X,
                      static_cast<long long>(r.index_dirichlet),
                      static_cast<long long>(r.index_neumann));
        out << buf;
    }
}

std::string fit_summary_json(const GrowthExperiment& exp, double rel_err) {
    nlohmann::ordered_json j;
    j["target_slope"] = exp.target_slope;
    j["fitted_slope"] = exp.fitted_slope;
    j["rel_err"] = rel_err;
    j["lengths"] = exp.lengths;
    j["num_ends"] = exp.num_ends;
    return j.dump(2);
}

} // namespace delidx
